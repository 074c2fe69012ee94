#include "mbc/config.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace mbc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::runtime_error("config: bad number '" + text + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(trim(item)));
  if (out.empty()) throw std::runtime_error("config: empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item)));
  if (out.empty()) throw std::runtime_error("config: empty list");
  return out;
}

std::map<std::string, std::string> parse_config_file(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) + ": unclosed section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "alpha" && section != "mixing" && section != "run")
        throw std::runtime_error("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": key outside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
    kv[section + "." + key] = value;
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, RunConfig& config) {
  for (const auto& [key, value] : kv) {
    if (key == "alpha.family") config.alpha_family = value;
    else if (key == "alpha.csv") config.alpha_csv = value;
    else if (key == "alpha.delta") config.alpha_params.delta = parse_double(value);
    else if (key == "alpha.theta") config.alpha_params.theta = parse_double(value);
    else if (key == "alpha.tau") config.alpha_params.tau = parse_double(value);
    else if (key == "alpha.r1") config.alpha_params.r1 = parse_double(value);
    else if (key == "alpha.r2") config.alpha_params.r2 = parse_double(value);
    else if (key == "alpha.gamma") config.alpha_params.gamma = parse_double(value);
    else if (key == "alpha.delta2") config.alpha_params.delta2 = parse_double(value);
    else if (key == "alpha.theta1") config.alpha_params.theta1 = parse_double(value);
    else if (key == "alpha.theta2") config.alpha_params.theta2 = parse_double(value);
    else if (key == "mixing.family") config.mixing_family = value;
    else if (key == "mixing.a") config.mix_a = parse_double(value);
    else if (key == "mixing.b" || key == "mixing.lambda") config.mix_scale = parse_double(value);
    else if (key == "run.m") config.m_list = parse_int_list(value);
    else if (key == "run.n") config.n = std::stoi(value);
    else if (key == "run.kappa") config.kappa_list = parse_double_list(value);
    else if (key == "run.eps_tail") config.eps_tail = parse_double(value);
    else if (key == "run.paths") config.paths = static_cast<std::size_t>(std::stoull(value));
    else if (key == "run.seed") config.seed = std::stoull(value);
    else if (key == "run.out") config.out = value;
    else throw std::runtime_error("config: unknown key '" + key + "'");
  }
}

}  // namespace mbc

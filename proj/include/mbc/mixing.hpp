#ifndef MBC_MIXING_HPP
#define MBC_MIXING_HPP

#include <string>

#include "mbc/rng.hpp"

namespace mbc {

/// The positive mixing variable Theta, known through its Laplace transform
/// f*(x) = E[exp(-x Theta)].  f* is both the marginal survival function of
/// each loss and the generator of the dependence structure, so everything
/// downstream only ever touches it through this class.
class MixingFamily {
 public:
  enum class Kind {
    gamma_mixing,  // Theta ~ Gamma(a, rate b), a >= 1: f*(x) = (1 + x/b)^{-a}, Pareto losses
    gamma_claims,  // f*(x) = Q(a, lambda x), 0 < a <= 1: Gamma(a, lambda) losses
  };

  static MixingFamily gamma_mixing(double a, double b);
  static MixingFamily gamma_claims(double a, double lambda);
  static MixingFamily from_config(const std::string& name, double a, double scale);

  Kind kind() const { return kind_; }
  double shape() const { return a_; }
  /// b for gamma_mixing, lambda for gamma_claims.
  double scale() const { return scale_; }

  /// f*(x), x >= 0; value in (0, 1].
  double laplace(double x) const;

  /// l-th derivative of f* at x, with sign (-1)^l.  Throws std::domain_error
  /// at x = 0 for gamma_claims with a < 1 and l >= 1 (the derivative blows up).
  double laplace_deriv(int l, double x) const;

  /// log |f*^{(l)}(x)|; same domain as laplace_deriv.  The sign is always
  /// (-1)^l, so callers can work with positive series terms throughout.
  double log_abs_laplace_deriv(int l, double x) const;

  /// x with f*(x) = u, u in (0, 1]; closed form for gamma_mixing, monotone
  /// Newton/bisection for gamma_claims.  Throws std::invalid_argument outside
  /// (0, 1].
  double laplace_inv(double u) const;

  /// Integral of f* over (y, infinity).  Throws std::domain_error for
  /// gamma_mixing with a <= 1 (the marginal has infinite mean).
  double tail_integral(double y) const;

  double sample_theta(Rng& rng) const;

 private:
  MixingFamily(Kind kind, double a, double scale) : kind_(kind), a_(a), scale_(scale) {}

  Kind kind_;
  double a_;
  double scale_;
};

}  // namespace mbc

#endif

#pragma once

// The polynomial H_p(z) = -(p-1) z^p + p z^(p-1) on [1, p/(p-1)], its inverse
// omega_p, and U(x) = omega_p(x)^p / x. Every Bellman value in this library is
// expressed through omega_p.

namespace sharpmax {

/// Integrability exponent p > 1 together with q = p/(p-1).
class Exponent {
 public:
  explicit Exponent(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  double p_;
  double q_;
};

/// H_p(z). Throws std::domain_error when z leaves [1, q] by more than 1e-12.
double h_poly(double z, const Exponent& p);

/// d/dz H_p(z) = p (p-1) z^(p-2) (1 - z).
double h_poly_derivative(double z, const Exponent& p);

/// 1 - H_p(1 + w), accurate for small w.
double h_poly_deficit(double w, const Exponent& p);

/// The unique z in [1, q] with H_p(z) = x, for x in [0, 1].
/// omega_p(0) = q and omega_p(1) = 1 are returned exactly.
double omega_p(double x, const Exponent& p);

/// U(x) = omega_p(x)^p / x on (0, 1].
double u_func(double x, const Exponent& p);

}  // namespace sharpmax

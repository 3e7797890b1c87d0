#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sharpmax/report.hpp"
#include "sharpmax/special_functions.hpp"
#include "sharpmax/tree.hpp"

namespace sharpmax {

/// Left-continuous step function on (0, 1]: value v_i on (t_{i-1}, t_i] with
/// 0 = t_0 < t_1 < ... < t_m = 1. Piece widths are stored next to the
/// breakpoints so that integrals use the original atom measures.
class StepFunction1D {
 public:
  StepFunction1D(std::vector<double> widths, std::vector<double> values);

  std::size_t pieces() const noexcept { return values_.size(); }
  std::span<const double> breakpoints() const noexcept { return breaks_; }
  std::span<const double> widths() const noexcept { return widths_; }
  std::span<const double> values() const noexcept { return values_; }

  bool is_nonincreasing() const noexcept;

  /// Index of the piece (t_{i-1}, t_i] containing t, for t in (0, 1].
  std::size_t piece_at(double t) const;
  double operator()(double t) const { return values_[piece_at(t)]; }

  /// Integral of g over (0, k].
  double integral(double k) const;
  /// Integral of g^p over (0, k].
  double integral_p(double k, double p) const;

  /// |{t in (0, 1] : g(t) > y}|.
  double level_measure(double y) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> widths_;
  std::vector<double> values_;
};

/// The nonincreasing rearrangement phi*: atoms sorted by value, descending,
/// with equal values merged into one piece.
StepFunction1D rearrange(const TreeFunction& phi);

/// Integral of (v + c/t)^e over [a, b], 0 <= a < b, with v, c >= 0 and c = 0
/// whenever a = 0. Closed form when e is a nonnegative integer or when v or c
/// vanishes; adaptive Gauss-Kronrod quadrature to relative 1e-10 otherwise.
double integrate_shifted_power(double v, double c, double a, double b,
                               double e);

/// Running average t -> (1/t) * integral of g over (0, t] of a nonincreasing
/// step function. On piece i it equals v_i + c_i / t with
/// c_i = C_{i-1} - v_i t_{i-1}, C the cumulative integral of g.
class HardyAverage {
 public:
  explicit HardyAverage(StepFunction1D g);

  const StepFunction1D& base() const noexcept { return g_; }

  /// Throws std::domain_error for t <= 0.
  double operator()(double t) const;

  /// Integral of hardy(t)^p over (0, k].
  double integral_p(double k, double p) const;

  /// Integral of g(t) * hardy(t)^e over (0, k].
  double integral_weighted(double k, double e) const;

 private:
  StepFunction1D g_;
  std::vector<double> offsets_;  // c_i per piece
};

/// Both sides of the weak type (1,1) inequality
/// mu{M phi > lambda} <= (1/lambda) * integral of phi over {M phi > lambda}.
VerificationReport check_weak_type(const TreeFunction& phi, double lambda);

/// (M phi)*(t) <= (1/t) * integral of phi* over (0, t], compared at all
/// breakpoints of both sides and the midpoints between them.
VerificationReport check_lemma31(const TreeFunction& phi);

/// integral of (M phi)^p over K <= A * omega_p(B^p / (k^(p-1) A))^p with
/// A = integral of (phi*)^p and B = integral of phi* over (0, k], k = mu(K).
/// K is given as leaf positions.
VerificationReport check_lemma32(const TreeFunction& phi,
                                 std::span<const std::size_t> k_leaves,
                                 const Exponent& p);

/// integral of (M phi)^p over X <= integral of hardy(phi*)^p over (0, 1].
VerificationReport check_corollary21(const TreeFunction& phi,
                                     const Exponent& p);

/// The Hoelder constraints on A = A(k), B = B(k):
///   i)   B^p <= k^(p-1) A
///   ii)  A <= F and B <= f
///   iii) (f - B)^p <= (1 - k)^(p-1) (F - A)
VerificationReport check_conditions_i_iii(const TreeFunction& phi, double k,
                                          const Exponent& p);

}  // namespace sharpmax

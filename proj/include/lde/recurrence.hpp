#pragma once

// Linear difference equations of order N
//
//   y_{k+N} + f_{N-1,k} y_{k+N-1} + ... + f_{0,k} y_k + f_k = 0
//
// together with the two baseline propagators: the direct scalar recursion
// (the oracle every other method is checked against) and companion-form
// matrix propagation.

#include <span>
#include <variant>
#include <vector>

#include "lde/common.hpp"

namespace lde {

/// Explicit sequence; entry j holds the value at index k_start + j.
struct Tabulated {
  long k_start = 0;
  std::vector<Complex> values;
};

/// sum_j coefficients[j] * (epsilon k)^j
struct PolynomialInEpsK {
  std::vector<Complex> coefficients;
  double epsilon = 0.0;
};

/// offset + amplitude * sin(frequency * epsilon * k + phase)
struct SinusoidalInEpsK {
  Complex amplitude{0.0, 0.0};
  Complex offset{0.0, 0.0};
  double frequency = 1.0;
  double phase = 0.0;
  double epsilon = 0.0;
};

struct Constant {
  Complex value{0.0, 0.0};
};

class CoefficientModel {
 public:
  using Variant = std::variant<Constant, Tabulated, PolynomialInEpsK, SinusoidalInEpsK>;

  CoefficientModel() = default;
  CoefficientModel(Constant c) : model_(std::move(c)) {}
  CoefficientModel(Tabulated t) : model_(std::move(t)) {}
  CoefficientModel(PolynomialInEpsK p) : model_(std::move(p)) {}
  CoefficientModel(SinusoidalInEpsK s) : model_(std::move(s)) {}
  CoefficientModel(Complex c) : model_(Constant{c}) {}
  CoefficientModel(double c) : model_(Constant{Complex(c, 0.0)}) {}

  /// Value at index k. Throws IndexOutOfWindow when a Tabulated model does not cover k.
  Complex at(long k) const;

  /// True when every index evaluates to exactly zero.
  bool identically_zero() const;

  /// Whether the model covers all of [first, last].
  bool covers(long first, long last) const;

  std::optional<double> epsilon() const;

  /// Same family with epsilon replaced; Constant and Tabulated are returned unchanged.
  CoefficientModel with_epsilon(double epsilon) const;

  /// Samples the model over [first, last] as a Tabulated model.
  CoefficientModel tabulate(long first, long last) const;

  const Variant& variant() const noexcept { return model_; }

 private:
  Variant model_{Constant{}};
};

/// Coefficients f_{0,k} ... f_{N-1,k} and forcing f_k at one index.
struct StepCoefficients {
  CVector f;
  Complex forcing{0.0, 0.0};
};

struct RecurrenceSpec {
  int order = 2;
  /// coeffs[i] models f_{i,k}, i = 0 ... order-1.
  std::vector<CoefficientModel> coeffs;
  CoefficientModel forcing{Constant{}};
  long k_start = 0;
  long horizon = 1;

  /// Last index (inclusive) at which coefficients may be requested.
  long window_end() const noexcept { return k_start + horizon + order; }
  /// Number of values in a full trajectory, horizon + order.
  long trajectory_length() const noexcept { return horizon + order; }
  bool homogeneous() const { return forcing.identically_zero(); }

  /// Throws InvalidSpec (order, shape, epsilon, zero f_0) or IndexOutOfWindow
  /// (tabulated coverage).
  void validate() const;

  /// Copy with every parametric model's epsilon replaced.
  RecurrenceSpec with_epsilon(double epsilon) const;
};

/// Companion-form state X_k: entries ordered newest first, (y_{k+N-1}, ..., y_k).
struct CompanionState {
  long k = 0;
  CVector entries;
};

/// (f_0 ... f_{N-1}, f_k) at k; throws IndexOutOfWindow outside the spec window.
StepCoefficients eval_coeffs(const RecurrenceSpec& spec, long k);

/// Direct recursion from y_{k_start} ... y_{k_start+N-1}; horizon steps.
ScalarTrajectory direct_solve(const RecurrenceSpec& spec, std::span<const Complex> initial);

/// First row (-f_{N-1,k}, ..., -f_{0,k}), ones on the subdiagonal.
CMatrix companion_matrix(const RecurrenceSpec& spec, long k);

/// X_{k+1} = T_k X_k + F_k with F_k = (-f_k, 0, ..., 0).
ScalarTrajectory companion_propagate(const RecurrenceSpec& spec,
                                     std::span<const Complex> initial);

}  // namespace lde

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lde {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 8;

enum class ErrorKind {
  InvalidSpec,
  IndexOutOfWindow,
  SingularGauge,
  DegenerateRoots,
  NoConvergence,
  AmbiguousTracking,
  Breakdown,
};

const char* to_string(ErrorKind kind);

/// Numerical and contract failures. `step` and `branch` are filled in when the
/// failure can be pinned to a propagation index or a root branch.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<long> step = std::nullopt,
        std::optional<int> branch = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<long> step() const noexcept { return step_; }
  std::optional<int> branch() const noexcept { return branch_; }

  /// Copy of this error with the step index attached (keeps an existing one).
  Error at_step(long k) const;

  /// True for the kinds that signal numerical breakdown rather than bad input.
  bool numerical() const noexcept;

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<long> step_;
  std::optional<int> branch_;
};

/// Scalar solution sequence y_k for k in [k_start, k_start + size).
struct ScalarTrajectory {
  long k_start = 0;
  std::vector<Complex> values;

  const Complex& at(long k) const { return values.at(static_cast<std::size_t>(k - k_start)); }
  long k_end() const { return k_start + static_cast<long>(values.size()); }
};

/// Error of `value` against `reference[k]`, relative to the largest oracle
/// magnitude over the N most recent indices (the size of the exact state).
/// Falls back to the absolute error when that window is identically zero.
double windowed_relative_error(const ScalarTrajectory& reference, long k, Complex value, int order);

}  // namespace lde

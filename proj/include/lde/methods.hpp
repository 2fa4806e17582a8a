#pragma once

// Runs the propagators side by side on one problem and tabulates their error
// against the direct recursion.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lde/recurrence.hpp"
#include "lde/roots.hpp"

namespace lde {

enum class Method { Direct, Companion, GaugeExact, Explicit3, Wkb3, Riccati, WkbGeneral };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// explicit3, wkb3 and riccati only exist for N = 3.
bool third_order_only(Method m);
/// wkb-general and riccati are defined for f_k = 0 only.
bool requires_homogeneous(Method m);

struct MethodResult {
  Method method = Method::Direct;
  ScalarTrajectory values;
  /// windowed_relative_error against the oracle, one entry per index.
  std::vector<double> rel_error;

  double terminal_error() const { return rel_error.empty() ? 0.0 : rel_error.back(); }
  double max_error() const;
};

struct ComparisonTable {
  ScalarTrajectory oracle;
  std::vector<MethodResult> results;
};

struct CompareOptions {
  double root_tolerance = kRootTolerance;
};

/// Single method over the full trajectory range of `spec`. Errors carry the
/// failing step index and the method name.
ScalarTrajectory run_method(const RecurrenceSpec& spec, std::span<const Complex> initial,
                            Method method, const CompareOptions& options = {});

ComparisonTable compare_methods(const RecurrenceSpec& spec, std::span<const Complex> initial,
                                std::span<const Method> methods,
                                const CompareOptions& options = {});

}  // namespace lde

#pragma once

// Epsilon sweeps and batched oracle comparisons. Every kernel has a serial
// reference and an OpenMP version; both produce identical results because
// each point is an independent pure computation written to its own slot.

#include <functional>
#include <span>
#include <vector>

#include "lde/methods.hpp"

namespace lde {

struct SweepPoint {
  double epsilon = 0.0;
  /// Indexed like SweepResult::methods.
  std::vector<double> terminal_error;
  std::vector<double> max_error;
};

struct SweepResult {
  std::vector<Method> methods;
  std::vector<SweepPoint> points;
};

SweepResult sweep_serial(const RecurrenceSpec& spec, std::span<const Complex> initial,
                         std::span<const Method> methods, std::span<const double> epsilons,
                         const CompareOptions& options = {});

SweepResult sweep_parallel(const RecurrenceSpec& spec, std::span<const Complex> initial,
                           std::span<const Method> methods, std::span<const double> epsilons,
                           const CompareOptions& options = {});

/// out[i] = task(i) for i in [0, count). The parallel version rethrows the
/// exception of the lowest failing index after the loop completes.
std::vector<double> map_serial(std::size_t count, const std::function<double(std::size_t)>& task);
std::vector<double> map_parallel(std::size_t count, const std::function<double(std::size_t)>& task);

/// Number of OpenMP threads available (1 when built without OpenMP).
int parallel_threads();

}  // namespace lde

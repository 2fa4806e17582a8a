#include "lde/sweep.hpp"

#include <exception>

#ifdef LDE_HAVE_OPENMP
#include <omp.h>
#endif

namespace lde {

namespace {

SweepPoint sweep_point(const RecurrenceSpec& spec, std::span<const Complex> initial,
                       std::span<const Method> methods, double epsilon,
                       const CompareOptions& options) {
  const ComparisonTable table = compare_methods(spec.with_epsilon(epsilon), initial, methods, options);
  SweepPoint point{epsilon, {}, {}};
  for (const auto& r : table.results) {
    point.terminal_error.push_back(r.terminal_error());
    point.max_error.push_back(r.max_error());
  }
  return point;
}

template <class T, class Fn>
void parallel_fill(std::vector<T>& out, Fn&& fn) {
  const auto count = static_cast<long>(out.size());
  std::vector<std::exception_ptr> errors(out.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

SweepResult sweep_serial(const RecurrenceSpec& spec, std::span<const Complex> initial,
                         std::span<const Method> methods, std::span<const double> epsilons,
                         const CompareOptions& options) {
  SweepResult result{{methods.begin(), methods.end()}, {}};
  result.points.reserve(epsilons.size());
  for (const double eps : epsilons) result.points.push_back(sweep_point(spec, initial, methods, eps, options));
  return result;
}

SweepResult sweep_parallel(const RecurrenceSpec& spec, std::span<const Complex> initial,
                           std::span<const Method> methods, std::span<const double> epsilons,
                           const CompareOptions& options) {
  SweepResult result{{methods.begin(), methods.end()}, std::vector<SweepPoint>(epsilons.size())};
  parallel_fill(result.points, [&](std::size_t i) {
    return sweep_point(spec, initial, methods, epsilons[i], options);
  });
  return result;
}

std::vector<double> map_serial(std::size_t count, const std::function<double(std::size_t)>& task) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
  return out;
}

std::vector<double> map_parallel(std::size_t count, const std::function<double(std::size_t)>& task) {
  std::vector<double> out(count);
  parallel_fill(out, task);
  return out;
}

int parallel_threads() {
#ifdef LDE_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace lde

#include "lde/methods.hpp"

#include <algorithm>
#include <array>

#include "lde/gauge.hpp"
#include "lde/third_order.hpp"
#include "lde/wkb.hpp"

namespace lde {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kNames{{
    {Method::Direct, "direct"},
    {Method::Companion, "companion"},
    {Method::GaugeExact, "gauge-exact"},
    {Method::Explicit3, "explicit3"},
    {Method::Wkb3, "wkb3"},
    {Method::Riccati, "riccati"},
    {Method::WkbGeneral, "wkb-general"},
}};

long last_index(const RecurrenceSpec& spec) { return spec.k_start + spec.trajectory_length() - 1; }

// Steps a component vector across the trajectory range with tracked frames.
template <class StepFn>
ScalarTrajectory run_on_frames(const RecurrenceSpec& spec, std::span<const Complex> initial,
                               const CompareOptions& options, StepFn&& stepper) {
  const long last = last_index(spec);
  const std::vector<RootFrame> frames = track_frames(spec, spec.k_start, last, options.root_tolerance);
  long k = spec.k_start;
  ScalarTrajectory out{spec.k_start, {}};
  try {
    ComponentVector y = decompose_initial(initial, power_gauge(frames.front()));
    out.values.push_back(reconstruct(y));
    for (; k < last; ++k) {
      const auto j = static_cast<std::size_t>(k - spec.k_start);
      y = stepper(y, frames[j], frames[j + 1], k);
      out.values.push_back(reconstruct(y));
    }
  } catch (const Error& e) {
    throw e.at_step(k);
  }
  return out;
}

ScalarTrajectory run_riccati(const RecurrenceSpec& spec, std::span<const Complex> initial,
                             const CompareOptions& options) {
  // Three independent homogeneous solutions seeded with root powers at k_start;
  // their ratio sequences are the Riccati branches. Two extra steps give the
  // p2 values needed by the gauge at the last index.
  const RootFrame first = make_frame(spec.k_start, eval_coeffs(spec, spec.k_start).f,
                                     options.root_tolerance);
  RecurrenceSpec extended = spec;
  extended.horizon += 2;
  extended.forcing = CoefficientModel(Constant{});

  std::vector<third::RiccatiBranch> branches;
  for (int n = 0; n < 3; ++n) {
    const Complex rho = first.roots[n];
    const std::array<Complex, 3> seed{Complex{1.0, 0.0}, rho, rho * rho};
    branches.push_back(third::ratio_branch(direct_solve(extended, seed), n));
  }

  const long last = last_index(spec);
  long k = spec.k_start;
  ScalarTrajectory out{spec.k_start, {}};
  try {
    GaugeSet now = third::riccati_gauge(branches, k);
    ComponentVector y = decompose_initial(initial, now);
    out.values.push_back(reconstruct(y));
    for (; k < last; ++k) {
      GaugeSet next = third::riccati_gauge(branches, k + 1);
      y = third::decoupled_step(y, now.g.row(0).transpose(), next, Complex{0.0, 0.0});
      out.values.push_back(reconstruct(y));
      now = std::move(next);
    }
  } catch (const Error& e) {
    throw e.at_step(k);
  }
  return out;
}

ScalarTrajectory dispatch(const RecurrenceSpec& spec, std::span<const Complex> initial,
                          Method method, const CompareOptions& options) {
  switch (method) {
    case Method::Direct:
      return direct_solve(spec, initial);
    case Method::Companion:
      return companion_propagate(spec, initial);
    case Method::GaugeExact: {
      const std::vector<RootFrame> frames =
          track_frames(spec, spec.k_start, last_index(spec), options.root_tolerance);
      return propagate_components(spec, initial, [&](long k) {
               return power_gauge(frames[static_cast<std::size_t>(k - spec.k_start)]);
             }).reconstructed;
    }
    case Method::Explicit3:
      return run_on_frames(spec, initial, options,
                           [&](const ComponentVector& y, const RootFrame& a, const RootFrame& b,
                               long k) { return third::explicit_step(y, a, b, spec.forcing.at(k)); });
    case Method::Wkb3:
      return run_on_frames(spec, initial, options,
                           [&](const ComponentVector& y, const RootFrame& a, const RootFrame& b,
                               long k) { return third::wkb3_step(y, a, b, spec.forcing.at(k)); });
    case Method::WkbGeneral:
      return run_on_frames(spec, initial, options,
                           [](const ComponentVector& y, const RootFrame& a, const RootFrame& b,
                              long) { return wkb_step_general(y, a, b).first; });
    case Method::Riccati:
      return run_riccati(spec, initial, options);
  }
  throw Error(ErrorKind::InvalidSpec, "unknown method");
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kNames) {
    if (method == m) return name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [method, n] : kNames) {
    if (n == name) return method;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> out;
    for (const auto& entry : kNames) out.push_back(entry.first);
    return out;
  }();
  return methods;
}

bool third_order_only(Method m) {
  return m == Method::Explicit3 || m == Method::Wkb3 || m == Method::Riccati;
}

bool requires_homogeneous(Method m) { return m == Method::WkbGeneral || m == Method::Riccati; }

double MethodResult::max_error() const {
  return rel_error.empty() ? 0.0 : *std::max_element(rel_error.begin(), rel_error.end());
}

ScalarTrajectory run_method(const RecurrenceSpec& spec, std::span<const Complex> initial,
                            Method method, const CompareOptions& options) {
  spec.validate();
  const std::string name(to_string(method));
  if (third_order_only(method) && spec.order != 3) {
    throw Error(ErrorKind::InvalidSpec, name + " requires order N = 3");
  }
  if (requires_homogeneous(method) && !spec.homogeneous()) {
    throw Error(ErrorKind::InvalidSpec, name + " is defined for homogeneous problems only");
  }
  try {
    return dispatch(spec, initial, method, options);
  } catch (const Error& e) {
    throw Error(e.kind(), name + ": " + e.detail(), e.step(), e.branch());
  }
}

ComparisonTable compare_methods(const RecurrenceSpec& spec, std::span<const Complex> initial,
                                std::span<const Method> methods, const CompareOptions& options) {
  ComparisonTable table;
  table.oracle = run_method(spec, initial, Method::Direct, options);
  for (const Method m : methods) {
    MethodResult r{m, run_method(spec, initial, m, options), {}};
    r.rel_error.reserve(r.values.values.size());
    for (long k = r.values.k_start; k < r.values.k_end(); ++k) {
      r.rel_error.push_back(windowed_relative_error(table.oracle, k, r.values.at(k), spec.order));
    }
    table.results.push_back(std::move(r));
  }
  return table;
}

}  // namespace lde

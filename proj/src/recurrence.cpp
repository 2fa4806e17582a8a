#include "lde/recurrence.hpp"

#include <cmath>

namespace lde {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_initial(const RecurrenceSpec& spec, std::span<const Complex> initial) {
  if (static_cast<long>(initial.size()) != spec.order) {
    throw Error(ErrorKind::InvalidSpec, "initial data must hold exactly " +
                                            std::to_string(spec.order) + " values, got " +
                                            std::to_string(initial.size()));
  }
}

}  // namespace

Complex CoefficientModel::at(long k) const {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [k](const Tabulated& t) {
            const long j = k - t.k_start;
            if (j < 0 || j >= static_cast<long>(t.values.size())) {
              throw Error(ErrorKind::IndexOutOfWindow,
                          "tabulated coefficient not defined at k=" + std::to_string(k));
            }
            return t.values[static_cast<std::size_t>(j)];
          },
          [k](const PolynomialInEpsK& p) {
            const double x = p.epsilon * static_cast<double>(k);
            Complex acc{0.0, 0.0};
            for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
              acc = acc * x + *it;
            }
            return acc;
          },
          [k](const SinusoidalInEpsK& s) {
            return s.offset +
                   s.amplitude * std::sin(s.frequency * s.epsilon * static_cast<double>(k) + s.phase);
          },
      },
      model_);
}

bool CoefficientModel::identically_zero() const {
  const auto zero = [](Complex c) { return c == Complex{0.0, 0.0}; };
  return std::visit(
      overloaded{
          [&](const Constant& c) { return zero(c.value); },
          [&](const Tabulated& t) {
            for (const auto& v : t.values) {
              if (!zero(v)) return false;
            }
            return true;
          },
          [&](const PolynomialInEpsK& p) {
            for (const auto& v : p.coefficients) {
              if (!zero(v)) return false;
            }
            return true;
          },
          [&](const SinusoidalInEpsK& s) { return zero(s.offset) && zero(s.amplitude); },
      },
      model_);
}

bool CoefficientModel::covers(long first, long last) const {
  if (const auto* t = std::get_if<Tabulated>(&model_)) {
    return first >= t->k_start && last < t->k_start + static_cast<long>(t->values.size());
  }
  return true;
}

std::optional<double> CoefficientModel::epsilon() const {
  if (const auto* p = std::get_if<PolynomialInEpsK>(&model_)) return p->epsilon;
  if (const auto* s = std::get_if<SinusoidalInEpsK>(&model_)) return s->epsilon;
  return std::nullopt;
}

CoefficientModel CoefficientModel::with_epsilon(double epsilon) const {
  CoefficientModel copy = *this;
  if (auto* p = std::get_if<PolynomialInEpsK>(&copy.model_)) p->epsilon = epsilon;
  if (auto* s = std::get_if<SinusoidalInEpsK>(&copy.model_)) s->epsilon = epsilon;
  return copy;
}

CoefficientModel CoefficientModel::tabulate(long first, long last) const {
  Tabulated t{first, {}};
  t.values.reserve(static_cast<std::size_t>(last - first + 1));
  for (long k = first; k <= last; ++k) t.values.push_back(at(k));
  return CoefficientModel(std::move(t));
}

void RecurrenceSpec::validate() const {
  if (order < kMinOrder || order > kMaxOrder) {
    throw Error(ErrorKind::InvalidSpec, "order must lie in [" + std::to_string(kMinOrder) + ", " +
                                            std::to_string(kMaxOrder) + "], got " +
                                            std::to_string(order));
  }
  if (static_cast<int>(coeffs.size()) != order) {
    throw Error(ErrorKind::InvalidSpec, "expected " + std::to_string(order) +
                                            " coefficient models, got " +
                                            std::to_string(coeffs.size()));
  }
  if (horizon < 1) throw Error(ErrorKind::InvalidSpec, "horizon must be positive");

  const auto check_model = [&](const CoefficientModel& m, const std::string& name) {
    if (auto eps = m.epsilon(); eps && !(*eps >= 0.0)) {
      throw Error(ErrorKind::InvalidSpec, name + ": epsilon must be non-negative");
    }
    if (!m.covers(k_start, window_end())) {
      throw Error(ErrorKind::IndexOutOfWindow,
                  name + ": tabulated values must cover [" + std::to_string(k_start) + ", " +
                      std::to_string(window_end()) + "]");
    }
  };
  for (int i = 0; i < order; ++i) check_model(coeffs[i], "f_" + std::to_string(i));
  check_model(forcing, "forcing");

  for (long k = k_start; k <= window_end(); ++k) {
    if (coeffs[0].at(k) == Complex{0.0, 0.0}) {
      throw Error(ErrorKind::InvalidSpec,
                  "f_0 vanishes, so the characteristic polynomial has a zero root", k);
    }
  }
}

RecurrenceSpec RecurrenceSpec::with_epsilon(double epsilon) const {
  RecurrenceSpec copy = *this;
  for (auto& c : copy.coeffs) c = c.with_epsilon(epsilon);
  copy.forcing = copy.forcing.with_epsilon(epsilon);
  return copy;
}

StepCoefficients eval_coeffs(const RecurrenceSpec& spec, long k) {
  if (k < spec.k_start || k > spec.window_end()) {
    throw Error(ErrorKind::IndexOutOfWindow, "k=" + std::to_string(k) + " outside window [" +
                                                 std::to_string(spec.k_start) + ", " +
                                                 std::to_string(spec.window_end()) + "]");
  }
  StepCoefficients out;
  out.f.resize(spec.order);
  for (int i = 0; i < spec.order; ++i) out.f[i] = spec.coeffs[static_cast<std::size_t>(i)].at(k);
  out.forcing = spec.forcing.at(k);
  return out;
}

ScalarTrajectory direct_solve(const RecurrenceSpec& spec, std::span<const Complex> initial) {
  check_initial(spec, initial);
  const int n = spec.order;
  ScalarTrajectory traj{spec.k_start, {initial.begin(), initial.end()}};
  traj.values.reserve(static_cast<std::size_t>(spec.trajectory_length()));
  for (long s = 0; s < spec.horizon; ++s) {
    const long k = spec.k_start + s;
    const StepCoefficients c = eval_coeffs(spec, k);
    const Complex* y = traj.values.data() + s;
    Complex acc = c.forcing;
    for (int i = 0; i < n; ++i) acc += c.f[i] * y[i];
    traj.values.push_back(-acc);
  }
  return traj;
}

CMatrix companion_matrix(const RecurrenceSpec& spec, long k) {
  const int n = spec.order;
  const StepCoefficients c = eval_coeffs(spec, k);
  CMatrix t = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) t(0, j) = -c.f[n - 1 - j];
  for (int i = 1; i < n; ++i) t(i, i - 1) = 1.0;
  return t;
}

ScalarTrajectory companion_propagate(const RecurrenceSpec& spec,
                                     std::span<const Complex> initial) {
  check_initial(spec, initial);
  const int n = spec.order;
  CompanionState x{spec.k_start, CVector(n)};
  for (int i = 0; i < n; ++i) x.entries[i] = initial[static_cast<std::size_t>(n - 1 - i)];

  ScalarTrajectory traj{spec.k_start, {initial.begin(), initial.end()}};
  traj.values.reserve(static_cast<std::size_t>(spec.trajectory_length()));
  for (long s = 0; s < spec.horizon; ++s) {
    CVector forcing = CVector::Zero(n);
    forcing[0] = -spec.forcing.at(x.k);
    x.entries = companion_matrix(spec, x.k) * x.entries + forcing;
    ++x.k;
    traj.values.push_back(x.entries[0]);
  }
  return traj;
}

}  // namespace lde

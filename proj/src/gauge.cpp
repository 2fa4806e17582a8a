#include "lde/gauge.hpp"

#include <cmath>

namespace lde {

namespace {

CMatrix stack_with_ones(const CMatrix& rows) {
  const auto n = rows.cols();
  CMatrix m(n, n);
  m.row(0).setOnes();
  m.bottomRows(n - 1) = rows;
  return m;
}

void check_shape(const GaugeSet& gauge) {
  const auto n = gauge.g.cols();
  if (n < kMinOrder || n > kMaxOrder || gauge.g.rows() != n - 1) {
    throw Error(ErrorKind::InvalidSpec, "gauge must have N-1 rows and N columns, 2 <= N <= 8");
  }
}

bool admissible_matrix(const CMatrix& m, const Eigen::PartialPivLU<CMatrix>& lu) {
  const double col = m.colwise().norm().maxCoeff();
  const double det = std::abs(lu.determinant());
  return det > kAdmissibilityThreshold * std::pow(col, static_cast<double>(m.cols()));
}

CVector checked_solve(const CMatrix& m, const CVector& rhs, long k) {
  const Eigen::PartialPivLU<CMatrix> lu(m);
  if (!admissible_matrix(m, lu)) {
    throw Error(ErrorKind::SingularGauge, "gauge matrix fails the admissibility determinant test",
                k);
  }
  CVector x = lu.solve(rhs);
  const double scale =
      m.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
  const double residual = (m * x - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= kSolveResidualTolerance * scale) && scale > 0.0) {
    throw Error(ErrorKind::SingularGauge, "linear solve residual above tolerance", k);
  }
  return x;
}

}  // namespace

bool admissible(const GaugeSet& gauge) {
  check_shape(gauge);
  const CMatrix m = stack_with_ones(gauge.g);
  return admissible_matrix(m, Eigen::PartialPivLU<CMatrix>(m));
}

CMatrix build_M(const GaugeSet& gauge_next) {
  if (!admissible(gauge_next)) {
    throw Error(ErrorKind::SingularGauge, "gauge matrix fails the admissibility determinant test",
                gauge_next.k);
  }
  return stack_with_ones(gauge_next.g);
}

CMatrix build_H(const GaugeSet& gauge_now, const CVector& f) {
  check_shape(gauge_now);
  const int n = gauge_now.order();
  if (f.size() != n) throw Error(ErrorKind::InvalidSpec, "coefficient count does not match gauge");
  CMatrix h(n, n);
  h.topRows(n - 1) = gauge_now.g;
  for (int col = 0; col < n; ++col) {
    Complex acc = f[0];
    for (int m = 1; m < n; ++m) acc += f[m] * gauge_now.g(m - 1, col);
    h(n - 1, col) = -acc;
  }
  return h;
}

ComponentVector decompose_initial(std::span<const Complex> scalar_values, const GaugeSet& gauge) {
  check_shape(gauge);
  const int n = gauge.order();
  if (static_cast<int>(scalar_values.size()) != n) {
    throw Error(ErrorKind::InvalidSpec, "scalar window length must equal the order");
  }
  CVector rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = scalar_values[static_cast<std::size_t>(i)];
  return {gauge.k, checked_solve(stack_with_ones(gauge.g), rhs, gauge.k)};
}

ComponentVector step(const ComponentVector& Y, const GaugeSet& gauge_now,
                     const GaugeSet& gauge_next, const StepCoefficients& coeffs) {
  const CMatrix h = build_H(gauge_now, coeffs.f);
  check_shape(gauge_next);
  CVector rhs = h * Y.y;
  rhs[rhs.size() - 1] -= coeffs.forcing;
  return {Y.k + 1, checked_solve(stack_with_ones(gauge_next.g), rhs, gauge_next.k)};
}

Complex reconstruct(const ComponentVector& Y) { return Y.y.sum(); }

StepMatrices transfer_matrix(const GaugeSet& gauge_now, const GaugeSet& gauge_next,
                             const StepCoefficients& coeffs) {
  StepMatrices out;
  out.M = build_M(gauge_next);
  out.H = build_H(gauge_now, coeffs.f);
  const int n = gauge_now.order();
  out.A_row = out.H.row(n - 1).transpose();
  const Eigen::PartialPivLU<CMatrix> lu(out.M);
  out.T = lu.solve(out.H);
  CVector e = CVector::Zero(n);
  e[n - 1] = -coeffs.forcing;
  out.forcing_response = lu.solve(e);
  return out;
}

ComponentRun propagate_components(const RecurrenceSpec& spec, std::span<const Complex> initial,
                                  const GaugeProvider& gauges) {
  spec.validate();
  ComponentRun run;
  run.reconstructed.k_start = spec.k_start;
  const long last = spec.k_start + spec.trajectory_length() - 1;
  long k = spec.k_start;
  try {
    GaugeSet now = gauges(k);
    ComponentVector y = decompose_initial(initial, now);
    run.states.push_back(y);
    run.reconstructed.values.push_back(reconstruct(y));
    for (; k < last; ++k) {
      GaugeSet next = gauges(k + 1);
      y = step(y, now, next, eval_coeffs(spec, k));
      run.states.push_back(y);
      run.reconstructed.values.push_back(reconstruct(y));
      now = std::move(next);
    }
  } catch (const Error& e) {
    throw e.at_step(k);
  }
  return run;
}

}  // namespace lde

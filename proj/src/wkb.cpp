#include "lde/wkb.hpp"

#include <cmath>

namespace lde {

CMatrix power_moments(const RootFrame& frame_now) {
  const int n = frame_now.order();
  CMatrix h(n, n);
  for (int col = 0; col < n; ++col) {
    Complex power = frame_now.roots[col];
    for (int j = 0; j < n; ++j) {
      h(j, col) = power;
      power *= frame_now.roots[col];
    }
  }
  return h;
}

CMatrix closed_form_transfer(const RootFrame& frame_now, const RootFrame& frame_next) {
  if (frame_now.order() != frame_next.order()) {
    throw Error(ErrorKind::InvalidSpec, "root frames have different orders");
  }
  return vandermonde_inverse(frame_next) * power_moments(frame_now);
}

ComponentVector exact_step_general(const ComponentVector& Y, const RootFrame& frame_now,
                                   const RootFrame& frame_next) {
  const CMatrix m = build_M(power_gauge(frame_next));
  const CVector rhs = power_moments(frame_now) * Y.y;
  return {Y.k + 1, Eigen::PartialPivLU<CMatrix>(m).solve(rhs)};
}

std::pair<ComponentVector, WkbStepReport> wkb_step_general(const ComponentVector& Y,
                                                           const RootFrame& frame_now,
                                                           const RootFrame& frame_next) {
  const CMatrix t = closed_form_transfer(frame_now, frame_next);
  const auto n = t.rows();
  WkbStepReport report{t.diagonal(), 0.0, Y.k};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) report.offdiag_norm = std::max(report.offdiag_norm, std::abs(t(i, j)));
    }
  }
  ComponentVector next{Y.k + 1, report.diagonal_gain.cwiseProduct(Y.y)};
  return {std::move(next), std::move(report)};
}

}  // namespace lde

#pragma once

// General-N propagation under the characteristic power gauge. The exact step
// solves with the Vandermonde matrix at k+1; the WKB step keeps only the
// diagonal of T = M^{-1} H, built from the closed-form Vandermonde inverse.

#include <utility>

#include "lde/gauge.hpp"
#include "lde/roots.hpp"

namespace lde {

struct WkbStepReport {
  /// diagonal_gain[i] = sum_j W_{k+1}(i, j) (rho_k^{(i)})^{j+1}
  CVector diagonal_gain;
  /// Largest |T(i, j)|, i != j, discarded by the diagonal approximation.
  double offdiag_norm = 0.0;
  long k = 0;
};

/// H(j, n) = (rho_k^{(n)})^{j+1}, j = 0 ... N-1.
CMatrix power_moments(const RootFrame& frame_now);

/// T_{k+1} from the closed-form inverse: vandermonde_inverse(frame_next) * power_moments(frame_now).
CMatrix closed_form_transfer(const RootFrame& frame_now, const RootFrame& frame_next);

/// Y_{k+1} = M_{k+1}^{-1} H_{k+1} Y_k for a homogeneous problem, by elimination.
ComponentVector exact_step_general(const ComponentVector& Y, const RootFrame& frame_now,
                                   const RootFrame& frame_next);

std::pair<ComponentVector, WkbStepReport> wkb_step_general(const ComponentVector& Y,
                                                           const RootFrame& frame_now,
                                                           const RootFrame& frame_next);

}  // namespace lde

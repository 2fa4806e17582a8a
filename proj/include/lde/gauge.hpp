#pragma once

// Sum decomposition y_k = sum_n y_{n,k} with N-1 gauge conditions
//
//   y_{k+m} = sum_n g_{m,n,k} y_{n,k},   m = 1 ... N-1,
//
// which turns the order-N recurrence into the exact first-order system
// M_{k+1} Y_{k+1} = H_{k+1} Y_k + (0, ..., 0, -f_k).

#include <functional>
#include <span>

#include "lde/common.hpp"
#include "lde/recurrence.hpp"

namespace lde {

/// Gauge rows m = 1 ... N-1 (matrix row m-1), columns n = 1 ... N, at index k.
struct GaugeSet {
  long k = 0;
  CMatrix g;

  int order() const noexcept { return static_cast<int>(g.cols()); }
};

/// Decomposed state Y_k = (y_{1,k}, ..., y_{N,k}).
struct ComponentVector {
  long k = 0;
  CVector y;
};

struct StepMatrices {
  CMatrix M;
  CMatrix H;
  CVector A_row;
  CMatrix T;
  /// M^{-1} (0, ..., 0, -f_k): the forcing contribution to Y_{k+1}.
  CVector forcing_response;
};

inline constexpr double kAdmissibilityThreshold = 1e-12;
inline constexpr double kSolveResidualTolerance = 1e-10;

/// |det M| > 1e-12 (max column norm)^N for the matrix with a row of ones over the gauge rows.
bool admissible(const GaugeSet& gauge);

/// Row of ones followed by the gauge rows at k+1. Throws SingularGauge.
CMatrix build_M(const GaugeSet& gauge_next);

/// Gauge rows at k followed by A_n = -(sum_{m=1}^{N-1} f_m g_{m,n} + f_0).
CMatrix build_H(const GaugeSet& gauge_now, const CVector& f);

/// Solves for Y_{k0} from the scalar window (y_{k0}, ..., y_{k0+N-1}).
ComponentVector decompose_initial(std::span<const Complex> scalar_values, const GaugeSet& gauge);

/// One exact step k -> k+1 by partial-pivot elimination on M_{k+1}.
ComponentVector step(const ComponentVector& Y, const GaugeSet& gauge_now,
                     const GaugeSet& gauge_next, const StepCoefficients& coeffs);

Complex reconstruct(const ComponentVector& Y);

/// M, H and T = M^{-1} H for the step k -> k+1.
StepMatrices transfer_matrix(const GaugeSet& gauge_now, const GaugeSet& gauge_next,
                             const StepCoefficients& coeffs);

using GaugeProvider = std::function<GaugeSet(long k)>;

struct ComponentRun {
  std::vector<ComponentVector> states;
  ScalarTrajectory reconstructed;
};

/// Decomposes the initial window and steps the components across the whole
/// trajectory range of `spec`, reconstructing y_k at every index.
ComponentRun propagate_components(const RecurrenceSpec& spec, std::span<const Complex> initial,
                                  const GaugeProvider& gauges);

}  // namespace lde

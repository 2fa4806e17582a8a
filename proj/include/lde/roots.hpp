#pragma once

// Characteristic roots of rho^N + f_{N-1} rho^{N-1} + ... + f_0 at each index,
// labeled so that branch n is a slowly varying sequence in k, and the
// Vandermonde machinery built on them.

#include <span>
#include <vector>

#include "lde/common.hpp"
#include "lde/gauge.hpp"
#include "lde/recurrence.hpp"

namespace lde {

inline constexpr double kRootTolerance = 1e-10;
inline constexpr int kRootIterationCap = 200;
inline constexpr double kRootUpdateTolerance = 1e-13;
inline constexpr double kTrackingTieTolerance = 1e-12;
inline constexpr double kMinRootSeparation = 1e-8;

struct RootFrame {
  long k = 0;
  /// roots[n] is branch rho_k^{(n+1)}.
  CVector roots;
  /// |p(rho)| per branch; empty when the frame was built from bare roots.
  std::vector<double> residuals;

  int order() const noexcept { return static_cast<int>(roots.size()); }
};

/// sigma(i, j): elementary symmetric polynomial of degree j over the roots
/// other than branch i.
using SigmaTable = CMatrix;

/// Scaled residual bound for a root of the monic polynomial with coefficients f:
/// (1 + sum |f_i|) max(1, |rho|)^N.
double residual_scale(const CVector& f, Complex rho);

/// Value of the monic polynomial at z.
Complex characteristic_polynomial(const CVector& f, Complex z);

/// All N roots (with multiplicity) by Aberth simultaneous iteration. When
/// `seed` holds N values it replaces the default circle initialization.
/// Throws NoConvergence past the iteration cap or when a residual exceeds
/// tol * residual_scale.
CVector characteristic_roots(const CVector& f, double tol = kRootTolerance,
                             std::span<const Complex> seed = {});

/// Roots at k with residuals, in canonical order (descending modulus, then argument).
RootFrame make_frame(long k, const CVector& f, double tol = kRootTolerance);

/// Permutation perm with next[perm[n]] assigned to branch n, minimizing the
/// total distance. Throws AmbiguousTracking when two assignments tie.
std::vector<int> match_branches(const CVector& prev, const CVector& next);

/// Relabels `next` so branch n continues branch n of `prev`.
RootFrame track_branches(const RootFrame& prev, const RootFrame& next);

/// Tracked frames for every index in [first, last], warm-starting each solve
/// from the previous frame.
std::vector<RootFrame> track_frames(const RecurrenceSpec& spec, long first, long last,
                                    double tol = kRootTolerance);

double min_separation(const CVector& roots);

/// g_{m,n} = (rho^{(n)})^m, m = 1 ... N-1. Throws DegenerateRoots when two
/// roots are closer than 1e-8 max|rho|.
GaugeSet power_gauge(const RootFrame& frame);

/// (sigma^{(0)}, ..., sigma^{(N-1)}) over all roots except branch i (0-based).
CVector sigma_excluding(const CVector& roots, int i);

SigmaTable sigma_table(const CVector& roots);

/// prod_{i<j} (rho_j - rho_i)
Complex vandermonde_determinant(const CVector& roots);

/// Closed-form inverse of the Vandermonde matrix with rows rho^0 ... rho^{N-1}:
///   W(i, j) = (-1)^j sigma_i^{(N-1-j)} / prod_{s != i} (rho_s - rho_i)   (0-based i, j)
CMatrix vandermonde_inverse(const RootFrame& frame);

}  // namespace lde

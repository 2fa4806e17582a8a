#pragma once

// The fully worked N = 3 case: x-term diagnostics, the explicit
// characteristic-gauge step, its three-branch WKB truncation, and the
// Riccati route where the gauges make the system decouple exactly.

#include <array>
#include <span>
#include <vector>

#include "lde/gauge.hpp"
#include "lde/recurrence.hpp"
#include "lde/roots.hpp"

namespace lde::third {

/// x[0..2] = g_{1,n}^2 - g_{2,n};  x[3..5] = g_{1,n} g_{2,n} + f_2 g_{2,n} + f_1 g_{1,n} + f_0.
struct XTerms {
  std::array<Complex, 6> x{};

  double max_abs() const;
};

XTerms x_terms(const GaugeSet& gauge, const CVector& f);

/// (rho2-rho1)(rho3-rho1)(rho3-rho2)
Complex vandermonde3(const CVector& rho);

/// Characteristic-gauge step written out branch by branch. Uses the root
/// differences rho_{k+1} - rho_k of each source branch; f_k enters with the
/// signed root differences over D_{k+1}.
ComponentVector explicit_step(const ComponentVector& Y, const RootFrame& frame_now,
                              const RootFrame& frame_next, Complex forcing);

/// Per-branch multipliers of the WKB truncation:
///   rho_n - rho_n (rho'_n - rho_n) sum_{m != n} 1 / (rho'_n - rho'_m)
CVector wkb3_multipliers(const RootFrame& frame_now, const RootFrame& frame_next);

/// Diagonal (WKB) step: branch n multiplied by its multiplier, plus the same
/// forcing term as explicit_step.
ComponentVector wkb3_step(const ComponentVector& Y, const RootFrame& frame_now,
                          const RootFrame& frame_next, Complex forcing);

/// p_{k+2} p_{k+1} p_k + f_2 p_{k+1} p_k + f_1 p_k + f_0
Complex riccati_residual(Complex p0, Complex p1, Complex p2, const CVector& f);

/// Residual scale used by the Riccati checks: (1 + max|f|) (1 + |p0 p1 p2|).
double riccati_scale(Complex p0, Complex p1, Complex p2, const CVector& f);

inline constexpr double kRiccatiBreakdown = 1e-12;

/// p sequence starting at spec.k_start with `count` values, seeded with p_0, p_1:
///   p_{k+2} = -(f_{2,k} p_{k+1} p_k + f_{1,k} p_k + f_{0,k}) / (p_{k+1} p_k)
/// Throws Breakdown when |p_{k+1} p_k| <= 1e-12 (1 + max|f|).
std::vector<Complex> riccati_forward(Complex p0, Complex p1, const RecurrenceSpec& spec,
                                     long count);

/// One Riccati solution: p1[j] = p_{k_start+j}, p2[j] = p1[j] p1[j+1].
struct RiccatiBranch {
  long k_start = 0;
  std::vector<Complex> p1;
  std::vector<Complex> p2;
  int label = 0;

  Complex g1(long k) const { return p1.at(static_cast<std::size_t>(k - k_start)); }
  Complex g2(long k) const { return p2.at(static_cast<std::size_t>(k - k_start)); }
  /// Last index with both g1 and g2 defined.
  long gauge_end() const { return k_start + static_cast<long>(p2.size()) - 1; }
};

RiccatiBranch make_branch(long k_start, std::vector<Complex> p1, int label);

/// p_k = y_{k+1} / y_k of a homogeneous solution. Throws Breakdown on a zero value.
RiccatiBranch ratio_branch(const ScalarTrajectory& y, int label);

/// Gauge g_{1,n,k} = p_k^{(n)}, g_{2,n,k} = p_k^{(n)} p_{k+1}^{(n)}.
GaugeSet riccati_gauge(std::span<const RiccatiBranch> branches, long k);

/// y_{n,k+1} = y_{n,k} g_{1,n,k} - f_k c_n / D_{k+1}, with c = (g13'-g12', g11'-g13', g12'-g11')
/// and D_{k+1} the full gauge determinant at k+1.
ComponentVector decoupled_step(const ComponentVector& Y, const CVector& g1_now,
                               const GaugeSet& gauge_next, Complex forcing);

/// sum_n y_{n,k0} prod_{s=k0}^{k-1} g_{1,n,s}
Complex product_solution(const CVector& initial, std::span<const RiccatiBranch> branches, long k0,
                         long k);

}  // namespace lde::third

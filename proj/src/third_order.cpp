#include "lde/third_order.hpp"

#include <algorithm>
#include <cmath>

namespace lde::third {

namespace {

void require_order3(int n, const char* what) {
  if (n != 3) throw Error(ErrorKind::InvalidSpec, std::string(what) + " requires order N = 3");
}

void require_distinct(const RootFrame& frame) {
  const double scale = frame.roots.cwiseAbs().maxCoeff();
  if (!(min_separation(frame.roots) > kMinRootSeparation * scale)) {
    throw Error(ErrorKind::DegenerateRoots, "characteristic roots are not pairwise distinct",
                frame.k);
  }
}

// Signed root differences (rho3-rho2, rho1-rho3, rho2-rho1) multiplying f_k.
std::array<Complex, 3> forcing_weights(const CVector& r) {
  return {r[2] - r[1], r[0] - r[2], r[1] - r[0]};
}

}  // namespace

double XTerms::max_abs() const {
  double m = 0.0;
  for (const auto& v : x) m = std::max(m, std::abs(v));
  return m;
}

XTerms x_terms(const GaugeSet& gauge, const CVector& f) {
  require_order3(gauge.order(), "x_terms");
  require_order3(static_cast<int>(f.size()), "x_terms");
  XTerms out;
  for (int n = 0; n < 3; ++n) {
    const Complex g1 = gauge.g(0, n);
    const Complex g2 = gauge.g(1, n);
    out.x[static_cast<std::size_t>(n)] = g1 * g1 - g2;
    out.x[static_cast<std::size_t>(n + 3)] = g1 * g2 + f[2] * g2 + f[1] * g1 + f[0];
  }
  return out;
}

Complex vandermonde3(const CVector& rho) {
  return (rho[1] - rho[0]) * (rho[2] - rho[0]) * (rho[2] - rho[1]);
}

ComponentVector explicit_step(const ComponentVector& Y, const RootFrame& frame_now,
                              const RootFrame& frame_next, Complex forcing) {
  require_order3(frame_now.order(), "explicit_step");
  require_order3(frame_next.order(), "explicit_step");
  require_distinct(frame_next);
  const CVector& r = frame_now.roots;
  const CVector& rn = frame_next.roots;
  const Complex d = vandermonde3(rn);
  const auto weights = forcing_weights(rn);

  ComponentVector out{Y.k + 1, CVector::Zero(3)};
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    const Complex factor = rn[c] - rn[b];
    Complex acc = Y.y[a] * r[a];
    for (int n = 0; n < 3; ++n) {
      const Complex bracket = (rn[b] + rn[c]) - (rn[n] + r[n]);
      acc += Y.y[n] * r[n] * (rn[n] - r[n]) * factor * bracket / d;
    }
    out.y[a] = acc - forcing * weights[static_cast<std::size_t>(a)] / d;
  }
  return out;
}

CVector wkb3_multipliers(const RootFrame& frame_now, const RootFrame& frame_next) {
  require_order3(frame_now.order(), "wkb3_multipliers");
  require_order3(frame_next.order(), "wkb3_multipliers");
  require_distinct(frame_next);
  const CVector& r = frame_now.roots;
  const CVector& rn = frame_next.roots;
  CVector gain(3);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    gain[a] = r[a] - r[a] * (rn[a] - r[a]) * (1.0 / (rn[a] - rn[b]) + 1.0 / (rn[a] - rn[c]));
  }
  return gain;
}

ComponentVector wkb3_step(const ComponentVector& Y, const RootFrame& frame_now,
                          const RootFrame& frame_next, Complex forcing) {
  const CVector gain = wkb3_multipliers(frame_now, frame_next);
  const CVector& rn = frame_next.roots;
  const Complex d = vandermonde3(rn);
  const auto weights = forcing_weights(rn);
  ComponentVector out{Y.k + 1, CVector(3)};
  for (int a = 0; a < 3; ++a) {
    out.y[a] = gain[a] * Y.y[a] - forcing * weights[static_cast<std::size_t>(a)] / d;
  }
  return out;
}

Complex riccati_residual(Complex p0, Complex p1, Complex p2, const CVector& f) {
  require_order3(static_cast<int>(f.size()), "riccati_residual");
  return p2 * p1 * p0 + f[2] * p1 * p0 + f[1] * p0 + f[0];
}

double riccati_scale(Complex p0, Complex p1, Complex p2, const CVector& f) {
  return (1.0 + f.cwiseAbs().maxCoeff()) * (1.0 + std::abs(p0 * p1 * p2));
}

std::vector<Complex> riccati_forward(Complex p0, Complex p1, const RecurrenceSpec& spec,
                                     long count) {
  require_order3(spec.order, "riccati_forward");
  if (count < 2) throw Error(ErrorKind::InvalidSpec, "riccati_forward needs at least two values");
  std::vector<Complex> p{p0, p1};
  p.reserve(static_cast<std::size_t>(count));
  for (long j = 0; j + 2 < count; ++j) {
    const long k = spec.k_start + j;
    const CVector f = eval_coeffs(spec, k).f;
    const Complex denom = p[static_cast<std::size_t>(j + 1)] * p[static_cast<std::size_t>(j)];
    if (!(std::abs(denom) > kRiccatiBreakdown * (1.0 + f.cwiseAbs().maxCoeff()))) {
      throw Error(ErrorKind::Breakdown, "p_{k+1} p_k vanishes in the Riccati recursion", k);
    }
    p.push_back(-(f[2] * denom + f[1] * p[static_cast<std::size_t>(j)] + f[0]) / denom);
  }
  return p;
}

RiccatiBranch make_branch(long k_start, std::vector<Complex> p1, int label) {
  RiccatiBranch b{k_start, std::move(p1), {}, label};
  if (b.p1.size() >= 2) {
    b.p2.reserve(b.p1.size() - 1);
    for (std::size_t j = 0; j + 1 < b.p1.size(); ++j) b.p2.push_back(b.p1[j] * b.p1[j + 1]);
  }
  return b;
}

RiccatiBranch ratio_branch(const ScalarTrajectory& y, int label) {
  std::vector<Complex> p;
  p.reserve(y.values.size());
  for (std::size_t j = 0; j + 1 < y.values.size(); ++j) {
    const Complex ratio = y.values[j + 1] / y.values[j];
    if (y.values[j] == Complex{0.0, 0.0} || !std::isfinite(ratio.real()) ||
        !std::isfinite(ratio.imag())) {
      throw Error(ErrorKind::Breakdown, "solution value vanishes, ratio is singular",
                  y.k_start + static_cast<long>(j), label);
    }
    p.push_back(ratio);
  }
  return make_branch(y.k_start, std::move(p), label);
}

GaugeSet riccati_gauge(std::span<const RiccatiBranch> branches, long k) {
  if (branches.size() != 3) throw Error(ErrorKind::InvalidSpec, "Riccati gauge needs three branches");
  GaugeSet gauge{k, CMatrix(2, 3)};
  for (int n = 0; n < 3; ++n) {
    const auto& b = branches[static_cast<std::size_t>(n)];
    if (k < b.k_start || k > b.gauge_end()) {
      throw Error(ErrorKind::IndexOutOfWindow, "Riccati branch does not cover k", k, n);
    }
    gauge.g(0, n) = b.g1(k);
    gauge.g(1, n) = b.g2(k);
  }
  return gauge;
}

ComponentVector decoupled_step(const ComponentVector& Y, const CVector& g1_now,
                               const GaugeSet& gauge_next, Complex forcing) {
  require_order3(static_cast<int>(g1_now.size()), "decoupled_step");
  require_order3(gauge_next.order(), "decoupled_step");
  if (!admissible(gauge_next)) {
    throw Error(ErrorKind::DegenerateRoots, "gauge determinant D_{k+1} vanishes", gauge_next.k);
  }
  const Complex d = build_M(gauge_next).determinant();
  const CVector g1n = gauge_next.g.row(0).transpose();
  const std::array<Complex, 3> c{g1n[2] - g1n[1], g1n[0] - g1n[2], g1n[1] - g1n[0]};
  ComponentVector out{Y.k + 1, CVector(3)};
  for (int n = 0; n < 3; ++n) {
    out.y[n] = Y.y[n] * g1_now[n] - forcing * c[static_cast<std::size_t>(n)] / d;
  }
  return out;
}

Complex product_solution(const CVector& initial, std::span<const RiccatiBranch> branches, long k0,
                         long k) {
  if (static_cast<std::size_t>(initial.size()) != branches.size()) {
    throw Error(ErrorKind::InvalidSpec, "one initial component per branch required");
  }
  Complex y{0.0, 0.0};
  for (std::size_t n = 0; n < branches.size(); ++n) {
    Complex prod{1.0, 0.0};
    for (long s = k0; s < k; ++s) prod *= branches[n].g1(s);
    y += initial[static_cast<Eigen::Index>(n)] * prod;
  }
  return y;
}

}  // namespace lde::third

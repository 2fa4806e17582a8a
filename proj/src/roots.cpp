#include "lde/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lde {

namespace {

void check_degree(const CVector& f) {
  if (f.size() < 1 || f.size() > kMaxOrder) {
    throw Error(ErrorKind::InvalidSpec, "characteristic polynomial degree must lie in [1, 8]");
  }
}

// p(z) and p'(z) by Horner for the monic polynomial.
std::pair<Complex, Complex> eval_with_derivative(const CVector& f, Complex z) {
  Complex p{1.0, 0.0};
  Complex dp{0.0, 0.0};
  for (Eigen::Index i = f.size() - 1; i >= 0; --i) {
    dp = dp * z + p;
    p = p * z + f[i];
  }
  return {p, dp};
}

void spread_duplicates(std::vector<Complex>& z, double radius) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (z[i] == z[j]) z[i] += Complex(1e-7 * radius, 1e-7 * radius * (1.0 + static_cast<double>(i)));
    }
  }
}

}  // namespace

double residual_scale(const CVector& f, Complex rho) {
  return (1.0 + f.cwiseAbs().sum()) * std::pow(std::max(1.0, std::abs(rho)), f.size());
}

Complex characteristic_polynomial(const CVector& f, Complex z) {
  return eval_with_derivative(f, z).first;
}

namespace {

// Aberth iteration from `z`; false when the iteration cap is reached.
bool aberth(const CVector& f, std::vector<Complex>& z, double radius) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const std::size_t n = z.size();
  for (int iter = 0; iter < kRootIterationCap; ++iter) {
    double max_update = 0.0;
    bool at_rounding_floor = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto [p, dp] = eval_with_derivative(f, z[i]);
      if (std::abs(p) <= 8.0 * eps * residual_scale(f, z[i])) continue;
      at_rounding_floor = false;
      Complex repulsion{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const Complex newton = p / dp;
      Complex w = newton / (1.0 - newton * repulsion);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        w = Complex(1e-6 * radius, 1e-6 * radius);
      }
      z[i] -= w;
      max_update = std::max(max_update, std::abs(w));
    }
    if (at_rounding_floor || max_update < kRootUpdateTolerance * radius) return true;
  }
  return false;
}

std::vector<Complex> circle_start(std::size_t n, double radius) {
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n) + 0.4;
    z[j] = std::polar(radius, angle);
  }
  return z;
}

}  // namespace

CVector characteristic_roots(const CVector& f, double tol, std::span<const Complex> seed) {
  check_degree(f);
  const auto n = static_cast<std::size_t>(f.size());
  const double radius = 1.0 + f.cwiseAbs().maxCoeff();

  // A warm start that stalls (e.g. real seeds for a real polynomial whose
  // roots just left the real axis) falls back to the circle start.
  std::vector<Complex> z;
  bool converged = false;
  if (seed.size() == n) {
    z.assign(seed.begin(), seed.end());
    spread_duplicates(z, radius);
    converged = aberth(f, z, radius);
  }
  if (!converged) {
    z = circle_start(n, radius);
    converged = aberth(f, z, radius);
  }
  if (!converged) {
    throw Error(ErrorKind::NoConvergence, "root finder exceeded " +
                                              std::to_string(kRootIterationCap) + " iterations");
  }

  CVector roots(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double residual = std::abs(characteristic_polynomial(f, z[i]));
    if (!(residual <= tol * residual_scale(f, z[i]))) {
      throw Error(ErrorKind::NoConvergence, "root residual above tolerance", std::nullopt,
                  static_cast<int>(i));
    }
    roots[static_cast<Eigen::Index>(i)] = z[i];
  }
  return roots;
}

RootFrame make_frame(long k, const CVector& f, double tol) {
  const CVector raw = characteristic_roots(f, tol);
  std::vector<Complex> sorted(raw.data(), raw.data() + raw.size());
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
  RootFrame frame{k, CVector(raw.size()), {}};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    frame.roots[static_cast<Eigen::Index>(i)] = sorted[i];
    frame.residuals.push_back(std::abs(characteristic_polynomial(f, sorted[i])));
  }
  return frame;
}

std::vector<int> match_branches(const CVector& prev, const CVector& next) {
  const int n = static_cast<int>(prev.size());
  if (next.size() != n) throw Error(ErrorKind::InvalidSpec, "root counts differ between frames");

  std::vector<double> cost(static_cast<std::size_t>(n * n));
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    scale = std::max({scale, std::abs(prev[i]), std::abs(next[i])});
    for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(i * n + j)] = std::abs(prev[i] - next[j]);
  }

  // Exhaustive branch-and-bound over permutations, keeping the two best totals.
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  std::vector<int> best_perm(static_cast<std::size_t>(n));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<bool> used(static_cast<std::size_t>(n), false);

  auto search = [&](auto&& self, int depth, double partial) -> void {
    if (partial > second) return;
    if (depth == n) {
      if (partial < best) {
        second = best;
        best = partial;
        best_perm = perm;
      } else if (partial < second) {
        second = partial;
      }
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      perm[static_cast<std::size_t>(depth)] = j;
      self(self, depth + 1, partial + cost[static_cast<std::size_t>(depth * n + j)]);
      used[static_cast<std::size_t>(j)] = false;
    }
  };
  search(search, 0, 0.0);

  if (second - best <= kTrackingTieTolerance * scale) {
    throw Error(ErrorKind::AmbiguousTracking,
                "two branch assignments tie; characteristic roots are nearly colliding");
  }
  return best_perm;
}

RootFrame track_branches(const RootFrame& prev, const RootFrame& next) {
  const std::vector<int> perm = match_branches(prev.roots, next.roots);
  RootFrame out{next.k, CVector(next.roots.size()), {}};
  for (std::size_t n = 0; n < perm.size(); ++n) {
    out.roots[static_cast<Eigen::Index>(n)] = next.roots[perm[n]];
    if (!next.residuals.empty()) out.residuals.push_back(next.residuals[static_cast<std::size_t>(perm[n])]);
  }
  return out;
}

std::vector<RootFrame> track_frames(const RecurrenceSpec& spec, long first, long last,
                                    double tol) {
  std::vector<RootFrame> frames;
  frames.reserve(static_cast<std::size_t>(std::max(0L, last - first + 1)));
  long k = first;
  try {
    for (; k <= last; ++k) {
      const CVector f = eval_coeffs(spec, k).f;
      if (frames.empty()) {
        frames.push_back(make_frame(k, f, tol));
        continue;
      }
      const CVector& seed = frames.back().roots;
      const CVector raw = characteristic_roots(f, tol, {seed.data(), static_cast<std::size_t>(seed.size())});
      RootFrame next{k, raw, {}};
      for (Eigen::Index i = 0; i < raw.size(); ++i) {
        next.residuals.push_back(std::abs(characteristic_polynomial(f, raw[i])));
      }
      frames.push_back(track_branches(frames.back(), next));
    }
  } catch (const Error& e) {
    throw e.at_step(k);
  }
  return frames;
}

double min_separation(const CVector& roots) {
  double sep = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    for (Eigen::Index j = i + 1; j < roots.size(); ++j) sep = std::min(sep, std::abs(roots[i] - roots[j]));
  }
  return sep;
}

namespace {

void require_distinct(const RootFrame& frame) {
  const double scale = frame.roots.cwiseAbs().maxCoeff();
  if (!(min_separation(frame.roots) > kMinRootSeparation * scale)) {
    throw Error(ErrorKind::DegenerateRoots, "characteristic roots are not pairwise distinct",
                frame.k);
  }
}

}  // namespace

GaugeSet power_gauge(const RootFrame& frame) {
  require_distinct(frame);
  const int n = frame.order();
  GaugeSet gauge{frame.k, CMatrix(n - 1, n)};
  for (int col = 0; col < n; ++col) {
    Complex power = frame.roots[col];
    for (int m = 0; m < n - 1; ++m) {
      gauge.g(m, col) = power;
      power *= frame.roots[col];
    }
  }
  return gauge;
}

CVector sigma_excluding(const CVector& roots, int i) {
  const auto n = roots.size();
  if (i < 0 || i >= n) throw Error(ErrorKind::InvalidSpec, "branch index out of range");
  // Coefficients of prod_{s != i} (1 + rho_s t).
  CVector e = CVector::Zero(n);
  e[0] = 1.0;
  Eigen::Index degree = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (s == i) continue;
    ++degree;
    for (Eigen::Index j = degree; j >= 1; --j) e[j] += roots[s] * e[j - 1];
  }
  return e;
}

SigmaTable sigma_table(const CVector& roots) {
  const auto n = roots.size();
  SigmaTable table(n, n);
  for (Eigen::Index i = 0; i < n; ++i) table.row(i) = sigma_excluding(roots, static_cast<int>(i)).transpose();
  return table;
}

Complex vandermonde_determinant(const CVector& roots) {
  Complex d{1.0, 0.0};
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    for (Eigen::Index j = i + 1; j < roots.size(); ++j) d *= roots[j] - roots[i];
  }
  return d;
}

CMatrix vandermonde_inverse(const RootFrame& frame) {
  require_distinct(frame);
  const auto n = frame.roots.size();
  CMatrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CVector sigma = sigma_excluding(frame.roots, static_cast<int>(i));
    Complex denom{1.0, 0.0};
    for (Eigen::Index s = 0; s < n; ++s) {
      if (s != i) denom *= frame.roots[s] - frame.roots[i];
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      w(i, j) = sign * sigma[n - 1 - j] / denom;
    }
  }
  return w;
}

}  // namespace lde

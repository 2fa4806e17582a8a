#include "lde/common.hpp"

#include <algorithm>
#include <cmath>

namespace lde {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::IndexOutOfWindow: return "IndexOutOfWindow";
    case ErrorKind::SingularGauge: return "SingularGauge";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::AmbiguousTracking: return "AmbiguousTracking";
    case ErrorKind::Breakdown: return "Breakdown";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& what, std::optional<long> step,
                     std::optional<int> branch) {
  std::string msg = std::string(to_string(kind)) + ": " + what;
  if (step) msg += " (step k=" + std::to_string(*step) + ")";
  if (branch) msg += " (branch " + std::to_string(*branch + 1) + ")";
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& what, std::optional<long> step,
             std::optional<int> branch)
    : std::runtime_error(decorate(kind, what, step, branch)), kind_(kind), detail_(what),
      step_(step), branch_(branch) {}

Error Error::at_step(long k) const {
  if (step_) return *this;
  return Error(kind_, detail_, k, branch_);
}

bool Error::numerical() const noexcept {
  switch (kind_) {
    case ErrorKind::SingularGauge:
    case ErrorKind::DegenerateRoots:
    case ErrorKind::NoConvergence:
    case ErrorKind::AmbiguousTracking:
    case ErrorKind::Breakdown:
      return true;
    default:
      return false;
  }
}

double windowed_relative_error(const ScalarTrajectory& reference, long k, Complex value,
                               int order) {
  const double diff = std::abs(value - reference.at(k));
  double scale = 0.0;
  for (long j = std::max(reference.k_start, k - order + 1); j <= k; ++j) {
    scale = std::max(scale, std::abs(reference.at(j)));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace lde

#pragma once

// Batch front end behind the `lde` executable. Each entry point returns the
// process exit code and reports on the given streams.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lde/scenario.hpp"
#include "lde/sweep.hpp"

namespace lde::cli {

enum class ExitCode : int { Ok = 0, Usage = 1, Schema = 2, Numerical = 3, Io = 4 };

struct Options {
  std::optional<std::string> output_dir;
  std::optional<std::string> format;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  /// Replaces the scenario's epsilon_sweep when non-empty (sweep only).
  std::vector<double> epsilons;
};

/// x with 17 significant digits ("%.17g"); round-trips every double.
std::string format_real(double x);

ExitCode run(const std::filesystem::path& scenario, const Options& options, std::ostream& out,
             std::ostream& err);
ExitCode validate(const std::filesystem::path& scenario, const Options& options,
                  std::ostream& out, std::ostream& err);
ExitCode sweep(const std::filesystem::path& scenario, const Options& options, std::ostream& out,
               std::ostream& err);

}  // namespace lde::cli

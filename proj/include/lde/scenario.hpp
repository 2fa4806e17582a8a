#pragma once

// Scenario files: JSON documents describing one recurrence problem, the
// methods to run on it and where to write the tables.
//
//   {
//     "name": "fibonacci",               optional, defaults to the file stem
//     "order": 2,
//     "k_start": 0,                      optional, default 0
//     "horizon": 8,
//     "epsilon": 0.01,                   optional default for parametric models
//     "coefficients": [<model f_0>, ..., <model f_{N-1}>],
//     "forcing": <model>,                optional, default 0
//     "initial": [<complex>, ...],       N values y_{k_start} ... y_{k_start+N-1}
//     "methods": ["direct", "companion", "gauge-exact", "explicit3", "wkb3",
//                 "riccati", "wkb-general"],
//     "epsilon_sweep": [0.02, 0.01],     optional
//     "tolerance": 1e-10,                optional root residual tolerance
//     "seed": 7,                         optional, for "random" models
//     "output": {"path": "out", "format": "csv" | "json"}
//   }
//
// <model> is a bare <complex> (constant) or an object with "type":
//   {"type": "constant", "value": c}
//   {"type": "polynomial", "coefficients": [c0, c1, ...], "epsilon": e}
//   {"type": "sinusoidal", "amplitude": c, "offset": c, "frequency": w, "phase": p, "epsilon": e}
//   {"type": "tabulated", "k_start": k, "values": [c, ...]}
//   {"type": "random", "magnitude": r}   uniform in the disk |z| <= r, tabulated over the window
//
// <complex> is a number, a string such as "1.5-2i", or a pair [re, im].

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lde/methods.hpp"
#include "lde/recurrence.hpp"

namespace lde {

struct OutputSpec {
  std::string path = ".";
  std::string format = "csv";
};

struct Scenario {
  std::string name;
  RecurrenceSpec spec;
  std::vector<Complex> initial;
  std::vector<Method> methods;
  std::vector<double> epsilon_sweep;
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  OutputSpec output;
};

struct Diagnostic {
  std::string where;
  std::string message;
};

std::string to_string(const Diagnostic& d);

/// Parses decimal complex text: "3", "-2.5e-1", "1-2i", "i", "-j".
std::optional<Complex> parse_complex(std::string_view text);

struct ParseOptions {
  std::string default_name = "scenario";
  std::optional<std::uint64_t> seed_override;
};

/// Schema pass. Fills `out` as far as possible; diagnostics are empty on success.
std::vector<Diagnostic> parse_scenario(const nlohmann::json& doc, Scenario& out,
                                       const ParseOptions& options = {});

/// Semantic pass on a parsed scenario: order range, zero f_0, method/order
/// mismatch, forcing with homogeneous-only methods, tabulated coverage.
std::vector<Diagnostic> check_scenario(const Scenario& scenario);

/// Scenario JSON with every coefficient model tabulated over the window.
nlohmann::json export_tabulated(const Scenario& scenario);

nlohmann::json complex_to_json(Complex c);

}  // namespace lde

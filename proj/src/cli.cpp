#include "lde/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lde::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  Scenario scenario;
  std::vector<Diagnostic> diagnostics;
};

Loaded load(const fs::path& path, const Options& options) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open scenario file " + path.string());
  Loaded loaded;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    loaded.diagnostics.push_back({"", std::string("malformed JSON: ") + e.what()});
    return loaded;
  }
  ParseOptions po{path.stem().string(), options.seed};
  loaded.diagnostics = parse_scenario(doc, loaded.scenario, po);
  if (loaded.diagnostics.empty()) loaded.diagnostics = check_scenario(loaded.scenario);
  if (options.output_dir) loaded.scenario.output.path = *options.output_dir;
  if (options.format) loaded.scenario.output.format = *options.format;
  if (options.tolerance) loaded.scenario.tolerance = *options.tolerance;
  return loaded;
}

void write_atomically(const fs::path& target, const std::string& content) {
  std::error_code ec;
  fs::create_directories(target.parent_path().empty() ? fs::path(".") : target.parent_path(), ec);
  if (ec) throw IoFailure("cannot create directory " + target.parent_path().string());
  const fs::path tmp = fs::path(target.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoFailure("write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoFailure("cannot move " + tmp.string() + " to " + target.string());
}

std::string json_real(double x) { return std::isfinite(x) ? format_real(x) : "null"; }

std::string trajectory_csv(const ComparisonTable& t) {
  std::ostringstream s;
  s << "k";
  for (const auto& r : t.results) s << ',' << to_string(r.method) << "_re," << to_string(r.method) << "_im";
  s << '\n';
  for (long k = t.oracle.k_start; k < t.oracle.k_end(); ++k) {
    s << k;
    for (const auto& r : t.results) {
      const Complex v = r.values.at(k);
      s << ',' << format_real(v.real()) << ',' << format_real(v.imag());
    }
    s << '\n';
  }
  return s.str();
}

std::string errors_csv(const ComparisonTable& t) {
  std::ostringstream s;
  s << "k";
  for (const auto& r : t.results) s << ',' << to_string(r.method);
  s << '\n';
  for (long k = t.oracle.k_start; k < t.oracle.k_end(); ++k) {
    s << k;
    for (const auto& r : t.results) s << ',' << format_real(r.rel_error[static_cast<std::size_t>(k - t.oracle.k_start)]);
    s << '\n';
  }
  return s.str();
}

std::string sweep_csv(const SweepResult& sw) {
  std::ostringstream s;
  s << "epsilon";
  for (const auto m : sw.methods) s << ',' << to_string(m) << "_terminal," << to_string(m) << "_max";
  s << '\n';
  for (const auto& p : sw.points) {
    s << format_real(p.epsilon);
    for (std::size_t i = 0; i < sw.methods.size(); ++i) {
      s << ',' << format_real(p.terminal_error[i]) << ',' << format_real(p.max_error[i]);
    }
    s << '\n';
  }
  return s.str();
}

// JSON is written by hand so numbers keep the same 17-digit text as the CSV.
std::string trajectory_json(const ComparisonTable& t) {
  std::ostringstream s;
  s << "{\n  \"k_start\": " << t.oracle.k_start << ",\n  \"methods\": {";
  for (std::size_t i = 0; i < t.results.size(); ++i) {
    const auto& r = t.results[i];
    s << (i ? "," : "") << "\n    \"" << to_string(r.method) << "\": [";
    for (std::size_t j = 0; j < r.values.values.size(); ++j) {
      const Complex v = r.values.values[j];
      s << (j ? ", " : "") << '[' << json_real(v.real()) << ", " << json_real(v.imag()) << ']';
    }
    s << ']';
  }
  s << "\n  }\n}\n";
  return s.str();
}

std::string errors_json(const ComparisonTable& t) {
  std::ostringstream s;
  s << "{\n  \"k_start\": " << t.oracle.k_start << ",\n  \"relative_error\": {";
  for (std::size_t i = 0; i < t.results.size(); ++i) {
    const auto& r = t.results[i];
    s << (i ? "," : "") << "\n    \"" << to_string(r.method) << "\": [";
    for (std::size_t j = 0; j < r.rel_error.size(); ++j) s << (j ? ", " : "") << json_real(r.rel_error[j]);
    s << ']';
  }
  s << "\n  }\n}\n";
  return s.str();
}

std::string sweep_json(const SweepResult& sw) {
  std::ostringstream s;
  s << "{\n  \"points\": [";
  for (std::size_t p = 0; p < sw.points.size(); ++p) {
    const auto& pt = sw.points[p];
    s << (p ? "," : "") << "\n    {\"epsilon\": " << json_real(pt.epsilon);
    for (std::size_t i = 0; i < sw.methods.size(); ++i) {
      s << ", \"" << to_string(sw.methods[i]) << "\": {\"terminal\": " << json_real(pt.terminal_error[i])
        << ", \"max\": " << json_real(pt.max_error[i]) << '}';
    }
    s << '}';
  }
  s << "\n  ]\n}\n";
  return s.str();
}

fs::path output_file(const Scenario& s, const std::string& table) {
  return fs::path(s.output.path) / (s.name + "." + table + "." + s.output.format);
}

CompareOptions compare_options(const Scenario& s) {
  CompareOptions o;
  if (s.tolerance) o.root_tolerance = *s.tolerance;
  return o;
}

void report_diagnostics(const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) err << "error: " << to_string(d) << '\n';
}

// Shared error mapping for run and sweep.
template <class Body>
ExitCode guarded(const fs::path& path, const Options& options, std::ostream& err, Body&& body) {
  try {
    Loaded loaded = load(path, options);
    if (!loaded.diagnostics.empty()) {
      report_diagnostics(loaded.diagnostics, err);
      return ExitCode::Schema;
    }
    body(loaded.scenario);
    return ExitCode::Ok;
  } catch (const IoFailure& e) {
    err << "io error: " << e.what() << '\n';
    return ExitCode::Io;
  } catch (const Error& e) {
    err << (e.numerical() ? "numerical breakdown: " : "error: ") << e.what() << '\n';
    return e.numerical() ? ExitCode::Numerical : ExitCode::Schema;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return ExitCode::Io;
  }
}

SweepResult run_sweep(const Scenario& s, const std::vector<double>& epsilons) {
  return sweep_parallel(s.spec, s.initial, s.methods, epsilons, compare_options(s));
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

ExitCode run(const fs::path& path, const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(path, options, err, [&](const Scenario& s) {
    const ComparisonTable table = compare_methods(s.spec, s.initial, s.methods, compare_options(s));
    std::optional<SweepResult> sw;
    if (!s.epsilon_sweep.empty()) sw = run_sweep(s, s.epsilon_sweep);

    const bool csv = s.output.format == "csv";
    std::vector<std::pair<fs::path, std::string>> files{
        {output_file(s, "trajectory"), csv ? trajectory_csv(table) : trajectory_json(table)},
        {output_file(s, "errors"), csv ? errors_csv(table) : errors_json(table)},
        {fs::path(s.output.path) / (s.name + ".tabulated.json"), export_tabulated(s).dump(2) + "\n"},
    };
    if (sw) files.emplace_back(output_file(s, "sweep"), csv ? sweep_csv(*sw) : sweep_json(*sw));
    for (const auto& [file, content] : files) {
      write_atomically(file, content);
      out << "wrote " << file.string() << '\n';
    }
  });
}

ExitCode validate(const fs::path& path, const Options& options, std::ostream& out,
                  std::ostream& err) {
  try {
    const Loaded loaded = load(path, options);
    if (loaded.diagnostics.empty()) {
      out << path.string() << ": ok\n";
      return ExitCode::Ok;
    }
    report_diagnostics(loaded.diagnostics, out);
    return ExitCode::Schema;
  } catch (const IoFailure& e) {
    err << "io error: " << e.what() << '\n';
    return ExitCode::Io;
  }
}

ExitCode sweep(const fs::path& path, const Options& options, std::ostream& out,
               std::ostream& err) {
  return guarded(path, options, err, [&](const Scenario& s) {
    const std::vector<double>& eps = options.epsilons.empty() ? s.epsilon_sweep : options.epsilons;
    if (eps.empty()) throw Error(ErrorKind::InvalidSpec, "no epsilon values to sweep (set epsilon_sweep or --eps)");
    const SweepResult sw = run_sweep(s, eps);
    const fs::path file = output_file(s, "sweep");
    write_atomically(file, s.output.format == "csv" ? sweep_csv(sw) : sweep_json(sw));
    out << "wrote " << file.string() << '\n';
  });
}

}  // namespace lde::cli

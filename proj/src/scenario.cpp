#include "lde/scenario.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

namespace lde {

using nlohmann::json;

std::string to_string(const Diagnostic& d) {
  return d.where.empty() ? d.message : d.where + ": " + d.message;
}

namespace {

std::optional<double> parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Complex> parse_complex(std::string_view text) {
  std::string compact;
  for (const char ch : text) {
    if (ch != ' ' && ch != '\t') compact.push_back(ch);
  }
  if (compact.empty()) return std::nullopt;
  if (compact.back() != 'i' && compact.back() != 'j') {
    const auto re = parse_real(compact);
    if (!re) return std::nullopt;
    return Complex(*re, 0.0);
  }
  compact.pop_back();
  // Split at the last sign that is not an exponent sign.
  std::size_t split = 0;
  for (std::size_t i = compact.size(); i-- > 1;) {
    if ((compact[i] == '+' || compact[i] == '-') && compact[i - 1] != 'e' && compact[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string re_text = compact.substr(0, split);
  std::string im_text = compact.substr(split);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  const auto im = parse_real(im_text);
  if (!im) return std::nullopt;
  double re = 0.0;
  if (!re_text.empty()) {
    const auto parsed = parse_real(re_text);
    if (!parsed) return std::nullopt;
    re = *parsed;
  }
  return Complex(re, *im);
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void fail(const std::string& where, const std::string& message) { diags_.push_back({where, message}); }

  std::optional<Complex> complex(const json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_string()) {
      if (auto c = parse_complex(j.get<std::string>())) return c;
      fail(where, "cannot parse complex number '" + j.get<std::string>() + "'");
      return std::nullopt;
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return Complex(j[0].get<double>(), j[1].get<double>());
    }
    fail(where, "expected a complex number (number, \"a+bi\" string or [re, im])");
    return std::nullopt;
  }

  std::optional<double> real(const json& obj, const char* key, const std::string& where,
                             std::optional<double> fallback) {
    if (!obj.contains(key)) {
      if (!fallback) fail(where, std::string("missing required field '") + key + "'");
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(where + "." + key, "expected a number");
      return std::nullopt;
    }
    return obj[key].get<double>();
  }

  std::optional<long> integer(const json& obj, const char* key, const std::string& where,
                              std::optional<long> fallback) {
    if (!obj.contains(key)) {
      if (!fallback) fail(where, std::string("missing required field '") + key + "'");
      return fallback;
    }
    if (!obj[key].is_number_integer()) {
      fail(where.empty() ? key : where + "." + key, "expected an integer");
      return std::nullopt;
    }
    return obj[key].get<long>();
  }

  std::vector<Complex> complex_list(const json& j, const std::string& where) {
    std::vector<Complex> out;
    if (!j.is_array()) {
      fail(where, "expected an array of complex numbers");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (auto c = complex(j[i], where + "[" + std::to_string(i) + "]")) out.push_back(*c);
    }
    return out;
  }

 private:
  std::vector<Diagnostic>& diags_;
};

struct ModelContext {
  double default_epsilon = 0.0;
  long window_first = 0;
  long window_last = 0;
  std::uint64_t seed = 0;
};

std::optional<CoefficientModel> parse_model(Parser& p, const json& j, const std::string& where,
                                            const ModelContext& ctx) {
  if (!j.is_object()) {
    if (auto c = p.complex(j, where)) return CoefficientModel(Constant{*c});
    return std::nullopt;
  }
  if (!j.contains("type") || !j["type"].is_string()) {
    p.fail(where, "model object needs a string 'type'");
    return std::nullopt;
  }
  const std::string type = j["type"].get<std::string>();
  const auto eps = [&]() { return p.real(j, "epsilon", where, ctx.default_epsilon); };

  if (type == "constant") {
    if (!j.contains("value")) {
      p.fail(where, "missing required field 'value'");
      return std::nullopt;
    }
    if (auto c = p.complex(j["value"], where + ".value")) return CoefficientModel(Constant{*c});
    return std::nullopt;
  }
  if (type == "polynomial") {
    if (!j.contains("coefficients")) {
      p.fail(where, "missing required field 'coefficients'");
      return std::nullopt;
    }
    auto coeffs = p.complex_list(j["coefficients"], where + ".coefficients");
    const auto e = eps();
    if (!e) return std::nullopt;
    return CoefficientModel(PolynomialInEpsK{std::move(coeffs), *e});
  }
  if (type == "sinusoidal") {
    SinusoidalInEpsK s;
    if (j.contains("amplitude")) {
      if (auto c = p.complex(j["amplitude"], where + ".amplitude")) s.amplitude = *c;
    }
    if (j.contains("offset")) {
      if (auto c = p.complex(j["offset"], where + ".offset")) s.offset = *c;
    }
    const auto w = p.real(j, "frequency", where, 1.0);
    const auto ph = p.real(j, "phase", where, 0.0);
    const auto e = eps();
    if (!w || !ph || !e) return std::nullopt;
    s.frequency = *w;
    s.phase = *ph;
    s.epsilon = *e;
    return CoefficientModel(s);
  }
  if (type == "tabulated") {
    const auto k0 = p.integer(j, "k_start", where, ctx.window_first);
    if (!j.contains("values")) {
      p.fail(where, "missing required field 'values'");
      return std::nullopt;
    }
    auto values = p.complex_list(j["values"], where + ".values");
    if (!k0) return std::nullopt;
    return CoefficientModel(Tabulated{*k0, std::move(values)});
  }
  if (type == "random") {
    const auto r = p.real(j, "magnitude", where, 1.0);
    if (!r) return std::nullopt;
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Tabulated t{ctx.window_first, {}};
    for (long k = ctx.window_first; k <= ctx.window_last; ++k) {
      const double radius = *r * std::sqrt(unit(rng));
      const double angle = 2.0 * std::numbers::pi * unit(rng);
      t.values.push_back(std::polar(radius, angle));
    }
    return CoefficientModel(std::move(t));
  }
  p.fail(where + ".type", "unknown model type '" + type + "'");
  return std::nullopt;
}

}  // namespace

std::vector<Diagnostic> parse_scenario(const json& doc, Scenario& out, const ParseOptions& options) {
  std::vector<Diagnostic> diags;
  Parser p(diags);
  if (!doc.is_object()) {
    p.fail("", "scenario must be a JSON object");
    return diags;
  }

  out.name = options.default_name;
  if (doc.contains("name")) {
    if (doc["name"].is_string() && !doc["name"].get<std::string>().empty()) {
      out.name = doc["name"].get<std::string>();
    } else {
      p.fail("name", "expected a non-empty string");
    }
  }

  const auto order = p.integer(doc, "order", "", std::nullopt);
  const auto k_start = p.integer(doc, "k_start", "", 0L);
  const auto horizon = p.integer(doc, "horizon", "", std::nullopt);
  const auto epsilon = p.real(doc, "epsilon", "", 0.0);
  if (order) out.spec.order = static_cast<int>(*order);
  if (k_start) out.spec.k_start = *k_start;
  if (horizon) out.spec.horizon = *horizon;

  if (doc.contains("seed")) {
    if (doc["seed"].is_number_unsigned()) {
      out.seed = doc["seed"].get<std::uint64_t>();
    } else {
      p.fail("seed", "expected a non-negative integer");
    }
  }
  if (options.seed_override) out.seed = *options.seed_override;

  if (doc.contains("tolerance")) {
    if (doc["tolerance"].is_number() && doc["tolerance"].get<double>() > 0.0) {
      out.tolerance = doc["tolerance"].get<double>();
    } else {
      p.fail("tolerance", "expected a positive number");
    }
  }

  ModelContext ctx{epsilon.value_or(0.0), out.spec.k_start, out.spec.window_end(), out.seed};
  out.spec.coeffs.clear();
  if (!doc.contains("coefficients") || !doc["coefficients"].is_array()) {
    p.fail("coefficients", "expected an array of N coefficient models");
  } else {
    const json& list = doc["coefficients"];
    for (std::size_t i = 0; i < list.size(); ++i) {
      ctx.seed = out.seed * 1000003ULL + i;
      const std::string where = "coefficients[" + std::to_string(i) + "]";
      if (auto m = parse_model(p, list[i], where, ctx)) out.spec.coeffs.push_back(std::move(*m));
    }
  }
  out.spec.forcing = CoefficientModel(Constant{});
  if (doc.contains("forcing")) {
    ctx.seed = out.seed * 1000003ULL + 999;
    if (auto m = parse_model(p, doc["forcing"], "forcing", ctx)) out.spec.forcing = std::move(*m);
  }

  if (!doc.contains("initial")) {
    p.fail("", "missing required field 'initial'");
  } else {
    out.initial = p.complex_list(doc["initial"], "initial");
  }

  out.methods.clear();
  if (!doc.contains("methods") || !doc["methods"].is_array() || doc["methods"].empty()) {
    p.fail("methods", "expected a non-empty array of method names");
  } else {
    for (std::size_t i = 0; i < doc["methods"].size(); ++i) {
      const json& m = doc["methods"][i];
      const std::string where = "methods[" + std::to_string(i) + "]";
      if (!m.is_string()) {
        p.fail(where, "expected a method name");
      } else if (auto parsed = parse_method(m.get<std::string>())) {
        out.methods.push_back(*parsed);
      } else {
        p.fail(where, "unknown method '" + m.get<std::string>() + "'");
      }
    }
  }

  out.epsilon_sweep.clear();
  if (doc.contains("epsilon_sweep")) {
    const json& sweep = doc["epsilon_sweep"];
    if (!sweep.is_array()) {
      p.fail("epsilon_sweep", "expected an array of numbers");
    } else {
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (sweep[i].is_number() && sweep[i].get<double>() >= 0.0) {
          out.epsilon_sweep.push_back(sweep[i].get<double>());
        } else {
          p.fail("epsilon_sweep[" + std::to_string(i) + "]", "expected a non-negative number");
        }
      }
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) {
      p.fail("output", "expected an object");
    } else {
      if (o.contains("path")) {
        if (o["path"].is_string()) {
          out.output.path = o["path"].get<std::string>();
        } else {
          p.fail("output.path", "expected a string");
        }
      }
      if (o.contains("format")) {
        const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
        if (f == "csv" || f == "json") {
          out.output.format = f;
        } else {
          p.fail("output.format", "expected \"csv\" or \"json\"");
        }
      }
    }
  }
  return diags;
}

std::vector<Diagnostic> check_scenario(const Scenario& s) {
  std::vector<Diagnostic> diags;
  const RecurrenceSpec& spec = s.spec;
  if (spec.order < kMinOrder || spec.order > kMaxOrder) {
    diags.push_back({"order", "order must lie in [2, 8], got " + std::to_string(spec.order)});
    return diags;
  }
  if (static_cast<int>(spec.coeffs.size()) != spec.order) {
    diags.push_back({"coefficients", "expected " + std::to_string(spec.order) + " models, got " +
                                         std::to_string(spec.coeffs.size())});
  }
  if (static_cast<int>(s.initial.size()) != spec.order) {
    diags.push_back({"initial", "expected " + std::to_string(spec.order) + " values, got " +
                                    std::to_string(s.initial.size())});
  }
  if (spec.horizon < 1) diags.push_back({"horizon", "horizon must be positive"});

  for (const Method m : s.methods) {
    if (third_order_only(m) && spec.order != 3) {
      diags.push_back({"methods", std::string(to_string(m)) +
                                      " requires order 3 (method/order mismatch, order is " +
                                      std::to_string(spec.order) + ")"});
    }
    if (requires_homogeneous(m) && !spec.forcing.identically_zero()) {
      diags.push_back({"methods", std::string(to_string(m)) +
                                      " is defined for homogeneous problems only but forcing is nonzero"});
    }
  }
  if (!diags.empty()) return diags;

  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    if (!spec.coeffs[i].covers(spec.k_start, spec.window_end())) {
      diags.push_back({"coefficients[" + std::to_string(i) + "]",
                       "tabulated values must cover [" + std::to_string(spec.k_start) + ", " +
                           std::to_string(spec.window_end()) + "]"});
    }
  }
  if (!spec.forcing.covers(spec.k_start, spec.window_end())) {
    diags.push_back({"forcing", "tabulated values must cover [" + std::to_string(spec.k_start) +
                                    ", " + std::to_string(spec.window_end()) + "]"});
  }
  if (!diags.empty()) return diags;

  for (long k = spec.k_start; k <= spec.window_end(); ++k) {
    if (spec.coeffs[0].at(k) == Complex{0.0, 0.0}) {
      diags.push_back({"coefficients[0]", "f_0 vanishes at k=" + std::to_string(k) +
                                              ": zero characteristic root is not admissible"});
      break;
    }
  }
  const auto check_eps = [&](double e, const std::string& where) {
    if (!(e >= 0.0)) diags.push_back({where, "epsilon must be non-negative"});
  };
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    if (auto e = spec.coeffs[i].epsilon()) check_eps(*e, "coefficients[" + std::to_string(i) + "].epsilon");
  }
  return diags;
}

json export_tabulated(const Scenario& s) {
  const auto tab = [&](const CoefficientModel& m) {
    const auto t = std::get<Tabulated>(m.tabulate(s.spec.k_start, s.spec.window_end()).variant());
    json values = json::array();
    for (const auto& v : t.values) values.push_back(complex_to_json(v));
    return json{{"type", "tabulated"}, {"k_start", t.k_start}, {"values", values}};
  };
  json doc;
  doc["name"] = s.name;
  doc["order"] = s.spec.order;
  doc["k_start"] = s.spec.k_start;
  doc["horizon"] = s.spec.horizon;
  doc["coefficients"] = json::array();
  for (const auto& c : s.spec.coeffs) doc["coefficients"].push_back(tab(c));
  doc["forcing"] = tab(s.spec.forcing);
  doc["initial"] = json::array();
  for (const auto& c : s.initial) doc["initial"].push_back(complex_to_json(c));
  doc["methods"] = json::array();
  for (const auto m : s.methods) doc["methods"].push_back(std::string(to_string(m)));
  if (s.tolerance) doc["tolerance"] = *s.tolerance;
  doc["output"] = json{{"path", s.output.path}, {"format", s.output.format}};
  return doc;
}

}  // namespace lde

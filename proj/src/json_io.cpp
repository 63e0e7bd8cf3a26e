#include "qclass/json_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <numbers>

#include "json.hpp"
#include "qclass/errors.hpp"
#include "qclass/version.hpp"

namespace qclass {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!stack_.empty()) {
    if (!first_in_level_.back()) out_ += ',';
    first_in_level_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  stack_ += 'o';
  first_in_level_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  stack_.pop_back();
  first_in_level_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  stack_ += 'a';
  first_in_level_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  stack_.pop_back();
  first_in_level_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  if (!first_in_level_.back()) out_ += ',';
  first_in_level_.back() = false;
  out_ += '"';
  out_ += escape(name);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double x) {
  separate();
  out_ += fmt_double(x);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t x) {
  separate();
  char buf[24];
  std::snprintf(buf, sizeof buf, "%" PRId64, x);
  out_ += buf;
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t x) {
  separate();
  char buf[24];
  std::snprintf(buf, sizeof buf, "%" PRIu64, x);
  out_ += buf;
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separate();
  out_ += b ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
  separate();
  out_ += '"';
  out_ += escape(s);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

// --------------------------------------------------------------------------
// Parsing.

namespace {

using nlohmann::json;

json parse_or_diagnose(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("JSON parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

const json& require_field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + name + "'");
  return *it;
}

double require_number(const json& j, const char* name) {
  const json& f = require_field(j, name);
  if (!f.is_number()) throw SchemaError(std::string("field '") + name + "' must be a number");
  return f.get<double>();
}

Complex require_complex(const json& j, const char* name) {
  const json& f = require_field(j, name);
  if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number())
    throw SchemaError(std::string("field '") + name +
                      "' must be a two-element [re, im] array");
  return Complex{f[0].get<double>(), f[1].get<double>()};
}

}  // namespace

ParsedState parse_state_json(const std::string& text) {
  const json j = parse_or_diagnose(text);
  if (!j.is_object()) throw SchemaError("state file must contain a JSON object");

  ParsedState out;
  if (j.contains("matrix")) {
    const json& m = j["matrix"];
    if (!m.is_array() || m.size() != 4)
      throw SchemaError("field 'matrix' must be a 4x4 array");
    for (int i = 0; i < 4; ++i) {
      const json& row = m[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != 4)
        throw SchemaError("field 'matrix' row " + std::to_string(i) +
                          " must have 4 entries");
      for (int k = 0; k < 4; ++k) {
        const json& e = row[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw SchemaError("matrix entry (" + std::to_string(i) + "," +
                            std::to_string(k) + ") must be a [re, im] array");
        out.matrix(i, k) = Complex{e[0].get<double>(), e[1].get<double>()};
      }
    }
    return out;
  }

  XState s;
  s.rho11 = require_number(j, "rho11");
  s.rho22 = require_number(j, "rho22");
  s.rho33 = require_number(j, "rho33");
  s.rho44 = require_number(j, "rho44");
  s.rho14 = require_complex(j, "rho14");
  s.rho23 = require_complex(j, "rho23");
  out.matrix = s.to_matrix();
  out.xstate = s;
  return out;
}

SWKernel parse_kernel_json(const std::string& text) {
  const json j = parse_or_diagnose(text);
  if (!j.is_object()) throw SchemaError("kernel file must contain a JSON object");
  const json& kind = require_field(j, "kind");
  if (!kind.is_string()) throw SchemaError("field 'kind' must be a string");
  const json& moduli = require_field(j, "moduli");
  if (!moduli.is_array() || moduli.size() != 2 || !moduli[0].is_number() ||
      !moduli[1].is_number())
    throw SchemaError("field 'moduli' must be a two-element numeric array");
  const double a = moduli[0].get<double>();
  const double b = moduli[1].get<double>();
  const std::string ks = kind.get<std::string>();
  if (ks == "pair") return build_pair_kernel(PairModuli{a, b});
  if (ks == "quatrit") return build_quatrit_kernel(QuatritModuli{a, b});
  throw SchemaError("field 'kind' must be \"pair\" or \"quatrit\"");
}

SWKernel parse_kernel_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw SchemaError("kernel spec must look like pair:<d14>,<d23> or "
                      "quatrit:<pi1>,<pi2>, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  const auto comma = rest.find(',');
  if (comma == std::string::npos)
    throw SchemaError("kernel spec needs two comma-separated moduli, got '" + spec + "'");
  double a = 0.0, b = 0.0;
  try {
    std::size_t used_a = 0, used_b = 0;
    a = std::stod(rest.substr(0, comma), &used_a);
    b = std::stod(rest.substr(comma + 1), &used_b);
    if (used_a != comma || used_b != rest.size() - comma - 1)
      throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw SchemaError("kernel spec moduli must be numbers, got '" + spec + "'");
  }
  if (kind == "pair") return build_pair_kernel(PairModuli{a, b});
  if (kind == "quatrit") return build_quatrit_kernel(QuatritModuli{a, b});
  throw SchemaError("kernel spec kind must be 'pair' or 'quatrit', got '" + kind + "'");
}

// --------------------------------------------------------------------------
// Serialization.

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void write_meta(JsonWriter& w, const OutputMeta& meta) {
  w.key("meta").begin_object();
  if (meta.seed) w.key("seed").value(*meta.seed);
  w.key("config_hash").value(meta.config_hash);
  w.key("versions").begin_object().key("qclass").value(kVersion).end_object();
  if (!meta.sources.empty()) {
    w.key("config_sources").begin_object();
    for (const auto& [k, v] : meta.sources) w.key(k).value(v);
    w.end_object();
  }
  w.end_object();
}

void write_spectrum(JsonWriter& w, const Spectrum4& s) {
  w.begin_array();
  for (double x : s.v) w.value(x);
  w.end_array();
}

void write_flag_stats(JsonWriter& w, const char* name, const FlagStats& s) {
  w.key(name).begin_object();
  w.key("count").value(s.count);
  w.key("fraction").value(s.fraction);
  w.key("wilson_halfwidth").value(s.wilson_halfwidth);
  w.key("interval").begin_array().value(s.interval_low).value(s.interval_high).end_array();
  w.end_object();
}

const char* kernel_kind_name(KernelKind k) {
  return k == KernelKind::pair ? "pair" : "quatrit";
}

void write_kernel_summary(JsonWriter& w, const SWKernel& k) {
  w.begin_object();
  w.key("kind").value(kernel_kind_name(k.kind));
  w.key("moduli").begin_array().value(k.moduli[0]).value(k.moduli[1]).end_array();
  w.end_object();
}

}  // namespace

std::string classification_json(const Classification& c, const OutputMeta& meta) {
  JsonWriter w;
  w.begin_object();
  w.key("separable").value(c.separable);
  w.key("absolutely_separable").value(c.absolutely_separable);
  w.key("polytope_positive").value(c.polytope_positive);
  if (c.lu_orbit_positive)
    w.key("lu_orbit_positive").value(*c.lu_orbit_positive);
  else
    w.key("lu_orbit_positive").null();
  w.key("doubly_classical").value(c.doubly_classical);
  w.key("margins").begin_object();
  w.key("ppt").value(c.ppt_margin);
  if (c.inequality_margin)
    w.key("inequalities").value(*c.inequality_margin);
  else
    w.key("inequalities").null();
  if (c.lu_orbit_min)
    w.key("lu_orbit_min").value(*c.lu_orbit_min);
  else
    w.key("lu_orbit_min").null();
  w.end_object();
  w.key("wigner_bounds").begin_object();
  w.key("lower").value(c.bounds.lower);
  w.key("upper").value(c.bounds.upper);
  w.end_object();
  write_meta(w, meta);
  w.end_object();
  return w.str() + "\n";
}

std::string kernel_json(const SWKernel& k, const KernelResiduals& r,
                        const OutputMeta& meta) {
  JsonWriter w;
  w.begin_object();
  w.key("kind").value(kernel_kind_name(k.kind));
  w.key("moduli").begin_array().value(k.moduli[0]).value(k.moduli[1]).end_array();
  w.key("boundary").value(k.boundary);
  w.key("matrix").begin_array();
  for (int i = 0; i < 4; ++i) {
    w.begin_array();
    for (int j = 0; j < 4; ++j) {
      w.begin_array().value(k.matrix(i, j).real()).value(k.matrix(i, j).imag()).end_array();
    }
    w.end_array();
  }
  w.end_array();
  w.key("spectrum_raw");
  write_spectrum(w, k.spectrum);
  w.key("spectrum_sorted");
  write_spectrum(w, k.spectrum.sorted_descending());
  w.key("residuals").begin_object();
  w.key("sum").value(r.sum_residual);
  w.key("sum_sq").value(r.sum_sq_residual);
  if (k.kind == KernelKind::pair) {
    w.key("reduced_a").value(r.reduced_a_residual);
    w.key("reduced_b").value(r.reduced_b_residual);
  } else {
    w.key("reduced_a").null();
    w.key("reduced_b").null();
  }
  w.key("pass").value(r.pass());
  w.end_object();
  write_meta(w, meta);
  w.end_object();
  return w.str() + "\n";
}

std::string ensemble_report_json(const EnsembleReport& rep, const SWKernel& kernel,
                                 const OutputMeta& meta) {
  JsonWriter w;
  w.begin_object();
  w.key("n_samples").value(rep.n_samples);
  w.key("ensemble").value(rep.ensemble == EnsembleKind::hs ? "hs" : "xstate");
  w.key("kernel");
  write_kernel_summary(w, kernel);
  w.key("seed").value(rep.seed);
  w.key("flags").begin_object();
  write_flag_stats(w, "separable", rep.separable);
  write_flag_stats(w, "absolutely_separable", rep.absolutely_separable);
  write_flag_stats(w, "polytope_positive", rep.polytope_positive);
  if (rep.lu_orbit_positive)
    write_flag_stats(w, "lu_orbit_positive", *rep.lu_orbit_positive);
  write_flag_stats(w, "doubly_classical", rep.doubly_classical);
  w.end_object();
  write_meta(w, meta);
  w.end_object();
  return w.str() + "\n";
}

std::string radius_estimate_json(const RadiusEstimate& est, const OutputMeta& meta) {
  JsonWriter w;
  w.begin_object();
  w.key("property").value(est.property == RadiusProperty::separability
                              ? "separability"
                              : "absolute_classicality");
  w.key("radius_hs").value(est.radius_hs);
  w.key("directions_tested").value(est.directions_tested);
  w.key("bisection_tol").value(est.bisection_tol);
  if (est.property == RadiusProperty::absolute_classicality) {
    w.key("kernel_family").value(kernel_kind_name(est.kernel_family));
    w.key("kernel_scan_resolution").value(est.kernel_scan_resolution);
  }
  // The Hilbert-Schmidt number is the measurement; the rescaled candidate is
  // the same radius in the convention that reports 1/3 for the two-qubit
  // separability ball.
  w.key("convention_candidates").begin_object();
  w.key("hilbert_schmidt").value(est.radius_hs);
  w.key("rescaled_2_over_sqrt3").value(est.radius_hs * 2.0 / std::numbers::sqrt3);
  w.end_object();
  write_meta(w, meta);
  w.end_object();
  return w.str() + "\n";
}

std::string orbit_result_json(const OrbitMinResult& res, OrbitGroup group,
                              const OutputMeta& meta) {
  JsonWriter w;
  w.begin_object();
  w.key("group").value(group == OrbitGroup::lu ? "lu" : "full");
  w.key("min_value").value(res.min_value);
  w.key("converged").value(res.converged);
  w.key("restarts_used").value(res.restarts_used);
  w.key("evaluations").value(res.evaluations);
  w.key("argmin_parameters").begin_object();
  if (const auto* lu = std::get_if<PhasePointLU>(&res.argmin)) {
    w.key("alpha1").value(lu->alpha1);
    w.key("beta1").value(lu->beta1);
    w.key("gamma1").value(lu->gamma1);
    w.key("alpha2").value(lu->alpha2);
    w.key("beta2").value(lu->beta2);
    w.key("gamma2").value(lu->gamma2);
  } else if (const auto* full = std::get_if<PhasePointFull>(&res.argmin)) {
    w.key("theta").begin_array();
    for (double x : full->theta) w.value(x);
    w.end_array();
    w.key("phi").begin_array();
    for (double x : full->phi) w.value(x);
    w.end_array();
    w.key("chi").begin_array();
    for (double x : full->chi) w.value(x);
    w.end_array();
  }
  w.end_object();
  write_meta(w, meta);
  w.end_object();
  return w.str() + "\n";
}

}  // namespace qclass

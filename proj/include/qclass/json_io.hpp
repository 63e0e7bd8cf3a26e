#pragma once

// File formats.  Inputs are parsed with nlohmann::json and validated field
// by field; outputs go through a small writer that prints every double with
// 17 significant digits, so serialized reports are byte-stable and respect
// value round trips.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qclass/ensemble.hpp"
#include "qclass/matrix.hpp"
#include "qclass/sw_kernel.hpp"
#include "qclass/wigner.hpp"
#include "qclass/xstate.hpp"

namespace qclass {

// Deterministic JSON emitter.  Keys are written in call order; doubles use
// "%.17g"; strings are escaped per RFC 8259.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double x);
  JsonWriter& value(std::int64_t x);
  JsonWriter& value(std::uint64_t x);
  JsonWriter& value(int x) { return value(static_cast<std::int64_t>(x)); }
  JsonWriter& value(bool b);
  JsonWriter& value(const std::string& s);
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& null();

  const std::string& str() const { return out_; }

 private:
  void separate();

  std::string out_;
  std::string stack_;                 // 'o' per open object, 'a' per open array
  std::vector<bool> first_in_level_;  // no comma needed yet at this level
  bool pending_key_ = false;          // a key was just written
};

// --------------------------------------------------------------------------
// Input parsing.  All throw SchemaError with line/column or field
// diagnostics on malformed input.

struct ParsedState {
  Mat4 matrix;
  std::optional<XState> xstate;  // present when the file used X coordinates
};

// Accepts either the X-state schema
//   {"rho11": x, ..., "rho44": x, "rho14": [re, im], "rho23": [re, im]}
// or the dense schema {"matrix": [[[re, im] x4] x4]}.
ParsedState parse_state_json(const std::string& text);

// {"kind": "pair"|"quatrit", "moduli": [a, b]}
SWKernel parse_kernel_json(const std::string& text);

// CLI mini-syntax "pair:<d14>,<d23>" / "quatrit:<pi1>,<pi2>".
SWKernel parse_kernel_spec(const std::string& spec);

// --------------------------------------------------------------------------
// Output serialization.  The meta block carries seed (when meaningful), a
// hash of the value-relevant configuration and the library version.

struct OutputMeta {
  std::optional<std::uint64_t> seed;
  std::string config_hash;
  // flag name -> provenance ("cli", "config", "env", "default")
  std::vector<std::pair<std::string, std::string>> sources;
};

std::uint64_t fnv1a64(const std::string& data);

std::string classification_json(const Classification& c, const OutputMeta& meta);
std::string kernel_json(const SWKernel& k, const KernelResiduals& r,
                        const OutputMeta& meta);
std::string ensemble_report_json(const EnsembleReport& rep, const SWKernel& kernel,
                                 const OutputMeta& meta);
std::string radius_estimate_json(const RadiusEstimate& est, const OutputMeta& meta);
std::string orbit_result_json(const OrbitMinResult& res, OrbitGroup group,
                              const OutputMeta& meta);

}  // namespace qclass

// qclass: classify two-qubit X-states by separability and Wigner-function
// positivity, build and validate phase-space kernels, emit positivity
// polytopes and figure rasters, and run Monte Carlo ensemble estimates.
//
// Exit codes: 0 success, 1 usage, 2 malformed input files or specs,
// 3 physics validation failures, 4 kernel moduli outside their domain,
// 5 unreadable/unwritable paths.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qclass/ensemble.hpp"
#include "qclass/errors.hpp"
#include "qclass/json_io.hpp"
#include "qclass/separability.hpp"
#include "qclass/version.hpp"

using namespace qclass;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string human(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Configuration resolution: CLI flag > config file > QCLASS_SEED env (seed
// only) > built-in default.  Every resolved value records its provenance in
// the output metadata.

struct ConfigFile {
  nlohmann::json j;
  bool loaded = false;

  void load(const std::string& path) {
    if (path.empty()) return;
    const std::string text = read_file(path);
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw SchemaError("config file must contain a JSON object");
    loaded = true;
  }

  template <typename T>
  bool fetch(const char* name, T& into) const {
    if (!loaded) return false;
    const auto it = j.find(name);
    if (it == j.end()) return false;
    try {
      into = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw SchemaError(std::string("config field '") + name + "' has the wrong type");
    }
    return true;
  }
};

struct Resolver {
  const CLI::App* cmd;
  ConfigFile cfg;
  OutputMeta meta;

  template <typename T>
  T resolve(const char* flag, const char* cfg_name, T cli_value, T fallback) {
    if (cmd->count(flag) > 0) {
      meta.sources.emplace_back(cfg_name, "cli");
      return cli_value;
    }
    T from_cfg{};
    if (cfg.fetch(cfg_name, from_cfg)) {
      meta.sources.emplace_back(cfg_name, "config");
      return from_cfg;
    }
    meta.sources.emplace_back(cfg_name, "default");
    return fallback;
  }

  std::uint64_t resolve_seed(std::uint64_t cli_value) {
    if (cmd->count("--seed") > 0) {
      meta.sources.emplace_back("seed", "cli");
      return cli_value;
    }
    std::uint64_t from_cfg = 0;
    if (cfg.fetch("seed", from_cfg)) {
      meta.sources.emplace_back("seed", "config");
      return from_cfg;
    }
    if (const char* env = std::getenv("QCLASS_SEED")) {
      try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing");
        meta.sources.emplace_back("seed", "env");
        return v;
      } catch (const std::exception&) {
        throw SchemaError("QCLASS_SEED must be an unsigned integer, got '" +
                          std::string(env) + "'");
      }
    }
    meta.sources.emplace_back("seed", "default");
    return 0;
  }

  Tolerances resolve_tolerances(const std::vector<std::string>& overrides) {
    Tolerances t{};
    nlohmann::json cfg_tols;
    if (cfg.fetch("tolerances", cfg_tols)) {
      for (const auto& [k, v] : cfg_tols.items()) {
        if (!v.is_number())
          throw SchemaError("config tolerance '" + k + "' must be a number");
        apply_tolerance(t, k, v.get<double>());
      }
    }
    for (const std::string& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw SchemaError("tolerance override must be name=value, got '" + ov + "'");
      double val = 0.0;
      try {
        val = std::stod(ov.substr(eq + 1));
      } catch (const std::exception&) {
        throw SchemaError("tolerance override value must be a number, got '" + ov + "'");
      }
      apply_tolerance(t, ov.substr(0, eq), val);
    }
    return t;
  }

  static void apply_tolerance(Tolerances& t, const std::string& name, double value) {
    if (name == "hermiticity") t.hermiticity = value;
    else if (name == "reconstruction") t.reconstruction = value;
    else if (name == "unitarity") t.unitarity = value;
    else if (name == "simplex") t.simplex = value;
    else if (name == "psd") t.psd = value;
    else if (name == "boundary") t.boundary = value;
    else if (name == "kernel_residual") t.kernel_residual = value;
    else if (name == "x_shape") t.x_shape = value;
    else if (name == "round_trip") t.round_trip = value;
    else if (name == "vertex_dedup") t.vertex_dedup = value;
    else if (name == "polytope") t.polytope = value;
    else if (name == "imag_residue") t.imag_residue = value;
    else if (name == "orbit_value") t.orbit_value = value;
    else if (name == "orbit_gradient") t.orbit_gradient = value;
    else throw SchemaError("unknown tolerance '" + name + "'");
  }
};

std::string hash_hex(const std::string& canonical) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string state_path, kernel_spec = "pair:0,0", config_path, output;
  std::vector<std::string> tol_overrides;
  bool orbit_check = false, orbit_as_cplus = false;
  int restarts = 12;
  long budget = 4000;
};

void run_classify(const CLI::App* cmd, const ClassifyArgs& a) {
  Resolver res{cmd, {}, {}};
  res.cfg.load(a.config_path);

  ClassifyConfig cfg;
  cfg.orbit_check = a.orbit_check;
  cfg.orbit_as_cplus = a.orbit_as_cplus;
  cfg.orbit_restarts = res.resolve("--restarts", "orbit_restarts", a.restarts, 12);
  cfg.orbit_budget = res.resolve("--budget", "orbit_budget", a.budget, 4000L);
  cfg.tol = res.resolve_tolerances(a.tol_overrides);

  const SWKernel kernel = parse_kernel_spec(a.kernel_spec);
  const ParsedState state = parse_state_json(read_file(a.state_path));

  Classification c;
  if (state.xstate) {
    validate_xstate(*state.xstate, cfg.tol);
    c = classify(x_to_params(*state.xstate), kernel, cfg);
  } else {
    require_density_matrix(state.matrix, cfg.tol);
    c = classify(state.matrix, kernel, cfg);
  }

  res.meta.config_hash = hash_hex("classify|" + a.kernel_spec + "|" +
                                  std::to_string(cfg.orbit_check) +
                                  std::to_string(cfg.orbit_as_cplus) +
                                  std::to_string(cfg.orbit_restarts));
  write_output(a.output, classification_json(c, res.meta));
  if (!a.output.empty() && a.output != "-")
    std::cout << "classification -> " << a.output << " (separable=" << c.separable
              << ", doubly_classical=" << c.doubly_classical << ")\n";
}

struct KernelArgs {
  std::string kind;
  double a = 0.0, b = 0.0;
  int scan = 0;
  std::string output;
};

void run_kernel(const KernelArgs& a) {
  if (a.scan > 0) {
    if (a.kind != "pair")
      throw SchemaError("--scan rasters are defined for the pair family only");
    write_output(a.output, pair_scan_csv(a.scan));
    if (!a.output.empty() && a.output != "-")
      std::cout << "pair moduli scan (" << a.scan << "x" << a.scan << ") -> "
                << a.output << "\n";
    return;
  }
  SWKernel k;
  if (a.kind == "pair")
    k = build_pair_kernel(PairModuli{a.a, a.b});
  else if (a.kind == "quatrit")
    k = build_quatrit_kernel(QuatritModuli{a.a, a.b});
  else
    throw SchemaError("kernel kind must be 'pair' or 'quatrit', got '" + a.kind + "'");

  OutputMeta meta;
  meta.config_hash = hash_hex("kernel|" + a.kind + "|" + human(a.a) + "," + human(a.b));
  write_output(a.output, kernel_json(k, validate_kernel(k), meta));
  if (!a.output.empty() && a.output != "-") {
    const Spectrum4 s = k.spectrum.sorted_descending();
    std::cout << "kernel " << a.kind << "(" << human(a.a) << ", " << human(a.b)
              << ") spectrum [" << human(s.v[0]) << ", " << human(s.v[1]) << ", "
              << human(s.v[2]) << ", " << human(s.v[3]) << "] -> " << a.output << "\n";
  }
}

struct PolytopeArgs {
  std::string kernel_spec = "pair:0,0", output;
};

void run_polytope(const PolytopeArgs& a) {
  const SWKernel kernel = parse_kernel_spec(a.kernel_spec);
  const PositivityPolytope poly = polytope_vertices(kernel.spectrum);
  std::string csv = "r1,r2,r3,r4\n";
  for (const auto& v : poly.vertices) {
    for (int k = 0; k < 4; ++k) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v[k]);
      csv += buf;
      csv += k == 3 ? '\n' : ',';
    }
  }
  write_output(a.output, csv);
  if (!a.output.empty() && a.output != "-")
    std::cout << "polytope of " << a.kernel_spec << ": " << poly.vertices.size()
              << " vertices -> " << a.output << "\n";
}

struct MinimizeArgs {
  std::string state_path, kernel_spec = "pair:0,0", group = "full", config_path, output;
  std::vector<std::string> tol_overrides;
  int restarts = 12;
  long budget = 4000;
};

void run_minimize(const CLI::App* cmd, const MinimizeArgs& a) {
  Resolver res{cmd, {}, {}};
  res.cfg.load(a.config_path);
  const int restarts = res.resolve("--restarts", "orbit_restarts", a.restarts, 12);
  const long budget = res.resolve("--budget", "orbit_budget", a.budget, 4000L);
  const Tolerances tol = res.resolve_tolerances(a.tol_overrides);

  if (a.group != "lu" && a.group != "full")
    throw SchemaError("group must be 'lu' or 'full', got '" + a.group + "'");
  const OrbitGroup group = a.group == "lu" ? OrbitGroup::lu : OrbitGroup::full;

  const SWKernel kernel = parse_kernel_spec(a.kernel_spec);
  const ParsedState state = parse_state_json(read_file(a.state_path));
  if (state.xstate) validate_xstate(*state.xstate, tol);
  require_density_matrix(state.matrix, tol);

  const OrbitMinResult r = min_over_orbit(state.matrix, kernel, group, restarts,
                                          budget, tol);
  res.meta.config_hash = hash_hex("minimize|" + a.kernel_spec + "|" + a.group + "|" +
                                  std::to_string(restarts) + "|" + std::to_string(budget));
  write_output(a.output, orbit_result_json(r, group, res.meta));
  if (!a.output.empty() && a.output != "-")
    std::cout << "orbit minimum (" << a.group << ") = " << human(r.min_value)
              << (r.converged ? "" : " [unconverged]") << " -> " << a.output << "\n";
}

struct SampleArgs {
  std::string ensemble = "hs", kernel_spec = "pair:0,0", config_path, output;
  std::vector<std::string> tol_overrides;
  long n = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool orbit_check = false;
  int restarts = 12;
  long budget = 4000;
};

void run_sample(const CLI::App* cmd, const SampleArgs& a) {
  Resolver res{cmd, {}, {}};
  res.cfg.load(a.config_path);
  const long n = res.resolve("--n", "samples", a.n, 10000L);
  const std::uint64_t seed = res.resolve_seed(a.seed);
  const int threads = res.resolve("--threads", "threads", a.threads, 1);

  if (a.ensemble != "hs" && a.ensemble != "xstate")
    throw SchemaError("ensemble must be 'hs' or 'xstate', got '" + a.ensemble + "'");
  const EnsembleKind kind = a.ensemble == "hs" ? EnsembleKind::hs : EnsembleKind::xstate;

  ClassifyConfig cfg;
  cfg.orbit_check = a.orbit_check;
  cfg.orbit_restarts = res.resolve("--restarts", "orbit_restarts", a.restarts, 12);
  cfg.orbit_budget = res.resolve("--budget", "orbit_budget", a.budget, 4000L);
  cfg.tol = res.resolve_tolerances(a.tol_overrides);

  const SWKernel kernel = parse_kernel_spec(a.kernel_spec);
  const EnsembleReport rep = estimate_fractions(n, kind, kernel, seed, cfg, threads);

  // thread count deliberately left out: it never changes the values
  res.meta.seed = seed;
  res.meta.config_hash = hash_hex("sample|" + a.ensemble + "|" + a.kernel_spec + "|" +
                                  std::to_string(n) + "|" + std::to_string(seed) + "|" +
                                  std::to_string(cfg.orbit_check));
  write_output(a.output, ensemble_report_json(rep, kernel, res.meta));
  if (!a.output.empty() && a.output != "-")
    std::cout << "ensemble report (n=" << n << ", " << a.ensemble << ") -> " << a.output
              << " (separable " << human(rep.separable.fraction) << " +- "
              << human(rep.separable.wilson_halfwidth) << ")\n";
}

struct RadiusArgs {
  std::string property, kernels = "quatrit", config_path, output;
  std::vector<std::string> tol_overrides;
  int directions = 200;
  double bisection_tol = 1e-5;
  int scan_resolution = 64;
  std::uint64_t seed = 0;
};

void run_radius(const CLI::App* cmd, const RadiusArgs& a) {
  Resolver res{cmd, {}, {}};
  res.cfg.load(a.config_path);
  const std::uint64_t seed = res.resolve_seed(a.seed);
  const int scan_res =
      res.resolve("--scan-resolution", "grid_resolution", a.scan_resolution, 64);
  const Tolerances tol = res.resolve_tolerances(a.tol_overrides);

  RadiusProperty prop;
  if (a.property == "separability")
    prop = RadiusProperty::separability;
  else if (a.property == "absolute_classicality")
    prop = RadiusProperty::absolute_classicality;
  else
    throw SchemaError(
        "property must be 'separability' or 'absolute_classicality', got '" +
        a.property + "'");
  if (a.kernels != "quatrit" && a.kernels != "pair")
    throw SchemaError("kernel family must be 'quatrit' or 'pair', got '" + a.kernels +
                      "'");
  const KernelKind family = a.kernels == "pair" ? KernelKind::pair : KernelKind::quatrit;

  const RadiusEstimate est = estimate_ball_radius(prop, a.directions, a.bisection_tol,
                                                  scan_res, seed, family, tol);
  res.meta.seed = seed;
  res.meta.config_hash = hash_hex("radius|" + a.property + "|" + a.kernels + "|" +
                                  std::to_string(a.directions) + "|" +
                                  std::to_string(scan_res) + "|" + std::to_string(seed));
  write_output(a.output, radius_estimate_json(est, res.meta));
  if (!a.output.empty() && a.output != "-")
    std::cout << "hs radius (" << a.property << ") = " << human(est.radius_hs) << " -> "
              << a.output << "\n";
}

struct FiguresArgs {
  std::string which, config_path, output;
  int resolution = 32;
};

void run_figures(const CLI::App* cmd, const FiguresArgs& a) {
  Resolver res{cmd, {}, {}};
  res.cfg.load(a.config_path);
  const int resolution = res.resolve("--resolution", "grid_resolution", a.resolution, 32);

  FigureTag tag;
  if (a.which == "fig1_right")
    tag = FigureTag::fig1_right;
  else if (a.which == "fig2_left")
    tag = FigureTag::fig2_left;
  else if (a.which == "fig2_right")
    tag = FigureTag::fig2_right;
  else
    throw SchemaError("unknown figure tag '" + a.which +
                      "' (expected fig1_right, fig2_left or fig2_right)");

  write_output(a.output, figure_grid_csv(tag, resolution));
  if (!a.output.empty() && a.output != "-")
    std::cout << a.which << " raster (resolution " << resolution << ") -> " << a.output
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit X-state classicality toolkit: separability, "
               "Wigner-function positivity, phase-space kernel moduli, and "
               "Monte Carlo state-space geometry.",
               "qclass"};
  app.set_version_flag("--version", std::string("qclass ") + kVersion);
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify_cmd =
      app.add_subcommand("classify", "Classify a state file against a kernel");
  classify_cmd->add_option("--state", ca.state_path, "State JSON file (X or dense schema)")
      ->required();
  classify_cmd->add_option("--kernel", ca.kernel_spec,
                           "Kernel spec pair:<d14>,<d23> or quatrit:<pi1>,<pi2>");
  classify_cmd->add_flag("--orbit-check", ca.orbit_check,
                         "Also run the local-unitary orbit minimizer (pair kernels)");
  classify_cmd->add_flag("--orbit-as-cplus", ca.orbit_as_cplus,
                         "Use the orbit verdict instead of the polytope verdict");
  classify_cmd->add_option("--restarts", ca.restarts, "Orbit minimizer restarts");
  classify_cmd->add_option("--budget", ca.budget, "Orbit minimizer evaluation budget");
  classify_cmd->add_option("--config", ca.config_path, "JSON config file");
  classify_cmd->add_option("--tolerance", ca.tol_overrides,
                           "Tolerance override name=value (repeatable)");
  classify_cmd->add_option("-o,--output", ca.output, "Output path (default stdout)");
  classify_cmd->callback([&] { run_classify(classify_cmd, ca); });

  KernelArgs ka;
  auto* kernel_cmd =
      app.add_subcommand("kernel", "Build a kernel and report its residuals");
  kernel_cmd->add_option("kind", ka.kind, "Kernel family: pair or quatrit")->required();
  kernel_cmd->add_option("a", ka.a, "First modulus (d14 or pi1)");
  kernel_cmd->add_option("b", ka.b, "Second modulus (d23 or pi2)");
  kernel_cmd->add_option("--scan", ka.scan,
                         "Emit a moduli-space scan raster at this resolution instead");
  kernel_cmd->add_option("-o,--output", ka.output, "Output path (default stdout)");
  kernel_cmd->callback([&] { run_kernel(ka); });

  PolytopeArgs pa;
  auto* polytope_cmd =
      app.add_subcommand("polytope", "Emit positivity-polytope vertices as CSV");
  polytope_cmd->add_option("--kernel", pa.kernel_spec, "Kernel spec");
  polytope_cmd->add_option("-o,--output", pa.output, "Output path (default stdout)");
  polytope_cmd->callback([&] { run_polytope(pa); });

  MinimizeArgs ma;
  auto* minimize_cmd =
      app.add_subcommand("minimize", "Minimize the Wigner function over an orbit");
  minimize_cmd->add_option("--state", ma.state_path, "State JSON file")->required();
  minimize_cmd->add_option("--kernel", ma.kernel_spec, "Kernel spec");
  minimize_cmd->add_option("--group", ma.group, "Orbit group: lu or full");
  minimize_cmd->add_option("--restarts", ma.restarts, "Multistart restarts");
  minimize_cmd->add_option("--budget", ma.budget, "Evaluation budget per restart");
  minimize_cmd->add_option("--config", ma.config_path, "JSON config file");
  minimize_cmd->add_option("--tolerance", ma.tol_overrides,
                           "Tolerance override name=value (repeatable)");
  minimize_cmd->add_option("-o,--output", ma.output, "Output path (default stdout)");
  minimize_cmd->callback([&] { run_minimize(minimize_cmd, ma); });

  SampleArgs sa;
  auto* sample_cmd =
      app.add_subcommand("sample", "Classify random ensembles and report fractions");
  sample_cmd->add_option("--n", sa.n, "Number of samples");
  sample_cmd->add_option("--ensemble", sa.ensemble, "Ensemble: hs or xstate");
  sample_cmd->add_option("--kernel", sa.kernel_spec, "Kernel spec");
  sample_cmd->add_option("--seed", sa.seed, "Master seed (QCLASS_SEED as fallback)");
  sample_cmd->add_option("--threads", sa.threads, "Worker threads (values unchanged)");
  sample_cmd->add_flag("--orbit-check", sa.orbit_check,
                       "Run the local-unitary orbit check per sample");
  sample_cmd->add_option("--restarts", sa.restarts, "Orbit minimizer restarts");
  sample_cmd->add_option("--budget", sa.budget, "Orbit minimizer evaluation budget");
  sample_cmd->add_option("--config", sa.config_path, "JSON config file");
  sample_cmd->add_option("--tolerance", sa.tol_overrides,
                         "Tolerance override name=value (repeatable)");
  sample_cmd->add_option("-o,--output", sa.output, "Output path (default stdout)");
  sample_cmd->callback([&] { run_sample(sample_cmd, sa); });

  RadiusArgs ra;
  auto* radius_cmd = app.add_subcommand(
      "radius", "Estimate an inscribed-ball radius around the maximally mixed state");
  radius_cmd
      ->add_option("--property", ra.property,
                   "Property: separability or absolute_classicality")
      ->required();
  radius_cmd->add_option("--directions", ra.directions, "Number of probe directions");
  radius_cmd->add_option("--bisection-tol", ra.bisection_tol, "Bisection tolerance");
  radius_cmd->add_option("--scan-resolution", ra.scan_resolution,
                         "Kernel moduli scan resolution");
  radius_cmd->add_option("--kernels", ra.kernels, "Kernel family: quatrit or pair");
  radius_cmd->add_option("--seed", ra.seed, "Master seed (QCLASS_SEED as fallback)");
  radius_cmd->add_option("--config", ra.config_path, "JSON config file");
  radius_cmd->add_option("--tolerance", ra.tol_overrides,
                         "Tolerance override name=value (repeatable)");
  radius_cmd->add_option("-o,--output", ra.output, "Output path (default stdout)");
  radius_cmd->callback([&] { run_radius(radius_cmd, ra); });

  FiguresArgs fa;
  auto* figures_cmd = app.add_subcommand("figures", "Emit figure-data rasters as CSV");
  figures_cmd
      ->add_option("which", fa.which, "fig1_right, fig2_left or fig2_right")
      ->required();
  figures_cmd->add_option("--resolution", fa.resolution, "Grid resolution");
  figures_cmd->add_option("--config", fa.config_path, "JSON config file");
  figures_cmd->add_option("-o,--output", fa.output, "Output path (default stdout)");
  figures_cmd->callback([&] { run_figures(figures_cmd, fa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;  // normalize usage errors
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ModuliDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}

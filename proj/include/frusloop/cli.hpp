#pragma once

// Command-line front end. run() does all the work so tests can drive it
// without spawning processes.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 usage or invalid parameter,
// 3 generator saturation, 4 I/O or malformed input.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frusloop/analyze.hpp"
#include "frusloop/bench.hpp"
#include "frusloop/convert.hpp"
#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/generate.hpp"
#include "frusloop/io.hpp"
#include "frusloop/solve.hpp"
#include "frusloop/version.hpp"

namespace frusloop::cli {

using nlohmann::json;

namespace detail {

inline std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

inline json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw FormatError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError("config " + path + " must be a JSON object");
  json out = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) out[normalize_key(it.key())] = it.value();
  return out;
}

template <class T>
T get(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key) || cfg[key].is_null()) return fallback;
  try {
    return cfg[key].get<T>();
  } catch (const json::exception&) {
    throw InvalidParameter(std::string("config value '") + key + "' has the wrong type");
  }
}

template <class T>
T need(const json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg[key].is_null())
    throw InvalidParameter(std::string("missing required parameter --") + key);
  return get<T>(cfg, key, T{});
}

/// Records every CLI option the user actually passed; those override the
/// config file.
class Overrides {
 public:
  template <class T>
  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app.add_option(flag, *holder, help);
    apply_.push_back([opt, holder, key](json& cfg) {
      if (opt->count() > 0) cfg[key] = *holder;
    });
  }

  void apply(json& cfg) const {
    for (const auto& f : apply_) f(cfg);
  }

 private:
  std::vector<std::function<void(json&)>> apply_;
};

inline std::uint64_t resolve_seed(json& cfg, std::ostream& err) {
  std::uint64_t seed;
  if (cfg.contains("seed") && !cfg["seed"].is_null()) {
    seed = get<std::uint64_t>(cfg, "seed", 0);
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    cfg["seed"] = seed;
  }
  err << json{{"seed", seed}}.dump() << "\n";
  return seed;
}

inline json provenance(const std::string& command, const json& cfg) {
  return json{{"tool", "frusloop"},
              {"version", kVersion},
              {"command", command},
              {"config", cfg},
              {"seed", cfg.contains("seed") ? cfg["seed"] : json(nullptr)}};
}

inline void emit(const json& cfg, std::ostream& out, const std::string& text) {
  const std::string path = get<std::string>(cfg, "out", "");
  if (path.empty() || path == "-") out << text;
  else write_file(path, text);
}

inline bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

inline json stats_json(const PointResult& r) {
  const auto& s = r.stats;
  return json{{"type", "point"},
              {"n", r.point.n},
              {"m", r.point.m ? r.point.m : r.point.n},
              {"f", r.point.f},
              {"rho", r.point.rho},
              {"mode", to_string(r.point.mode)},
              {"d", r.point.d},
              {"k", s.k},
              {"mu_hat", s.mu_hat},
              {"sigma_hat", s.sigma_hat},
              {"p5", s.p5},
              {"p50", s.p50},
              {"p95", s.p95},
              {"geo_mean", s.geo_mean},
              {"median", s.median},
              {"censored_count", r.censored},
              {"n_sweep", r.n_sweep},
              {"n_sweep_clamped", r.n_sweep_clamped},
              {"max_runs", r.point.max_runs},
              {"seed", r.point.seed},
              {"n_tot", r.n_tot}};
}

inline std::string csv_row(const PointResult& r) {
  char buf[512];
  const auto& s = r.stats;
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%zu\n",
                r.point.n, r.point.f, r.point.rho, s.k, s.mu_hat, s.sigma_hat, s.p5, s.p50, s.p95,
                r.censored);
  return buf;
}

inline constexpr const char* kCsvHeader = "n,f,rho,k,mu_hat,sigma_hat,p5,p50,p95,censored_count\n";

template <class T>
std::vector<T> list_or_scalar(const json& cfg, const char* list_key, const char* scalar_key) {
  if (cfg.contains(scalar_key) && !cfg[scalar_key].is_null()) return {get<T>(cfg, scalar_key, T{})};
  if (cfg.contains(list_key) && cfg[list_key].is_array()) {
    try {
      return cfg[list_key].get<std::vector<T>>();
    } catch (const json::exception&) {
      throw InvalidParameter(std::string("config list '") + list_key + "' has the wrong type");
    }
  }
  throw InvalidParameter(std::string("missing parameter --") + scalar_key + " (or config list '" +
                         list_key + "')");
}

// ---- subcommands ---------------------------------------------------------

inline GenParams gen_params(const json& cfg) {
  GenParams p;
  p.n = need<std::size_t>(cfg, "n");
  p.m = get<std::size_t>(cfg, "m", p.n);
  p.mode = parse_mode(get<std::string>(cfg, "mode", "random"));
  p.f = get<double>(cfg, "f", 0.0);
  p.rho = get<double>(cfg, "rho", 0.0);
  if (cfg.contains("loops")) p.loops = get<std::size_t>(cfg, "loops", 0);
  if (!p.loops && !cfg.contains("rho")) throw InvalidParameter("missing required parameter --rho");
  p.d = get<double>(cfg, "d", 0.5);
  p.seed = get<std::uint64_t>(cfg, "seed", 0);
  p.jitter = get<double>(cfg, "alpha_jitter", 0.0);
  p.allow_constructive = get<bool>(cfg, "allow_constructive", true);
  if (cfg.contains("N1") || cfg.contains("N2") || cfg.contains("N3"))
    p.loop_mix = LoopMix{get<std::size_t>(cfg, "N1", 0), get<std::size_t>(cfg, "N2", 0),
                         get<std::size_t>(cfg, "N3", 0)};
  return p;
}

inline int cmd_generate(json cfg, std::ostream& out, std::ostream& err) {
  resolve_seed(cfg, err);
  const GenParams p = gen_params(cfg);
  const std::string format = get<std::string>(cfg, "format", "json");
  const RbmInstance inst = generate(p);
  const json prov = provenance("generate", cfg);
  if (format == "json") {
    emit(cfg, out, instance_to_json(inst, prov));
  } else if (format == "wcnf") {
    Max2SatInstance sat = instance_to_max2sat(inst);
    sat.comments.emplace_back("provenance", prov.dump());
    emit(cfg, out, write_wcnf(sat, get<std::int64_t>(cfg, "scale", kDefaultWcnfScale)));
  } else {
    throw InvalidParameter("generate --format must be json or wcnf");
  }
  return 0;
}

inline RbmInstance instance_from_wcnf(const Max2SatInstance& sat) {
  IsingForm form = max2sat_to_rbm(sat);
  RbmInstance inst = std::move(form.inst);
  for (const auto& [key, value] : sat.comments) {
    try {
      if (key == "algorithm") inst.meta.algorithm = value;
      else if (key == "f") inst.meta.f = std::stod(value);
      else if (key == "alpha") inst.meta.alpha = std::stod(value);
      else if (key == "rho") inst.meta.rho = std::stod(value);
      else if (key == "seed") inst.meta.seed = std::stoull(value);
    } catch (const std::logic_error&) {
      throw FormatError("bad wcnf comment value for '" + key + "'");
    }
  }
  // recomputed rather than read back: wcnf weights are rounded to 1/scale
  if (inst.planted) inst.ground_energy = energy(inst, *inst.planted);
  return inst;
}

inline int cmd_convert(json cfg, std::ostream& out, std::ostream&) {
  const std::string in = need<std::string>(cfg, "in");
  const std::string text = read_file(in);
  const std::string format = get<std::string>(cfg, "format", "json");
  const auto scale = get<std::int64_t>(cfg, "scale", kDefaultWcnfScale);
  const json prov = provenance("convert", cfg);
  if (looks_like_json(text)) {
    const RbmInstance inst = instance_from_json(text);
    if (format == "json") {
      emit(cfg, out, instance_to_json(inst, prov));
    } else if (format == "wcnf") {
      Max2SatInstance sat = instance_to_max2sat(inst);
      sat.comments.emplace_back("provenance", prov.dump());
      emit(cfg, out, write_wcnf(sat, scale));
    } else {
      throw InvalidParameter("convert --format must be json or wcnf");
    }
    return 0;
  }
  Max2SatInstance sat = read_wcnf(text);
  if (format == "json") {
    emit(cfg, out, instance_to_json(instance_from_wcnf(sat), prov));
  } else if (format == "wcnf") {
    emit(cfg, out, write_wcnf(sat, scale));
  } else {
    throw InvalidParameter("convert --format must be json or wcnf");
  }
  return 0;
}

inline int cmd_solve(json cfg, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(cfg, err);
  const RbmInstance inst = instance_from_json(read_file(need<std::string>(cfg, "in")));
  double target;
  if (cfg.contains("target")) target = get<double>(cfg, "target", 0.0);
  else if (inst.ground_energy) target = *inst.ground_energy;
  else throw InvalidParameter("instance has no ground_energy; pass --target");

  AnnealSchedule sched;
  sched.seed = seed;
  sched.beta_min = get<double>(cfg, "beta_min", kDefaultBetaMin);
  sched.max_runs = get<std::size_t>(cfg, "max_runs", kDefaultMaxRuns);
  if (cfg.contains("beta_max")) sched.beta_max = get<double>(cfg, "beta_max", 1.0);
  bool clamped = false;
  if (cfg.contains("nsweep")) {
    sched.n_sweep = get<std::size_t>(cfg, "nsweep", 1);
  } else {
    const auto fit = default_nsweep(std::max<std::size_t>(inst.n(), 2), inst.meta.f);
    sched.n_sweep = fit.value;
    clamped = fit.clamped;
    if (clamped) err << json{{"warning", "default n_sweep clamped to 1"}}.dump() << "\n";
  }
  const double rho = get<double>(cfg, "rho", inst.meta.rho);
  const TtsRecord rec = solve_with_restarts(inst, target, sched, rho);
  json j{{"n_tot", rec.n_tot},           {"runs_used", rec.runs_used},
         {"found", rec.found},           {"best_energy", rec.best_energy},
         {"target_energy", target},      {"wall_seconds", rec.wall_seconds},
         {"n_sweep", sched.n_sweep},     {"n_sweep_clamped", clamped},
         {"max_runs", sched.max_runs},   {"provenance", provenance("solve", cfg)}};
  emit(cfg, out, j.dump(2) + "\n");
  return 0;
}

inline int cmd_bench(json cfg, std::ostream& out, std::ostream& err) {
  const std::uint64_t master = resolve_seed(cfg, err);
  const auto sizes = list_or_scalar<std::size_t>(cfg, "sizes", "n");
  const auto fs = list_or_scalar<double>(cfg, "frustrations", "f");
  const std::string study = get<std::string>(cfg, "study", "scan");
  const std::string format = get<std::string>(cfg, "format", "jsonl");
  if (format != "jsonl" && format != "csv") throw InvalidParameter("bench --format must be jsonl or csv");
  const PeakStatistic stat = parse_statistic(get<std::string>(cfg, "statistic", "p95"));
  const unsigned threads = get<unsigned>(cfg, "threads", default_threads());

  BenchPoint base;
  base.mode = parse_mode(get<std::string>(cfg, "mode", "random"));
  base.d = get<double>(cfg, "d", 0.5);
  base.samples = get<std::size_t>(cfg, "samples", 200);
  base.n_sweep = get<std::size_t>(cfg, "nsweep", 0);
  base.max_runs = get<std::size_t>(cfg, "max_runs", kDefaultMaxRuns);
  base.beta_min = get<double>(cfg, "beta_min", kDefaultBetaMin);

  std::string jsonl = json{{"type", "provenance"}, {"provenance", provenance("bench", cfg)}}.dump() + "\n";
  std::string csv = kCsvHeader;
  auto record = [&](const PointResult& r) {
    jsonl += stats_json(r).dump() + "\n";
    csv += csv_row(r);
  };

  if (study == "scan") {
    const auto densities = list_or_scalar<double>(cfg, "densities", "rho");
    std::size_t combo = 0;
    for (std::size_t n : sizes)
      for (double f : fs) {
        BenchPoint p = base;
        p.n = n;
        p.m = get<std::size_t>(cfg, "m", n);
        p.f = f;
        p.seed = derive_seed(master, combo++);
        const ScanResult scan = density_scan(p, densities, stat, threads, record);
        if (densities.size() > 1)
          jsonl += json{{"type", "peak"}, {"n", n}, {"f", f}, {"statistic", to_string(stat)},
                        {"peak_rho", scan.peak_rho}}.dump() + "\n";
      }
  } else if (study == "scaling") {
    std::size_t combo = 0;
    for (double f : fs) {
      BenchPoint p = base;
      p.f = f;
      p.seed = derive_seed(master, combo++);
      const ScalingResult sc = scaling_study(p, sizes, threads, record);
      auto fit = [](const LogFit& x) { return json{{"A", x.A}, {"b", x.b}, {"rss", x.rss}}; };
      jsonl += json{{"type", "fit"}, {"f", f}, {"sizes", sc.sizes}, {"central", sc.central},
                    {"power_law", fit(sc.power)}, {"exponential", fit(sc.exponential)}}.dump() + "\n";
    }
  } else {
    throw InvalidParameter("bench study must be 'scan' or 'scaling'");
  }

  emit(cfg, out, format == "csv" ? csv : jsonl);
  const std::string csv_path = get<std::string>(cfg, "csv", "");
  if (!csv_path.empty()) write_file(csv_path, csv);
  return 0;
}

inline int cmd_analyze(json cfg, std::ostream& out, std::ostream&) {
  const std::string what = need<std::string>(cfg, "predictor");
  json r{{"predictor", what}};
  if (what == "intersections") {
    const auto s = expected_intersections(need<std::size_t>(cfg, "n"),
                                          get<std::size_t>(cfg, "m", need<std::size_t>(cfg, "n")),
                                          need<std::size_t>(cfg, "loops"));
    r["value"] = s.value;
    r["method"] = s.method;
    r["terms"] = s.terms;
  } else if (what == "min-overlap") {
    const auto s = expected_min_overlap(need<double>(cfg, "lambda"));
    r["value"] = s.value;
    r["method"] = s.method;
    r["terms"] = s.terms;
  } else if (what == "frustration-decay") {
    const auto n = need<std::size_t>(cfg, "n");
    r["value"] = expected_frustration_decay(n, get<std::size_t>(cfg, "m", n), need<std::size_t>(cfg, "loops"));
    r["method"] = "exact-series";
  } else if (what == "local-minima") {
    const auto e = expected_local_minima(need<std::size_t>(cfg, "n"), need<double>(cfg, "alpha"));
    r["value"] = e.overflow ? json(nullptr) : json(e.value);
    r["log_sum"] = e.log_sum;
    r["overflow"] = e.overflow;
    r["method"] = "exact-sum";
  } else if (what == "gap-variance") {
    const auto n = need<std::size_t>(cfg, "n");
    r["value"] = gap_variance(n, get<std::size_t>(cfg, "m", n), need<double>(cfg, "d"),
                              get<double>(cfg, "mu", 0.0), get<double>(cfg, "sigma", 1.0));
    r["method"] = "closed-form";
  } else if (what == "dispersion") {
    const auto d = local_field_dispersion(need<std::size_t>(cfg, "n"), need<std::size_t>(cfg, "loops"),
                                          need<double>(cfg, "eps"), need<double>(cfg, "r"),
                                          need<double>(cfg, "d"));
    r["mean"] = d.mean;
    r["variance"] = d.variance;
    r["c_v"] = d.c_v_defined ? json(d.c_v) : json(nullptr);
    r["c_v_defined"] = d.c_v_defined;
    r["method"] = "total-variance";
  } else if (what == "nsweep") {
    const auto fit = default_nsweep(need<std::size_t>(cfg, "n"), need<double>(cfg, "f"));
    r["value"] = fit.value;
    r["raw"] = fit.raw;
    r["clamped"] = fit.clamped;
    r["method"] = "fit";
  } else if (what == "rho-peak") {
    const auto n = need<std::size_t>(cfg, "n");
    r["value"] = rho_peak_reference(static_cast<double>(n));
    r["out_of_domain"] = n < 2;
    r["method"] = "fit";
  } else {
    throw InvalidParameter("unknown predictor '" + what +
                           "' (intersections, min-overlap, frustration-decay, local-minima, "
                           "gap-variance, dispersion, nsweep, rho-peak)");
  }
  r["provenance"] = provenance("analyze", cfg);
  emit(cfg, out, r.dump(2) + "\n");
  return 0;
}

inline void error_record(std::ostream& err, const char* kind, const std::string& msg, int code) {
  err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << "\n";
}

}  // namespace detail

/// Parses `args` (without the program name) and runs the subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Planted frustrated-loop MAX-2-SAT / bipartite Ising toolkit", "frusloop"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  struct Sub {
    CLI::App* app;
    Overrides ov;
  };
  std::vector<Sub> subs;
  auto make = [&](const char* name, const char* help) -> Sub& {
    subs.push_back({app.add_subcommand(name, help), {}});
    subs.back().app->add_option("--config", config_path, "JSON config file; flags override it");
    return subs.back();
  };
  subs.reserve(5);

  {
    Sub& s = make("generate", "Generate a planted instance");
    s.ov.add<std::size_t>(*s.app, "--n", "n", "visible spins");
    s.ov.add<std::size_t>(*s.app, "--m", "m", "hidden spins (default n)");
    s.ov.add<double>(*s.app, "--f", "f", "frustration index in [0, 0.25)");
    s.ov.add<double>(*s.app, "--rho", "rho", "loop density N/n");
    s.ov.add<std::size_t>(*s.app, "--loops", "loops", "loop count (overrides rho)");
    s.ov.add<double>(*s.app, "--d", "d", "block fraction for structured mode");
    s.ov.add<std::string>(*s.app, "--mode", "mode", "random | structured | uniform-sat");
    s.ov.add<double>(*s.app, "--alpha-jitter", "alpha_jitter", "relative edge jitter sigma");
    s.ov.add<std::uint64_t>(*s.app, "--seed", "seed", "RNG seed");
    s.ov.add<std::string>(*s.app, "--format", "format", "json | wcnf");
    s.ov.add<std::int64_t>(*s.app, "--scale", "scale", "wcnf weight scale");
    s.ov.add<std::string>(*s.app, "--out", "out", "output path (default stdout)");
  }
  {
    Sub& s = make("convert", "Convert between JSON instances and wcnf");
    s.ov.add<std::string>(*s.app, "--in", "in", "input file (JSON or wcnf)");
    s.ov.add<std::string>(*s.app, "--format", "format", "json | wcnf");
    s.ov.add<std::int64_t>(*s.app, "--scale", "scale", "wcnf weight scale");
    s.ov.add<std::string>(*s.app, "--out", "out", "output path (default stdout)");
  }
  {
    Sub& s = make("solve", "Simulated annealing with restarts to the planted energy");
    s.ov.add<std::string>(*s.app, "--in", "in", "instance JSON");
    s.ov.add<std::size_t>(*s.app, "--nsweep", "nsweep", "sweeps per run");
    s.ov.add<std::size_t>(*s.app, "--max-runs", "max_runs", "run cap");
    s.ov.add<double>(*s.app, "--beta-min", "beta_min", "initial inverse temperature");
    s.ov.add<double>(*s.app, "--beta-max", "beta_max", "final inverse temperature");
    s.ov.add<double>(*s.app, "--rho", "rho", "density used for beta scaling");
    s.ov.add<double>(*s.app, "--target", "target", "target energy");
    s.ov.add<std::uint64_t>(*s.app, "--seed", "seed", "RNG seed");
    s.ov.add<std::string>(*s.app, "--out", "out", "output path (default stdout)");
  }
  {
    Sub& s = make("bench", "Density scans and scaling studies");
    s.ov.add<std::size_t>(*s.app, "--n", "n", "size (overrides config sizes)");
    s.ov.add<std::size_t>(*s.app, "--m", "m", "hidden spins (default n)");
    s.ov.add<double>(*s.app, "--f", "f", "frustration (overrides config frustrations)");
    s.ov.add<double>(*s.app, "--rho", "rho", "density (overrides config densities)");
    s.ov.add<double>(*s.app, "--d", "d", "block fraction for structured mode");
    s.ov.add<std::string>(*s.app, "--mode", "mode", "random | structured");
    s.ov.add<std::size_t>(*s.app, "--samples", "samples", "instances per point");
    s.ov.add<std::size_t>(*s.app, "--nsweep", "nsweep", "sweeps per run (default fit)");
    s.ov.add<std::size_t>(*s.app, "--max-runs", "max_runs", "run cap");
    s.ov.add<double>(*s.app, "--beta-min", "beta_min", "initial inverse temperature");
    s.ov.add<std::uint64_t>(*s.app, "--seed", "seed", "master seed");
    s.ov.add<std::string>(*s.app, "--statistic", "statistic", "p95 | median | geo_mean");
    s.ov.add<std::string>(*s.app, "--study", "study", "scan | scaling");
    s.ov.add<unsigned>(*s.app, "--threads", "threads", "worker threads");
    s.ov.add<std::string>(*s.app, "--format", "format", "jsonl | csv");
    s.ov.add<std::string>(*s.app, "--csv", "csv", "also write a CSV summary here");
    s.ov.add<std::string>(*s.app, "--out", "out", "output path (default stdout)");
  }
  {
    Sub& s = make("analyze", "Closed-form predictors");
    s.ov.add<std::string>(*s.app, "predictor", "predictor",
                          "intersections | min-overlap | frustration-decay | local-minima | "
                          "gap-variance | dispersion | nsweep | rho-peak");
    s.ov.add<std::size_t>(*s.app, "--n", "n", "size");
    s.ov.add<std::size_t>(*s.app, "--m", "m", "hidden size (default n)");
    s.ov.add<std::size_t>(*s.app, "--loops", "loops", "loop count N");
    s.ov.add<double>(*s.app, "--lambda", "lambda", "mean overlap 4N/(nm)");
    s.ov.add<double>(*s.app, "--alpha", "alpha", "negative edge magnitude");
    s.ov.add<double>(*s.app, "--f", "f", "frustration index");
    s.ov.add<double>(*s.app, "--d", "d", "distance or block fraction");
    s.ov.add<double>(*s.app, "--mu", "mu", "coupling mean");
    s.ov.add<double>(*s.app, "--sigma", "sigma", "coupling standard deviation");
    s.ov.add<double>(*s.app, "--eps", "eps", "1 - alpha");
    s.ov.add<double>(*s.app, "--r", "r", "aligned fraction");
    s.ov.add<std::string>(*s.app, "--out", "out", "output path (default stdout)");
  }

  std::vector<const char*> argv{"frusloop"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const Sub& s : subs) {
      if (!s.app->parsed()) continue;
      json cfg = load_config(config_path);
      s.ov.apply(cfg);
      const std::string name = s.app->get_name();
      if (name == "generate") return cmd_generate(cfg, out, err);
      if (name == "convert") return cmd_convert(cfg, out, err);
      if (name == "solve") return cmd_solve(cfg, out, err);
      if (name == "bench") return cmd_bench(cfg, out, err);
      if (name == "analyze") return cmd_analyze(cfg, out, err);
    }
    error_record(err, "usage", "no subcommand", 2);
    return 2;
  } catch (const SaturationError& e) {
    error_record(err, "saturation", e.what(), 3);
    return 3;
  } catch (const IoError& e) {
    error_record(err, "io", e.what(), 4);
    return 4;
  } catch (const FormatError& e) {
    error_record(err, "format", e.what(), 4);
    return 4;
  } catch (const std::invalid_argument& e) {
    error_record(err, "invalid_parameter", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    error_record(err, "internal", e.what(), 1);
    return 1;
  }
}

}  // namespace frusloop::cli

// kkwin: windowed Kramers-Kronig dispersion and Casimir pressure toolkit.
// Subcommands: synth, epsilon, pressure, mc, fit. Each consumes a JSON run
// config and writes CSV tables with a commented metadata header.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kkwin/dispersion.hpp"
#include "kkwin/fitting.hpp"
#include "kkwin/ingest.hpp"
#include "kkwin/lifshitz.hpp"
#include "kkwin/models.hpp"
#include "kkwin/uncertainty.hpp"
#include "kkwin/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kkwin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitComputation = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf - 1, v);
  return std::string(buf, end);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

struct RunContext {
  fs::path config_path;
  json cfg;
  std::uint64_t config_hash = 0;
  fs::path out_dir;
  int threads = 1;
  bool timestamp = true;
  WarningLog warnings;
};

std::ofstream open_csv(const RunContext& ctx, const std::string& name,
                       const std::string& subcommand) {
  fs::create_directories(ctx.out_dir);
  const fs::path p = ctx.out_dir / name;
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write output file " + p.string());
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(ctx.config_hash));
  out << "# kkwin " << subcommand << " v" << kVersion << "\n";
  out << "# config: " << ctx.config_path.string() << " fnv1a:" << hash << "\n";
  if (ctx.timestamp) out << "# timestamp: " << iso_now() << "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Config readers
// ---------------------------------------------------------------------------

const json& need(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("config: missing '" + key + "' in " + where);
  return *it;
}

std::vector<Frequency> read_log_grid(const json& j, const std::string& where) {
  const double start = need(j, "start_ev", where).get<double>();
  const double stop = need(j, "stop_ev", where).get<double>();
  const int ppd = need(j, "points_per_decade", where).get<int>();
  return make_log_grid(Frequency{start}, Frequency{stop}, ppd);
}

DrudeParams read_extrapolation(const json& cfg) {
  if (!cfg.contains("extrapolation")) return {Frequency{0.0}, Frequency{0.0}};
  const json& j = cfg["extrapolation"];
  return {Frequency{need(j, "omega_p_ev", "extrapolation").get<double>()},
          Frequency{need(j, "gamma_ev", "extrapolation").get<double>()}};
}

WindowSpec read_window(const json& j) {
  const std::string type = need(j, "type", "window").get<std::string>();
  if (type == "identity") return IdentityWindow{};
  if (type == "sqrt")
    return SqrtWindow{Frequency{need(j, "b_ev", "sqrt window").get<double>()}};
  if (type == "old_rational") {
    OldRationalWindow w;
    w.p = j.value("p", 1);
    w.q = j.value("q", 3);
    if (j.contains("w_ev")) {
      const auto& wv = j["w_ev"];
      w.w = {wv.at(0).get<double>(), wv.at(1).get<double>()};
    }
    w.zero_rel_tol = j.value("zero_rel_tol", w.zero_rel_tol);
    return w;
  }
  throw ConfigError("config: unknown window type '" + type + "'");
}

QuadratureConfig read_quadrature(const json& cfg) {
  QuadratureConfig q;
  if (cfg.contains("quadrature")) {
    const json& j = cfg["quadrature"];
    q.rel_tol = j.value("rel_tol", q.rel_tol);
    q.subdiv_limit = j.value("subdiv_limit", q.subdiv_limit);
    q.tail_exponent = j.value("tail_exponent", q.tail_exponent);
  }
  q.validate();
  return q;
}

SyntheticSpec read_synthetic(const json& j) {
  if (j.contains("preset")) {
    SyntheticSpec spec = synthetic_preset(j["preset"].get<std::string>());
    return spec;
  }
  const json& c = need(j, "custom", "synthetic");
  SyntheticSpec spec;
  spec.name = c.value("name", "custom");
  spec.drude = {Frequency{need(c, "omega_p_ev", "custom synthetic").get<double>()},
                Frequency{need(c, "gamma_ev", "custom synthetic").get<double>()}};
  if (c.contains("oscillators"))
    for (const auto& o : c["oscillators"])
      spec.oscillators.push_back(
          {need(o, "strength", "oscillator").get<double>(),
           Frequency{need(o, "omega0_ev", "oscillator").get<double>()},
           Frequency{need(o, "width_ev", "oscillator").get<double>()}});
  return spec;
}

// Loads and merges the configured inputs (files and/or inline synthetics).
OpticalDataset load_inputs(const RunContext& ctx, WarningLog* warnings) {
  const json& cfg = ctx.cfg;
  if (!cfg.contains("inputs") || cfg["inputs"].empty())
    throw ConfigError("config: 'inputs' must list at least one dataset");
  std::vector<OpticalDataset> sets;
  for (const auto& in : cfg["inputs"]) {
    if (in.contains("path")) {
      const fs::path p = in["path"].get<std::string>();
      const FileSchema schema =
          schema_from_string(need(in, "schema", "input").get<std::string>());
      sets.push_back(load_dataset(p, schema, warnings));
    } else if (in.contains("synthetic")) {
      const json& sj = in["synthetic"];
      const SyntheticSpec spec = read_synthetic(sj);
      const auto grid = read_log_grid(need(sj, "grid", "synthetic input"),
                                      "synthetic grid");
      sets.push_back(synthetic_dataset(spec.drude, spec.oscillators, grid,
                                       spec.name.empty() ? "synthetic" : spec.name));
    } else {
      throw ConfigError("config: each input needs 'path' or 'synthetic'");
    }
  }
  std::vector<std::pair<Frequency, Frequency>> exclusions;
  if (cfg.contains("exclusions_ev"))
    for (const auto& e : cfg["exclusions_ev"])
      exclusions.emplace_back(Frequency{e.at(0).get<double>()},
                              Frequency{e.at(1).get<double>()});
  return merge_datasets(sets, exclusions, warnings);
}

std::vector<WindowSpec> read_windows(const json& cfg) {
  std::vector<WindowSpec> windows;
  if (cfg.contains("windows"))
    for (const auto& wj : cfg["windows"]) windows.push_back(read_window(wj));
  if (windows.empty())
    throw ConfigError("config: 'windows' must list at least one window");
  std::vector<std::string> tags;
  for (const auto& w : windows) tags.push_back(window_tag(w));
  std::sort(tags.begin(), tags.end());
  if (std::adjacent_find(tags.begin(), tags.end()) != tags.end())
    throw ConfigError(
        "config: two windows map to the same output tag (identity and "
        "sqrt b=0 are the same window)");
  return windows;
}

// Fail fast: referenced files must exist and no configured window may have a
// zero on the requested xi grid.
void validate_common(const RunContext& ctx, bool needs_windows) {
  const json& cfg = ctx.cfg;
  if (cfg.contains("inputs"))
    for (const auto& in : cfg["inputs"])
      if (in.contains("path")) {
        const fs::path p = in["path"].get<std::string>();
        if (!fs::exists(p))
          throw ConfigError("config: input file does not exist: " + p.string());
      }
  if (needs_windows && cfg.contains("xi_grid")) {
    const auto grid = read_log_grid(cfg["xi_grid"], "xi_grid");
    for (const auto& w : read_windows(cfg))
      for (const auto xi : grid) window_eval_imag(w, xi);  // throws near zeros
  }
}

std::vector<double> read_separations(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else {
    const double start = need(j, "start_m", "separations").get<double>();
    const double stop = need(j, "stop_m", "separations").get<double>();
    const int ppd = need(j, "points_per_decade", "separations").get<int>();
    for (const auto f : make_log_grid(Frequency{start}, Frequency{stop}, ppd))
      out.push_back(f.ev);
  }
  if (out.empty()) throw ConfigError("config: empty separation list");
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_synth(RunContext& ctx) {
  const json& j = need(ctx.cfg, "synth", "top level");
  const SyntheticSpec spec = read_synthetic(j);
  const auto grid = read_log_grid(need(j, "grid", "synth"), "synth grid");
  const fs::path out = ctx.out_dir / need(j, "out", "synth").get<std::string>();
  fs::create_directories(ctx.out_dir);
  emit_synthetic(spec, grid, out);
  std::cout << "wrote " << out.string() << " (" << grid.size() << " samples)\n";
  return kExitOk;
}

int run_epsilon(RunContext& ctx) {
  validate_common(ctx, true);
  const auto data = load_inputs(ctx, &ctx.warnings);
  const auto extrap = read_extrapolation(ctx.cfg);
  const auto quad = read_quadrature(ctx.cfg);
  const auto grid = read_log_grid(need(ctx.cfg, "xi_grid", "top level"), "xi_grid");
  const auto windows = read_windows(ctx.cfg);

  const ImagAxisResult baseline =
      kk_standard(data, extrap, grid, quad, ctx.threads);

  std::vector<ImagAxisResult> results;
  for (const auto& w : windows)
    results.push_back(kk_windowed(data, extrap, w, grid, quad, ctx.threads));

  for (const auto& res : results) {
    const std::string tag = window_tag(res.window);
    auto out = open_csv(ctx, "epsilon_" + tag + ".csv", "epsilon");
    const auto frac = cut_fraction(res);
    out << "xi_eV,eps_total,eps_cut,eps_expt,cut_fraction,error\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << fmt(grid[i].ev) << ',' << fmt(res.eps_total[i]) << ','
          << fmt(res.eps_cut[i]) << ',' << fmt(res.eps_expt[i]) << ','
          << fmt(frac.clamped[i]) << ','
          << (res.negative_flag[i] ? "negative_eps" : "") << '\n';
    }
    for (const auto& w : res.warnings) out << "# warning: " << w << '\n';
  }

  auto diff = open_csv(ctx, "epsilon_diff.csv", "epsilon");
  diff << "xi_eV";
  for (const auto& res : results)
    diff << ",diff_" << window_tag(res.window) << "_percent";
  diff << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    diff << fmt(grid[i].ev);
    for (const auto& res : results)
      diff << ','
           << fmt(100.0 * (res.eps_total[i] - baseline.eps_total[i]) /
                  baseline.eps_total[i]);
    diff << '\n';
  }
  std::cout << "epsilon: " << results.size() << " window(s), " << grid.size()
            << " xi points -> " << ctx.out_dir.string() << "\n";
  return kExitOk;
}

struct PressureVariant {
  std::string name;
  WindowSpec window;
  Prescription prescription = Prescription::kDrude;
  bool drop_cut = false;
  Frequency plasma_omega_p{0.0};
};

int run_pressure(RunContext& ctx) {
  validate_common(ctx, false);
  const json& cj = need(ctx.cfg, "casimir", "top level");
  const auto data = load_inputs(ctx, &ctx.warnings);
  const auto extrap = read_extrapolation(ctx.cfg);
  const auto quad = read_quadrature(ctx.cfg);
  const auto grid = read_log_grid(need(ctx.cfg, "xi_grid", "top level"), "xi_grid");
  const auto separations = read_separations(need(cj, "separations_m", "casimir"));

  CasimirConfig base_cfg;
  base_cfg.temperature_k = cj.value("temperature_k", 300.0);
  base_cfg.n_max_factor = cj.value("n_max_factor", 10.0);
  base_cfg.kperp_quad = quad;

  // The dispersion grid must cover every Matsubara mode of the smallest
  // separation; better to fail now than per row.
  {
    const double a_min = *std::min_element(separations.begin(), separations.end());
    const double omega_c = kHbarJs * kSpeedOfLightMs / (2.0 * a_min) / kElectronVoltJ;
    const double xi1 = matsubara_first(base_cfg.temperature_k).ev;
    const int n_max = std::max(
        1, static_cast<int>(std::floor(base_cfg.n_max_factor * omega_c / xi1)));
    const double xi_need = n_max * xi1;
    if (grid.back().ev < xi_need || grid.front().ev > xi1)
      throw ConfigError("config: xi_grid must cover [" + fmt(xi1) + ", " +
                        fmt(xi_need) + "] eV for the requested separations");
  }

  std::vector<PressureVariant> variants;
  for (const auto& vj : need(cj, "variants", "casimir")) {
    PressureVariant v;
    v.name = need(vj, "name", "variant").get<std::string>();
    v.window = vj.contains("window") ? read_window(vj["window"])
                                     : WindowSpec{IdentityWindow{}};
    const std::string pres = vj.value("prescription", "drude");
    if (pres == "drude") {
      v.prescription = Prescription::kDrude;
    } else if (pres == "generalized_plasma") {
      v.prescription = Prescription::kGeneralizedPlasma;
    } else {
      throw ConfigError("config: unknown prescription '" + pres + "'");
    }
    v.drop_cut = vj.value("drop_cut", false);
    v.plasma_omega_p =
        Frequency{vj.value("plasma_omega_p_ev", extrap.omega_p.ev)};
    variants.push_back(std::move(v));
  }
  if (variants.empty()) throw ConfigError("config: casimir.variants is empty");

  // One dispersion run per distinct window, shared across variants.
  std::map<std::string, ImagAxisResult> by_tag;
  for (const auto& v : variants) {
    const std::string tag = window_tag(v.window);
    if (!by_tag.count(tag))
      by_tag.emplace(tag,
                     kk_windowed(data, extrap, v.window, grid, quad, ctx.threads));
  }

  std::vector<std::vector<double>> pressures(variants.size());
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const auto& v = variants[vi];
    const auto& res = by_tag.at(window_tag(v.window));
    const EpsProvider provider =
        v.drop_cut ? eps_provider_drop_cut(res) : eps_provider_from_result(res);
    CasimirConfig cfg = base_cfg;
    cfg.prescription = v.prescription;
    cfg.plasma_omega_p = v.plasma_omega_p;
    for (const double a : separations) {
      cfg.separation_m = a;
      pressures[vi].push_back(pressure(provider, cfg, &ctx.warnings));
    }
  }

  auto out = open_csv(ctx, "pressure.csv", "pressure");
  out << "a_m";
  for (const auto& v : variants) out << ",P_" << v.name << "_Pa";
  for (std::size_t i = 0; i < variants.size(); ++i)
    for (std::size_t j = i + 1; j < variants.size(); ++j)
      out << ",diff_" << variants[i].name << "_vs_" << variants[j].name
          << "_percent";
  out << '\n';
  for (std::size_t s = 0; s < separations.size(); ++s) {
    out << fmt(separations[s]);
    for (std::size_t vi = 0; vi < variants.size(); ++vi)
      out << ',' << fmt(pressures[vi][s]);
    for (std::size_t i = 0; i < variants.size(); ++i)
      for (std::size_t j = i + 1; j < variants.size(); ++j)
        out << ','
            << fmt(100.0 * (pressures[i][s] - pressures[j][s]) / pressures[j][s]);
    out << '\n';
  }
  std::cout << "pressure: " << variants.size() << " variant(s), "
            << separations.size() << " separations -> " << ctx.out_dir.string()
            << "\n";
  return kExitOk;
}

int run_mc(RunContext& ctx) {
  validate_common(ctx, true);
  const json& nj = need(ctx.cfg, "noise", "top level");
  NoiseSpec noise;
  noise.delta_exp = need(nj, "delta_exp", "noise").get<double>();
  noise.n_resamples = need(nj, "n_resamples", "noise").get<int>();
  noise.seed = nj.value("seed", 0ull);
  noise.validate();

  const auto data = load_inputs(ctx, &ctx.warnings);
  const auto extrap = read_extrapolation(ctx.cfg);
  const auto quad = read_quadrature(ctx.cfg);
  const auto grid = read_log_grid(need(ctx.cfg, "xi_grid", "top level"), "xi_grid");
  const auto windows = read_windows(ctx.cfg);

  std::vector<UncertaintyResult> results;
  for (const auto& w : windows)
    results.push_back(
        mc_uncertainty(data, extrap, w, grid, noise, quad, ctx.threads));

  auto out = open_csv(ctx, "mc.csv", "mc");
  out << "xi_eV";
  for (const auto& r : results)
    out << ",delta_eps_rel_percent_" << window_tag(r.reference.window);
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << fmt(grid[i].ev);
    for (const auto& r : results) out << ',' << fmt(100.0 * r.delta_eps_rel[i]);
    out << '\n';
  }
  for (const auto& r : results) {
    const std::string tag = window_tag(r.reference.window);
    out << "# negative_eps_resamples_" << tag << ": " << r.negative_eps_resamples
        << '\n';
    out << "# clamped_draws_" << tag << ": k=" << r.resample_stats.clamped_k
        << " n=" << r.resample_stats.clamped_n << '\n';
  }
  std::cout << "mc: M=" << noise.n_resamples << ", " << windows.size()
            << " window(s) -> " << ctx.out_dir.string() << "\n";
  return kExitOk;
}

int run_fit(RunContext& ctx) {
  validate_common(ctx, false);
  const json& cfg = ctx.cfg;
  if (!cfg.contains("inputs") || cfg["inputs"].empty())
    throw ConfigError("config: 'inputs' must list at least one dataset");

  // Fit each input separately (no merging: the whole point is comparing).
  std::vector<OpticalDataset> sets;
  for (const auto& in : cfg["inputs"]) {
    if (in.contains("path"))
      sets.push_back(load_dataset(in["path"].get<std::string>(),
                                  schema_from_string(
                                      need(in, "schema", "input").get<std::string>()),
                                  &ctx.warnings));
    else if (in.contains("synthetic")) {
      const json& sj = in["synthetic"];
      const SyntheticSpec spec = read_synthetic(sj);
      sets.push_back(synthetic_dataset(spec.drude, spec.oscillators,
                                       read_log_grid(need(sj, "grid", "synthetic"),
                                                     "synthetic grid"),
                                       spec.name));
    }
  }

  const json fj = cfg.value("fit", json::object());
  const auto quad = read_quadrature(ctx.cfg);
  const auto extrap = read_extrapolation(ctx.cfg);

  auto out = open_csv(ctx, "fit.csv", "fit");
  out << "dataset,omega_p_eV,eps_inter,eps_inter_mode,residual_rms,"
         "lambda2_min_um2,lambda2_max_um2,n_points,error\n";

  for (const auto& d : sets) {
    // Default range: the IR-to-red portion, above the relaxation region.
    double lo = d.omega_min().ev, hi = std::min(1.6, d.omega_max().ev);
    if (extrap.gamma.ev > 0.0) lo = std::max(lo, 5.0 * extrap.gamma.ev);
    if (fj.contains("range_ev")) {
      lo = fj["range_ev"].at(0).get<double>();
      hi = fj["range_ev"].at(1).get<double>();
    }
    std::optional<double> eps_inter_fixed;
    std::string mode = "free";
    if (fj.contains("eps_inter")) {
      const json& ej = fj["eps_inter"];
      mode = need(ej, "mode", "fit.eps_inter").get<std::string>();
      if (mode == "fixed") {
        eps_inter_fixed = need(ej, "value", "fit.eps_inter").get<double>();
      } else if (mode == "integral") {
        const double wi = need(ej, "omega_inter_ev", "fit.eps_inter").get<double>();
        eps_inter_fixed = interband_constant(d, Frequency{wi}, quad, &ctx.warnings);
      } else if (mode != "free") {
        throw ConfigError("config: fit.eps_inter.mode must be free|fixed|integral");
      }
    }
    try {
      const PlasmaFit f = fit_plasma_frequency(d, Frequency{lo}, Frequency{hi},
                                               eps_inter_fixed, &ctx.warnings);
      out << d.label() << ',' << fmt(f.omega_p.ev) << ',' << fmt(f.eps_inter) << ','
          << mode << ',' << fmt(f.residual_rms) << ',' << fmt(f.lambda2_min_um2)
          << ',' << fmt(f.lambda2_max_um2) << ',' << f.n_points << ",\n";
    } catch (const Error& e) {
      out << d.label() << ",,,,,,,," << e.what() << '\n';
    }
  }

  if (sets.size() >= 2) {
    std::vector<Frequency> probes;
    if (fj.contains("probes_ev"))
      for (const auto& p : fj["probes_ev"]) probes.push_back(Frequency{p.get<double>()});
    const auto rep = consistency_report(sets, probes, &ctx.warnings);
    auto cons = open_csv(ctx, "consistency.csv", "fit");
    cons << "omega_eV";
    for (const auto& l : rep.labels) cons << ",eps1_" << l << ",eps2_" << l;
    for (std::size_t i = 0; i < rep.labels.size(); ++i)
      for (std::size_t j = i + 1; j < rep.labels.size(); ++j)
        cons << ",diff_" << rep.labels[i] << "_vs_" << rep.labels[j] << "_percent";
    cons << '\n';
    for (const auto& row : rep.probes) {
      cons << fmt(row.omega.ev);
      for (const auto& e : row.eps) cons << ',' << fmt(e.real()) << ',' << fmt(e.imag());
      for (const double dpc : row.pair_diff_percent) cons << ',' << fmt(dpc);
      cons << '\n';
    }
    for (std::size_t i = 0; i < rep.fits.size(); ++i)
      cons << "# omega_p_" << rep.labels[i] << ": "
           << (rep.fit_errors[i].empty() ? fmt(rep.fits[i].omega_p.ev)
                                         : "error: " + rep.fit_errors[i])
           << '\n';
    for (const auto& f : rep.flagged_pairs)
      cons << "# flagged_pair: " << rep.labels[f.i] << " vs " << rep.labels[f.j]
           << " omega_p differs by " << fmt(f.omega_p_diff_percent) << "%\n";
  }
  std::cout << "fit: " << sets.size() << " dataset(s) -> " << ctx.out_dir.string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"windowed Kramers-Kronig dispersion and Casimir pressure toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  bool no_timestamp = false;
  app.add_option("--config", config_path, "JSON run config")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker threads for xi/resample loops");
  app.add_flag("--no-timestamp", no_timestamp,
               "omit the timestamp header line (byte-stable reruns)");

  auto* synth = app.add_subcommand("synth", "emit a synthetic optical dataset");
  auto* epsilon = app.add_subcommand("epsilon", "eps(i xi) tables per window");
  auto* pres = app.add_subcommand("pressure", "Casimir pressure versus separation");
  auto* mc = app.add_subcommand("mc", "Monte Carlo error propagation");
  auto* fit = app.add_subcommand("fit", "plasma-frequency fits and consistency");

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.threads = std::max(1, threads);
  ctx.timestamp = !no_timestamp;
  ctx.config_path = config_path;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error: cannot open " << config_path << "\n";
      return kExitConfig;
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), {});
    ctx.config_hash = fnv1a(bytes);
    ctx.cfg = json::parse(bytes);
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  ctx.out_dir = !out_dir.empty()
                    ? fs::path(out_dir)
                    : fs::path(ctx.cfg.value("output_dir", std::string("out")));

  try {
    int rc = kExitOk;
    if (synth->parsed()) rc = run_synth(ctx);
    if (epsilon->parsed()) rc = run_epsilon(ctx);
    if (pres->parsed()) rc = run_pressure(ctx);
    if (mc->parsed()) rc = run_mc(ctx);
    if (fit->parsed()) rc = run_fit(ctx);
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const WindowZeroError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ComputationError& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

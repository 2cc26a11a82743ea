#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <bsv/bell_state.hpp>
#include <bsv/errors.hpp>
#include <bsv/experiment_sim.hpp>
#include <bsv/measures.hpp>
#include <bsv/truncation.hpp>
#include <bsv/version.hpp>
#include <bsv/witnesses.hpp>

namespace bsv::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNumericRefusal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

inline std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string tok = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw UsageError("bad number '" + tok + "' in " + what);
    grid.push_back(v);
  }
  if (grid.empty()) throw UsageError(what + " grid is empty");
  return grid;
}

struct Options {
  std::string state = "psi-minus";
  double gamma = 0.5;
  int cutoff = 25;
  std::string witness = "all";
  bool simulate = false;
  std::int64_t pulses = 100000;
  double eta = 1.0;
  std::int64_t bin_width = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string convention = "sqrt2-stddev";
  std::string measures_n0 = "0.1,0.2,0.5,1,2,5,10,20,50,100";
  std::string truncation_n0 = "10,100";
  std::string gamma_grid;
  bool n0_given = false;
  bool gamma_grid_given = false;
  std::string epsilon_grid = "1e-12,1e-9,1e-6,1e-4,0.001,0.01,0.02,0.05,0.1,0.2,0.3,0.5,0.7,0.9,0.99";
  std::string eta_grid = "0.05,0.1,0.15,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  bool pulse_log = false;
  std::string out;
};

/// Records, per subcommand, how to read back each bound option so the
/// resolved configuration can go into the run manifest.
class Registry {
public:
  template <class T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& desc) {
    items_[app].emplace_back(name, [&var] { return json(var); });
    return app->add_option("--" + name, var, desc)->capture_default_str();
  }
  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& desc) {
    items_[app].emplace_back(name, [&var] { return json(var); });
    return app->add_flag("--" + name, var, desc);
  }
  json resolved(CLI::App* app) const {
    json cfg = json::object();
    for (const auto& [name, get] : items_.at(app)) cfg[name] = get();
    return cfg;
  }

private:
  std::map<CLI::App*, std::vector<std::pair<std::string, std::function<json()>>>> items_;
};

/// Where a command's outputs go. Without --out the main table goes to the
/// given stream and companion files are not written.
class Outputs {
public:
  Outputs(const std::string& out, std::ostream& stdout_) : out_(out), stdout_(stdout_) {}

  bool to_files() const { return !out_.empty(); }

  std::string companion(const std::string& suffix) const {
    std::filesystem::path p(out_);
    return (p.parent_path() / p.stem()).string() + suffix;
  }

  void write_main(const std::string& text) {
    if (!to_files()) {
      stdout_ << text;
      return;
    }
    write_file(out_, text);
  }

  void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    files_.push_back(path);
  }

  const std::vector<std::string>& files() const { return files_; }

private:
  std::string out_;
  std::ostream& stdout_;
  std::vector<std::string> files_;
};

class Csv {
public:
  explicit Csv(std::vector<std::string> header) { row_strings(header); }

  template <class... Ts>
  Csv& row(const Ts&... cells) {
    std::vector<std::string> r{cell(cells)...};
    row_strings(r);
    return *this;
  }
  void row_strings(const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) s_ << (i ? "," : "") << r[i];
    s_ << '\n';
  }
  std::string str() const { return s_.str(); }

private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const char* v) { return v; }
  template <class I>
  static std::enable_if_t<std::is_integral_v<I>, std::string> cell(I v) { return std::to_string(v); }

  std::ostringstream s_;
};

inline WidthConvention convention_of(const Options& o) {
  const auto c = parse_width_convention(o.convention);
  if (!c) throw UsageError("unknown width convention '" + o.convention + "'");
  return *c;
}

inline std::vector<WitnessKind> kinds_of(const Options& o) {
  if (o.witness == "all") return {kAllWitnessKinds.begin(), kAllWitnessKinds.end()};
  const auto k = parse_witness_kind(o.witness);
  if (!k) throw UsageError("unknown witness '" + o.witness + "'");
  return {*k};
}

struct StateChoice {
  BellLabel label;
  double gamma;
  std::string name;
};

inline StateChoice state_of(const Options& o) {
  if (o.state == "vacuum") return {BellLabel::PsiMinus, 0.0, "vacuum"};
  const auto l = parse_bell_label(o.state);
  if (!l) throw UsageError("unknown state '" + o.state + "'");
  return {*l, o.gamma, o.state};
}

inline SimConfig sim_config(const Options& o, const StateChoice& s) {
  SimConfig cfg;
  cfg.label = s.label;
  cfg.gamma = s.gamma;
  cfg.pulses = o.pulses;
  cfg.eta = o.eta;
  cfg.bin_width = o.bin_width;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.convention = convention_of(o);
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

class PulseLogFile {
public:
  void add(const PulseRecord& r) {
    json j;
    j["pulse_id"] = r.pulse_id;
    j["setting"] = setting_name(r.component);
    j["counts"] = r.counts;
    s_ << j.dump() << '\n';
  }
  std::string str() const { return s_.str(); }

private:
  std::ostringstream s_;
};

inline json report_json(const WitnessReport& r) {
  json j;
  j["witness"] = std::string(to_string(r.kind));
  j["var_terms"] = r.var_terms;
  j["s0_mean"] = r.s0_mean;
  j["value"] = r.value;
  if (r.var_errors) j["var_errors"] = *r.var_errors;
  if (r.s0_error) j["s0_error"] = *r.s0_error;
  if (r.value_error) j["value_error"] = *r.value_error;
  return j;
}

inline void cmd_witness(const Options& o, Outputs& io) {
  const StateChoice s = state_of(o);
  const auto kinds = kinds_of(o);
  if (!o.simulate) {
    const FourModeState state = build_bell_state(s.label, GainParameter{s.gamma}, o.cutoff, TruncationMode::TotalPhotonCutoff);
    require_small_edge_mass(state);
    const FockState psi = expand(state);
    const StokesOperatorSet ops(psi.basis());
    Csv csv({"witness", "state", "gamma", "cutoff", "var1", "var2", "var3", "s0", "value"});
    for (WitnessKind k : kinds) {
      const auto r = evaluate_witness(k, psi, ops);
      csv.row(to_string(k), s.name, s.gamma, o.cutoff, r.var_terms[0], r.var_terms[1], r.var_terms[2], r.s0_mean, r.value);
    }
    io.write_main(csv.str());
    return;
  }

  const SimConfig cfg = sim_config(o, s);
  PulseLogFile log;
  const auto set = run_series_set(cfg, o.pulse_log ? PulseLog([&](const PulseRecord& r) { log.add(r); }) : PulseLog{});
  Csv csv({"witness", "state", "gamma", "eta", "pulses", "seed", "var1", "var1_err", "var2", "var2_err", "var3",
           "var3_err", "s0", "s0_err", "value", "value_err", "oracle"});
  json rows = json::array();
  for (WitnessKind k : kinds) {
    const auto est = estimate_witness(k, set);
    const auto& r = est.report;
    std::string oracle;
    if (matched_state(k) == s.label) oracle = fmt(matched_loss_oracle(GainParameter{s.gamma}, o.eta).value);
    csv.row(to_string(k), s.name, s.gamma, o.eta, o.pulses, o.seed, r.var_terms[0], (*r.var_errors)[0], r.var_terms[1],
            (*r.var_errors)[1], r.var_terms[2], (*r.var_errors)[2], r.s0_mean, *r.s0_error, r.value, *r.value_error,
            oracle);
    json j = report_json(r);
    j["degenerate_series"] = est.degenerate_series;
    if (!oracle.empty()) j["loss_oracle"] = matched_loss_oracle(GainParameter{s.gamma}, o.eta).value;
    rows.push_back(j);
  }
  io.write_main(csv.str());
  if (io.to_files()) {
    if (o.pulse_log) io.write_file(io.companion(".pulses.ndjson"), log.str());
    json summary{{"state", s.name}, {"gamma", s.gamma}, {"eta", o.eta}, {"pulses_per_series", o.pulses}, {"witnesses", rows}};
    io.write_file(io.companion(".summary.json"), summary.dump(2) + "\n");
  }
}

inline void cmd_measures(const Options& o, Outputs& io) {
  if (o.n0_given && o.gamma_grid_given) throw UsageError("give either --n0 or --gamma, not both");
  std::vector<double> n0;
  if (o.gamma_grid_given) {
    for (double g : parse_grid(o.gamma_grid, "gamma")) n0.push_back(GainParameter{g}.mean_photons());
  } else {
    n0 = parse_grid(o.measures_n0, "N0");
  }
  const auto conv = convention_of(o);
  Csv csv({"N0", "negativity", "kbar", "fedorov"});
  for (const auto& r : measures_scan(n0, conv)) csv.row(r.n0, r.negativity, r.kbar, r.fedorov);
  io.write_main(csv.str());
  if (io.to_files()) {
    const std::string data = std::filesystem::path(o.out).filename().string();
    std::ostringstream gp;
    gp << "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\nset xlabel 'N0'\n"
       << "plot '" << data << "' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines\n";
    json desc{{"data", data},
              {"columns", {"N0", "negativity", "kbar", "fedorov"}},
              {"x", "N0"},
              {"y", {"negativity", "kbar", "fedorov"}},
              {"logscale", {"x", "y"}},
              {"width_convention", std::string(to_string(conv))},
              {"gnuplot", gp.str()}};
    io.write_file(io.companion(".plot.json"), desc.dump(2) + "\n");
  }
}

inline void cmd_truncation(const Options& o, Outputs& io) {
  const auto n0 = parse_grid(o.truncation_n0, "N0");
  const auto eps = parse_grid(o.epsilon_grid, "epsilon");
  for (double e : eps)
    if (!(e > 0.0 && e < 1.0)) throw UsageError("epsilon values must lie in (0, 1)");
  Csv csv({"epsilon", "n0", "ratio", "n_max", "d", "epsilon_achieved", "ratio_step"});
  for (const auto& r : truncation_scan(n0, eps))
    csv.row(r.epsilon, r.n0, r.ratio, r.n_max, r.d, r.epsilon_achieved, r.ratio_step);
  io.write_main(csv.str());
  if (io.to_files()) {
    json alpha = json::array();
    for (double e : eps) alpha.push_back(alpha_from_epsilon(e));
    json meta{{"data", std::filesystem::path(o.out).filename().string()},
              {"columns", {"epsilon", "n0", "ratio", "n_max", "d", "epsilon_achieved", "ratio_step"}},
              {"n0_list", n0},
              {"epsilon_grid", eps},
              {"alpha", alpha},
              {"ratio_definition", "K^T/d interpolated in log(epsilon) between neighbouring cutoffs"}};
    io.write_file(io.companion(".meta.json"), meta.dump(2) + "\n");
  }
}

inline void cmd_crosswitness(const Options& o, Outputs& io) {
  const auto m = cross_witness_matrix(GainParameter{o.gamma}, o.cutoff);
  std::vector<std::string> header{"witness"};
  for (BellLabel l : kAllBellLabels) header.emplace_back(to_string(l));
  Csv csv(header);
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<std::string> r{std::string(to_string(kAllWitnessKinds[i]))};
    for (double v : m.values[i]) r.push_back(fmt(v));
    csv.row_strings(r);
  }
  io.write_main(csv.str());
}

inline void cmd_fedorov(const Options& o, Outputs& io) {
  const StateChoice s = state_of(o);
  const SimConfig cfg = sim_config(o, s);
  PulseLogFile log;
  const auto f = estimate_fedorov(cfg, o.pulse_log ? PulseLog([&](const PulseRecord& r) { log.add(r); }) : PulseLog{});
  const auto analytic = fedorov_ratio_analytic(GainParameter{s.gamma}, cfg.convention);
  Csv csv({"pair", "marginal_width", "conditional_width", "ratio", "analytic"});
  csv.row("aH", f.pairs[0].marginal, f.pairs[0].conditional, f.pairs[0].ratio, analytic.per_pair);
  csv.row("aV", f.pairs[1].marginal, f.pairs[1].conditional, f.pairs[1].ratio, analytic.per_pair);
  csv.row("four-mode", "", "", f.four_mode, analytic.four_mode);
  io.write_main(csv.str());
  if (io.to_files()) {
    if (o.pulse_log) io.write_file(io.companion(".pulses.ndjson"), log.str());
    json pairs = json::array();
    for (const auto& p : f.pairs)
      pairs.push_back({{"marginal_width", p.marginal}, {"conditional_width", p.conditional}, {"ratio", p.ratio},
                       {"bins_used", p.bins_used}, {"empty_bins_skipped", p.empty_bins}});
    json summary{{"state", s.name}, {"gamma", s.gamma}, {"eta", o.eta}, {"bin_width", o.bin_width},
                 {"width_convention", o.convention}, {"pairs", pairs}, {"four_mode", f.four_mode},
                 {"analytic_per_pair", analytic.per_pair}, {"analytic_four_mode", analytic.four_mode}};
    io.write_file(io.companion(".summary.json"), summary.dump(2) + "\n");
  }
}

inline void cmd_sweep(const Options& o, Outputs& io) {
  const StateChoice s = state_of(o);
  const WitnessKind kind = o.witness == "all" ? matched_witness(s.label) : kinds_of(o).front();
  const auto grid = parse_grid(o.eta_grid, "eta");
  for (double e : grid)
    if (!(e > 0.0 && e <= 1.0)) throw UsageError("efficiencies must lie in (0, 1]");
  const auto sweep = efficiency_sweep(kind, sim_config(o, s), grid);
  Csv csv({"eta", "value", "sigma", "oracle"});
  for (const auto& r : sweep.rows) csv.row(r.eta, r.value, r.sigma, r.oracle ? fmt(*r.oracle) : std::string());
  io.write_main(csv.str());
  if (io.to_files()) {
    json summary{{"witness", std::string(to_string(kind))}, {"state", s.name}, {"gamma", s.gamma}, {"pulses_per_series", o.pulses}};
    summary["inconclusive_at_or_below"] = sweep.inconclusive_at_or_below ? json(*sweep.inconclusive_at_or_below) : json();
    io.write_file(io.companion(".summary.json"), summary.dump(2) + "\n");
  }
}

struct RunManifest {
  std::string command;
  json config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;

  json to_json() const {
    return {{"command", command},
            {"config", config},
            {"seed", seed ? json(*seed) : json()},
            {"tool_version", std::string(kVersion)},
            {"outputs", outputs},
            {"wall_clock_seconds", wall_clock_seconds}};
  }
};

/// Arguments that re-run the command recorded in a manifest. Overrides
/// replace recorded values (workers, out).
inline std::vector<std::string> replay_arguments(const json& manifest, const std::map<std::string, std::string>& overrides) {
  std::vector<std::string> args{"bsvtool", manifest.at("command").get<std::string>()};
  for (const auto& [name, value] : manifest.at("config").items()) {
    if (auto it = overrides.find(name); it != overrides.end()) {
      args.push_back("--" + name + "=" + it->second);
    } else if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + name);
    } else if (value.is_string()) {
      if (!value.get<std::string>().empty()) args.push_back("--" + name + "=" + value.get<std::string>());
    } else {
      args.push_back("--" + name + "=" + value.dump());
    }
  }
  return args;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline int run_replay(const std::string& path, const std::map<std::string, std::string>& overrides, std::ostream& out,
                      std::ostream& err) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read manifest " + path);
  json manifest;
  try {
    manifest = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  return run(replay_arguments(manifest, overrides), out, err);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Four-mode bright squeezed vacuum: witnesses, entanglement measures, truncation and a virtual experiment",
               "bsvtool"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  app.set_version_flag("--version", std::string(kVersion));

  Options o;
  Registry reg;
  std::string replay_path;
  std::string replay_out;
  int replay_workers = 0;

  const auto common_state = [&](CLI::App* c) {
    reg.option(c, "state", o.state, "psi-plus, psi-minus, phi-plus, phi-minus or vacuum");
    reg.option(c, "gamma", o.gamma, "parametric gain")->check(CLI::NonNegativeNumber);
  };
  const auto common_sim = [&](CLI::App* c) {
    reg.option(c, "pulses", o.pulses, "pulses per measurement series")->check(CLI::PositiveNumber);
    reg.option(c, "eta", o.eta, "detection efficiency in (0, 1]");
    reg.option(c, "seed", o.seed, "64-bit seed");
    reg.option(c, "workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  const auto common_out = [&](CLI::App* c) {
    reg.option(c, "out", o.out, "CSV output path; companions and the run manifest are written beside it");
  };

  auto* witness = app.add_subcommand("witness", "exact or simulated witness values");
  common_state(witness);
  reg.option(witness, "cutoff", o.cutoff, "photon-number cutoff per beam (exact mode)")->check(CLI::PositiveNumber);
  reg.option(witness, "witness", o.witness, "W_S, W_T1, W_T2, W_T3 or all");
  reg.flag(witness, "simulate", o.simulate, "estimate from simulated photon counts");
  common_sim(witness);
  reg.flag(witness, "pulse-log", o.pulse_log, "write the NDJSON pulse log (with --simulate and --out)");
  common_out(witness);

  auto* measures = app.add_subcommand("measures", "negativity, Schmidt number and Fedorov ratio against N0");
  auto* measures_n0 = reg.option(measures, "n0", o.measures_n0, "comma-separated mean photon numbers");
  auto* measures_gamma = reg.option(measures, "gamma", o.gamma_grid, "comma-separated gains (alternative to --n0)");
  reg.option(measures, "convention", o.convention, "width convention: stddev or sqrt2-stddev");
  common_out(measures);

  auto* truncation = app.add_subcommand("truncation", "K^T/d against the truncation parameter epsilon");
  reg.option(truncation, "n0", o.truncation_n0, "comma-separated mean photon numbers");
  reg.option(truncation, "epsilon", o.epsilon_grid, "comma-separated epsilon values in (0, 1)");
  common_out(truncation);

  auto* cross = app.add_subcommand("crosswitness", "4x4 matrix of witness values on the four states");
  reg.option(cross, "gamma", o.gamma, "parametric gain")->check(CLI::NonNegativeNumber);
  reg.option(cross, "cutoff", o.cutoff, "photon-number cutoff per beam")->check(CLI::PositiveNumber);
  common_out(cross);

  auto* fedorov = app.add_subcommand("fedorov", "simulated Fedorov ratios");
  common_state(fedorov);
  common_sim(fedorov);
  reg.option(fedorov, "bin-width", o.bin_width, "conditioning bin width in photons")->check(CLI::PositiveNumber);
  reg.option(fedorov, "convention", o.convention, "width convention: stddev or sqrt2-stddev");
  reg.flag(fedorov, "pulse-log", o.pulse_log, "write the NDJSON pulse log (with --out)");
  common_out(fedorov);

  auto* sweep = app.add_subcommand("sweep-eta", "simulated witness against detection efficiency");
  common_state(sweep);
  reg.option(sweep, "witness", o.witness, "witness (default: the one matched to --state)");
  reg.option(sweep, "eta", o.eta_grid, "comma-separated efficiencies in (0, 1]");
  reg.option(sweep, "pulses", o.pulses, "pulses per measurement series")->check(CLI::PositiveNumber);
  reg.option(sweep, "seed", o.seed, "64-bit seed");
  reg.option(sweep, "workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  common_out(sweep);

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a run manifest");
  replay->add_option("manifest", replay_path, "manifest JSON")->required();
  replay->add_option("--workers", replay_workers, "override the recorded worker count");
  replay->add_option("--out", replay_out, "override the recorded output path");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (replay->parsed()) {
      std::map<std::string, std::string> overrides;
      if (replay_workers > 0) overrides["workers"] = std::to_string(replay_workers);
      if (!replay_out.empty()) overrides["out"] = replay_out;
      return run_replay(replay_path, overrides, out, err);
    }
    CLI::App* sub = app.get_subcommands().front();
    o.n0_given = measures_n0->count() > 0;
    o.gamma_grid_given = measures_gamma->count() > 0;
    Outputs io(o.out, out);
    const std::string name = sub->get_name();
    if (name == "witness") cmd_witness(o, io);
    else if (name == "measures") cmd_measures(o, io);
    else if (name == "truncation") cmd_truncation(o, io);
    else if (name == "crosswitness") cmd_crosswitness(o, io);
    else if (name == "fedorov") cmd_fedorov(o, io);
    else if (name == "sweep-eta") cmd_sweep(o, io);

    if (io.to_files()) {
      RunManifest m;
      m.command = name;
      m.config = reg.resolved(sub);
      if (m.config.contains("seed")) m.seed = o.seed;
      const std::string manifest_path = io.companion(".manifest.json");
      m.outputs = io.files();
      m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      std::ofstream f(manifest_path, std::ios::binary);
      f << m.to_json().dump(2) << '\n';
      if (!f) throw std::runtime_error("cannot write " + manifest_path);
    }
    return kOk;
  } catch (const TruncationError& e) {
    err << "refused: " << e.what() << '\n';
    return kNumericRefusal;
  } catch (const NumericError& e) {
    err << "refused: " << e.what() << '\n';
    return kNumericRefusal;
  } catch (const std::out_of_range& e) {
    err << "refused: " << e.what() << '\n';
    return kNumericRefusal;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace bsv::cli

// twrelay: channel generation, rate-region sweeps, oracle verification and
// asymptotic diagnostics for two-way OFDM relaying.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twrelay/asymptotics.hpp"
#include "twrelay/channel.hpp"
#include "twrelay/io.hpp"
#include "twrelay/oracle.hpp"
#include "twrelay/rate_model.hpp"
#include "twrelay/region_solver.hpp"

#ifndef TWRELAY_VERSION
#define TWRELAY_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace twr;

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kSolver = 3;
constexpr int kVerify = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::string config_path;
  int jobs = 0;
  bool quiet = false;
  SolverConfig config;
};

class Manifest {
 public:
  Manifest(std::string command, const Globals& g) : start_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["seed"] = g.seed;
    j_["tool_version"] = TWRELAY_VERSION;
    j_["parameters"] = json::object();
    j_["input_digests"] = json::object();
    j_["outputs"] = json::array();
    if (!g.config_path.empty()) add_input(g.config_path);
    j_["solver_config"] = config_to_json(g.config);
  }
  json& params() { return j_["parameters"]; }
  void add_input(const std::string& path) {
    j_["input_digests"][path] = fnv1a_hex(read_text_file(path));
  }
  void add_output(const std::string& path) { j_["outputs"].push_back(path); }
  void write(const std::string& path) {
    j_["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_json_file(path, j_);
  }

 private:
  json j_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::vector<Strategy> parse_strategies(const std::string& text) {
  if (text == "all") {
    return {Strategy::kMscDf, Strategy::kPscDf, Strategy::kAf, Strategy::kCutset};
  }
  std::vector<Strategy> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(strategy_from_string(item));
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no strategy given");
  return out;
}

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

// ---------------------------------------------------------------- gen-channel

struct GenArgs {
  int n = 16;
  int taps = 4;
  bool non_reciprocal = false;
  std::string gains;
  std::string out;
};

int cmd_gen_channel(const Globals& g, const GenArgs& a) {
  Manifest man("gen-channel", g);
  ChannelState csi;
  if (!a.gains.empty()) {
    const auto v = parse_list(a.gains);
    const std::size_t n = static_cast<std::size_t>(a.n);
    if (v.size() == 2 * n) {
      csi.g1.assign(v.begin(), v.begin() + n);
      csi.g2.assign(v.begin() + n, v.end());
      csi.gt1 = csi.g1;
      csi.gt2 = csi.g2;
    } else if (v.size() == 4 * n) {
      csi.g1.assign(v.begin(), v.begin() + n);
      csi.g2.assign(v.begin() + n, v.begin() + 2 * n);
      csi.gt1.assign(v.begin() + 2 * n, v.begin() + 3 * n);
      csi.gt2.assign(v.begin() + 3 * n, v.end());
    } else {
      throw UsageError("--gains needs 2N (reciprocal) or 4N values");
    }
    csi.validate();
  } else {
    csi = generate_rayleigh_csi(a.n, a.taps, !a.non_reciprocal, g.seed);
  }
  man.params() = {{"n", a.n},
                  {"taps", a.taps},
                  {"reciprocal", !a.non_reciprocal},
                  {"gains", a.gains}};
  write_csi_file(a.out, csi);
  man.add_output(a.out);
  man.write(a.out + ".manifest.json");
  say(g, "wrote " + a.out + " (digest " + csi_digest(csi) + ")");
  return kOk;
}

// ---------------------------------------------------------------- region

struct RegionArgs {
  std::string csi;
  std::string strategy = "all";
  std::vector<double> snr_db;
  std::string budgets;
  std::string rho;
  std::string rho_grid;
  std::string out;
  std::string fixed_alloc;
  bool normalize = false;
  bool af_refine = false;
};

PowerBudget resolve_budget(std::size_t n, const std::vector<double>& snr_db,
                           const std::string& budgets) {
  if (!budgets.empty()) {
    const auto v = parse_list(budgets);
    if (v.size() != 3) throw UsageError("--budgets needs p1,p2,pr");
    return {v[0], v[1], v[2]};
  }
  if (snr_db.empty()) return {static_cast<double>(n), static_cast<double>(n), static_cast<double>(n)};
  if (snr_db.size() > 2) throw UsageError("--snr-db takes one or two values");
  const int nn = static_cast<int>(n);
  const double p1 = budget_from_snr_db(nn, snr_db[0]);
  const double p2 = budget_from_snr_db(nn, snr_db.size() == 2 ? snr_db[1] : snr_db[0]);
  return {p1, p2, std::max(p1, p2)};
}

std::vector<double> resolve_rho(const std::string& rho, const std::string& rho_grid,
                                bool* explicit_given) {
  *explicit_given = false;
  if (!rho.empty() || !rho_grid.empty()) *explicit_given = true;
  if (!rho.empty()) return parse_list(rho);
  if (!rho_grid.empty()) {
    const auto v = parse_list(rho_grid);
    if (v.size() != 3) throw UsageError("--rho-grid needs lo,hi,count");
    return log_grid(v[0], v[1], static_cast<int>(v[2]));
  }
  return default_rho_grid();
}

ResourceAllocation parse_fixed_alloc(const std::string& spec, std::size_t n) {
  if (spec.find('=') == std::string::npos) return alloc_from_json(read_json_file(spec));
  ResourceAllocation a{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                       std::vector<double>(n, 0.0), 0.5};
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad --fixed-alloc item '" + item + "'");
    const std::string key = item.substr(0, eq);
    const double v = parse_list(item.substr(eq + 1)).at(0);
    if (key == "t") a.t = v;
    else if (key == "p") a.p1 = a.p2 = a.pr = std::vector<double>(n, v);
    else if (key == "p1") a.p1.assign(n, v);
    else if (key == "p2") a.p2.assign(n, v);
    else if (key == "pr") a.pr.assign(n, v);
    else throw UsageError("unknown --fixed-alloc key '" + key + "'");
  }
  return a;
}

json caps_json(const RegionConstraints& c) {
  json j{{"cap12", c.cap12}, {"cap21", c.cap21}};
  j["cap_sum"] = c.cap_sum ? json(*c.cap_sum) : json(nullptr);
  return j;
}

int fixed_alloc_report(const Globals& g, const RegionArgs& a, const ChannelState& csi,
                       Manifest& man) {
  const ResourceAllocation alloc = parse_fixed_alloc(a.fixed_alloc, csi.size());
  json report = json::object();
  for (Strategy s : parse_strategies(a.strategy)) {
    const RegionConstraints c = constraints_for(s, alloc, csi);
    report[std::string(to_string(s))] = caps_json(c);
    std::string line = std::string(to_string(s)) + ": cap12=" + format_number(c.cap12) +
                       " cap21=" + format_number(c.cap21);
    if (c.cap_sum) line += " cap_sum=" + format_number(*c.cap_sum);
    std::cout << line << '\n';
  }
  if (!a.out.empty()) {
    const std::string path = a.out + "_caps.json";
    write_json_file(path, report);
    man.add_output(path);
    man.write(a.out + "_manifest.json");
  }
  (void)g;
  return kOk;
}

int cmd_region(const Globals& g, const RegionArgs& a) {
  Manifest man("region", g);
  man.add_input(a.csi);
  const ChannelState csi = read_csi_file(a.csi);
  man.params() = {{"csi", a.csi},       {"strategy", a.strategy}, {"snr_db", a.snr_db},
                  {"budgets", a.budgets}, {"rho", a.rho},         {"rho_grid", a.rho_grid},
                  {"normalize", a.normalize}, {"af_refine", a.af_refine},
                  {"fixed_alloc", a.fixed_alloc}};
  if (!a.fixed_alloc.empty()) return fixed_alloc_report(g, a, csi, man);
  if (a.out.empty()) throw UsageError("--out is required for a sweep");

  const PowerBudget budget = resolve_budget(csi.size(), a.snr_db, a.budgets);
  bool explicit_rho = false;
  const std::vector<double> rhos = resolve_rho(a.rho, a.rho_grid, &explicit_rho);
  if (rhos.empty()) throw UsageError("rho grid is empty");
  const auto strategies = parse_strategies(a.strategy);
  const double scale = a.normalize ? 1.0 / static_cast<double>(csi.size()) : 1.0;

  std::vector<RegionBoundary> regions;
  bool any_failure = false;
  for (Strategy s : strategies) {
    say(g, "sweeping " + std::string(to_string(s)) + " over " + std::to_string(rhos.size()) +
               " ratios");
    RegionBoundary r;
    try {
      r = sweep_region(s, rhos, csi, budget, g.config, g.jobs, {a.af_refine, 30});
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    for (auto& p : r.points) {
      p.rate.r12 *= scale;
      p.rate.r21 *= scale;
    }
    for (const auto& f : r.failures) {
      any_failure = true;
      std::cerr << "point rho=" << format_number(f.rho) << " failed: " << f.message << '\n';
    }
    regions.push_back(std::move(r));
  }
  std::vector<const RegionBoundary*> all;
  for (const auto& r : regions) {
    const std::string base = a.out + "_" + std::string(to_string(r.strategy));
    write_text_file(base + ".csv", region_csv({&r}));
    json j = region_json(r);
    j["normalized"] = a.normalize;
    write_json_file(base + ".json", j);
    man.add_output(base + ".csv");
    man.add_output(base + ".json");
    all.push_back(&r);
  }
  if (regions.size() > 1) {
    write_text_file(a.out + "_all.csv", region_csv(all));
    man.add_output(a.out + "_all.csv");
  }
  man.params()["budget"] = {budget.p1, budget.p2, budget.pr};
  man.write(a.out + "_manifest.json");
  return any_failure ? kSolver : kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string csi;
  std::string budgets = "1,1,1";
  double rho = 1.0;
  int grid = 200;
  std::string strategy = "msc-df";
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  const ChannelState csi = read_csi_file(a.csi);
  if (csi.size() > 2) {
    std::cerr << "verify refuses channels with more than 2 subcarriers (got " << csi.size()
              << ")\n";
    return kUsage;
  }
  const auto b = parse_list(a.budgets);
  if (b.size() != 3) throw UsageError("--budgets needs p1,p2,pr");
  const PowerBudget budget{b[0], b[1], b[2]};
  const Strategy s = parse_strategies(a.strategy).at(0);
  if (s == Strategy::kAf) throw UsageError("verify covers msc-df, psc-df and cutset");

  const OracleResult oracle = grid_bruteforce_df(csi, budget, a.rho, {a.grid}, s);
  std::cout << "oracle bound=" << format_number(oracle.bound)
            << " discretization=" << format_number(oracle.error_bound)
            << " seconds=" << format_number(oracle.wall_seconds) << '\n';
  double r12;
  try {
    r12 = solve_boundary_point(s, a.rho, csi, budget, g.config).rate.r12;
  } catch (const Error& e) {
    std::cout << "solver failed: " << e.what() << "\nFAIL\n";
    return kVerify;
  }
  const double lo = oracle.bound - oracle.error_bound;
  const double hi = oracle.upper_bound + 10.0 * g.config.eps_dual;
  std::cout << "solver r12=" << format_number(r12) << " accepted=[" << format_number(lo) << ", "
            << format_number(hi) << "]\n";
  const bool pass = r12 >= lo && r12 <= hi;
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kOk : kVerify;
}

// ---------------------------------------------------------------- asymptotics

struct AsymArgs {
  std::string csi;
  double rho = 1.0;
  double x_min = 1e-3;
  double x_max = 1048576.0;
  int points = 10;
  std::string strategies = "msc-df,cutset";
  double base_snr_db = 0.0;
  std::string out;
};

int cmd_asymptotics(const Globals& g, const AsymArgs& a) {
  Manifest man("asymptotics", g);
  man.add_input(a.csi);
  man.params() = {{"csi", a.csi},         {"rho", a.rho},       {"x_min", a.x_min},
                  {"x_max", a.x_max},     {"points", a.points}, {"strategies", a.strategies},
                  {"base_snr_db", a.base_snr_db}};
  if (!(a.x_min > 0.0) || !(a.x_min < a.x_max || (a.points == 1 && a.x_min == a.x_max))) {
    throw UsageError("need 0 < x_min < x_max");
  }
  if (a.points < 1) throw UsageError("--points must be positive");
  const ChannelState csi = read_csi_file(a.csi);
  const int n = static_cast<int>(csi.size());
  const double p = budget_from_snr_db(n, a.base_snr_db);
  const PowerBudget base{p, p, p};
  const auto strategies = parse_strategies(a.strategies);
  const auto xs = log_grid(a.x_min, a.x_max, a.points);
  std::vector<double> hi, lo;
  for (double x : xs) (x > 1.0 ? hi : lo).push_back(x);

  // Wide CSV: one slope column per strategy.
  std::string slopes = "x";
  for (Strategy s : strategies) slopes += "," + std::string(to_string(s));
  slopes += '\n';
  std::vector<std::vector<SlopePoint>> cols;
  for (Strategy s : strategies) cols.push_back(empirical_slope(s, a.rho, csi, base, hi, g.config));
  for (std::size_t i = 0; i < hi.size(); ++i) {
    slopes += format_number(hi[i]);
    for (const auto& c : cols) slopes += "," + format_number(c[i].slope);
    slopes += '\n';
  }
  write_text_file(a.out + "_slopes.csv", slopes);
  man.add_output(a.out + "_slopes.csv");

  std::string low = "x,ratio,underflow\n";
  for (const auto& pt : low_snr_gap(a.rho, csi, base, lo, g.config)) {
    low += format_number(pt.x) + "," + format_number(pt.ratio) + "," +
           (pt.underflow ? "1" : "0") + "\n";
  }
  write_text_file(a.out + "_lowsnr.csv", low);
  man.add_output(a.out + "_lowsnr.csv");

  std::string verts = "strategy,r12,r21\n";
  for (Strategy s : strategies) {
    for (const auto& v : region_vertices(multiplexing_region(s, n))) {
      verts += std::string(to_string(s)) + "," + format_number(v[0]) + "," +
               format_number(v[1]) + "\n";
    }
  }
  write_text_file(a.out + "_gain_regions.csv", verts);
  man.add_output(a.out + "_gain_regions.csv");
  man.write(a.out + "_manifest.json");
  say(g, "wrote " + a.out + "_{slopes,lowsnr,gain_regions}.csv");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate regions of two-way OFDM relay channels"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--config", g.config_path, "SolverConfig JSON file");
  app.add_option("--jobs", g.jobs, "worker threads (0 = hardware concurrency)");
  app.add_flag("--quiet", g.quiet, "suppress progress output");
  app.set_version_flag("--version", TWRELAY_VERSION);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen-channel", "generate or write a CSI file");
  c_gen->add_option("--n", gen.n, "subcarriers")->capture_default_str();
  c_gen->add_option("--taps", gen.taps, "time-domain taps")->capture_default_str();
  c_gen->add_flag("--non-reciprocal", gen.non_reciprocal, "draw independent downlinks");
  c_gen->add_option("--gains", gen.gains, "explicit gains: g1..,g2.. or g1..,g2..,gt1..,gt2..");
  c_gen->add_option("--out", gen.out, "output path")->required();

  RegionArgs reg;
  auto* c_reg = app.add_subcommand("region", "sweep rate-region boundaries");
  c_reg->add_option("--csi", reg.csi, "CSI file")->required();
  c_reg->add_option("--strategy", reg.strategy, "msc-df, psc-df, af, cutset, or all")
      ->capture_default_str();
  c_reg->add_option("--snr-db", reg.snr_db, "SNR in dB (second value for node 2)")
      ->expected(1, 2);
  c_reg->add_option("--budgets", reg.budgets, "explicit budgets p1,p2,pr");
  c_reg->add_option("--rho", reg.rho, "comma-separated rate ratios");
  c_reg->add_option("--rho-grid", reg.rho_grid, "log grid lo,hi,count");
  c_reg->add_option("--out", reg.out, "output prefix");
  c_reg->add_option("--fixed-alloc", reg.fixed_alloc,
                    "evaluate caps at an allocation: p=..,t=.. or a JSON file");
  c_reg->add_flag("--normalize", reg.normalize, "divide rates by N");
  c_reg->add_flag("--af-refine", reg.af_refine, "coordinate-ascent refinement for AF");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "compare the solver with the grid oracle");
  c_ver->add_option("--csi", ver.csi, "CSI file with N <= 2")->required();
  c_ver->add_option("--budgets", ver.budgets, "p1,p2,pr")->capture_default_str();
  c_ver->add_option("--rho", ver.rho, "rate ratio")->capture_default_str();
  c_ver->add_option("--grid", ver.grid, "points per axis")->capture_default_str();
  c_ver->add_option("--strategy", ver.strategy, "msc-df, psc-df or cutset")
      ->capture_default_str();

  AsymArgs asy;
  auto* c_asy = app.add_subcommand("asymptotics", "high- and low-SNR diagnostics");
  c_asy->add_option("--csi", asy.csi, "CSI file")->required();
  c_asy->add_option("--rho", asy.rho, "rate ratio")->capture_default_str();
  c_asy->add_option("--x-min", asy.x_min, "smallest power scale")->capture_default_str();
  c_asy->add_option("--x-max", asy.x_max, "largest power scale")->capture_default_str();
  c_asy->add_option("--points", asy.points, "log-spaced scales")->capture_default_str();
  c_asy->add_option("--strategies", asy.strategies, "comma-separated strategies")
      ->capture_default_str();
  c_asy->add_option("--base-snr-db", asy.base_snr_db, "SNR at x = 1")->capture_default_str();
  c_asy->add_option("--out", asy.out, "output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!g.config_path.empty()) g.config = config_from_json(read_json_file(g.config_path));
    if (*c_gen) return cmd_gen_channel(g, gen);
    if (*c_reg) return cmd_region(g, reg);
    if (*c_ver) return cmd_verify(g, ver);
    if (*c_asy) return cmd_asymptotics(g, asy);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}

#pragma once

// Batch front-end: scenario in, boundary/hull CSVs and a JSON report out.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiretap/json_io.hpp"
#include "wiretap/metrics.hpp"
#include "wiretap/oracle.hpp"
#include "wiretap/random_instances.hpp"
#include "wiretap/region.hpp"

namespace wiretap::cli {

enum class ModeSelection { Secure, Reliable, Both };

struct RunManifest {
  std::string scenario_path;
  ModeSelection mode = ModeSelection::Both;
  /// Each entry replaces the scenario's EH demands for one run; empty means
  /// use the scenario's own demands.
  std::vector<std::vector<double>> eh_overrides;
  std::size_t grid = 21;
  bool oracle = false;
  std::size_t oracle_resolution = 51;
  std::string output_dir = ".";
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPointFailed = 2;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// File tag for a demand vector, e.g. {0.8, 0.8} -> "E0.8_0.8".
inline std::string demand_tag(const std::vector<double>& demands) {
  std::string out = "E";
  for (std::size_t k = 0; k < demands.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", demands[k]);
    if (k) out += '_';
    out += buf;
  }
  return out;
}

inline std::vector<RateMode> selected_modes(ModeSelection m) {
  switch (m) {
    case ModeSelection::Secure: return {RateMode::Secure};
    case ModeSelection::Reliable: return {RateMode::Reliable};
    case ModeSelection::Both: break;
  }
  return {RateMode::Reliable, RateMode::Secure};
}

inline const char* boundary_header() {
  return "alpha1,alpha2,Rs1,Rs2,p1,p2,eta1,eta2,order,iterations,converged";
}

inline std::string boundary_csv(const RegionBoundary& b) {
  std::string out = boundary_header();
  out += '\n';
  for (const auto& p : b.points) {
    const std::string cells[] = {
        format_double(p.alpha[0]),        format_double(p.alpha[1]),
        format_double(p.rates[0]),        format_double(p.rates[1]),
        format_double(p.point.powers[0]), format_double(p.point.powers[1]),
        format_double(p.point.splits[0]), format_double(p.point.splits[1]),
        p.order ? p.order->tag() : std::string("none"),
        std::to_string(p.iterations),     p.converged ? "1" : "0"};
    for (std::size_t i = 0; i < std::size(cells); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

inline std::string hull_csv(const RegionBoundary& b) {
  std::string out = "R1,R2\n";
  for (const auto& v : b.hull) out += format_double(v[0]) + "," + format_double(v[1]) + "\n";
  return out;
}

/// min_k rate_k / alpha_k over weighted users, rates clamped at zero.
inline double weighted_min(const std::vector<double>& alpha, const RateTuple& rates) {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] > 0.0) out = std::min(out, std::max(0.0, rates[k]) / alpha[k]);
  }
  return out;
}

inline double relative_gap(double solver, double oracle) {
  return (solver - oracle) / std::max(std::abs(oracle), 1e-12);
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
}

inline std::vector<std::vector<double>> demand_sets(const RunManifest& m, const SystemConfig& cfg) {
  if (m.eh_overrides.empty()) return {cfg.eh_demands};
  for (const auto& d : m.eh_overrides) {
    if (d.size() != cfg.num_users) {
      throw ConfigError({{ErrorCode::DimensionMismatch, "eh_demands", "override needs K entries"}});
    }
  }
  return m.eh_overrides;
}

}  // namespace detail

/// Runs every (demand set, mode) sweep and writes boundary_<mode>_<tag>.csv,
/// hull_<mode>_<tag>.csv and report.json. Returns the process exit code.
inline int run_sweep(const RunManifest& manifest, std::ostream& log, std::ostream& err) {
  SystemConfig cfg;
  std::vector<std::vector<double>> demands;
  try {
    if (manifest.grid < 2) throw ConfigError({{ErrorCode::InvalidArgument, "grid", "must be >= 2"}});
    cfg = load_config(manifest.scenario_path);
    demands = detail::demand_sets(manifest, cfg);
    for (const auto& d : demands) {
      auto c = cfg;
      c.eh_demands = d;
      validate_config(c);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }

  struct Run {
    RegionBoundary boundary;
    std::string tag;
    nlohmann::json oracle = nlohmann::json::array();
  };
  std::vector<Run> runs;
  SweepOptions options;
  options.threads = manifest.threads;
  bool any_failed = false;
  try {
    for (const auto& d : demands) {
      for (RateMode mode : selected_modes(manifest.mode)) {
        Run run{sweep(cfg, mode, d, manifest.grid, options), demand_tag(d)};
        any_failed = any_failed || !run.boundary.failures.empty();
        if (manifest.oracle) {
          for (const auto& p : run.boundary.points) {
            nlohmann::json row{{"alpha1", p.alpha[0]}, {"order", p.order ? p.order->tag() : "none"}};
            const double solver = weighted_min(p.alpha, p.rates);
            row["solver_objective"] = solver;
            try {
              const auto o = oracle_grid_search(cfg, mode, d, Weights(p.alpha),
                                                p.order.value_or(DecodingOrder::identity(2)),
                                                manifest.oracle_resolution);
              row["oracle_objective"] = o.objective;
              row["relative_gap"] = relative_gap(solver, o.objective);
            } catch (const Error& e) {
              row["oracle_error"] = to_string(e.code());
            }
            run.oracle.push_back(std::move(row));
          }
        }
        log << to_string(mode) << ' ' << run.tag << ": " << run.boundary.points.size() << " points, "
            << run.boundary.failures.size() << " failed\n";
        for (const auto& note : run.boundary.diagnostics) log << "  " << note << '\n';
        runs.push_back(std::move(run));
      }
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }

  // All writes happen after every sweep has been merged.
  try {
    const std::filesystem::path dir(manifest.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());

    nlohmann::json report;
    report["scenario"] = manifest.scenario_path;
    report["grid"] = manifest.grid;
    report["oracle"] = manifest.oracle;
    if (manifest.oracle) report["oracle_resolution"] = manifest.oracle_resolution;
    report["runs"] = nlohmann::json::array();
    for (const auto& run : runs) {
      const std::string stem = std::string(to_string(run.boundary.mode)) + "_" + run.tag;
      detail::write_file(dir / ("boundary_" + stem + ".csv"), boundary_csv(run.boundary));
      detail::write_file(dir / ("hull_" + stem + ".csv"), hull_csv(run.boundary));

      nlohmann::json r;
      r["mode"] = to_string(run.boundary.mode);
      r["tag"] = run.tag;
      r["eh_demands"] = run.boundary.eh_demands;
      r["points"] = run.boundary.points.size();
      r["diagnostics"] = run.boundary.diagnostics;
      r["failed"] = nlohmann::json::array();
      for (const auto& f : run.boundary.failures) {
        r["failed"].push_back({{"alpha1", f.alpha[0]},
                               {"order", f.order ? f.order->tag() : "none"},
                               {"error", to_string(f.code)},
                               {"message", f.message}});
      }
      if (manifest.oracle) {
        r["oracle_comparison"] = run.oracle;
        double worst = 0.0;
        for (const auto& row : run.oracle) {
          if (row.contains("relative_gap")) worst = std::max(worst, std::abs(row["relative_gap"].get<double>()));
        }
        r["max_abs_relative_gap"] = worst;
      }
      report["runs"].push_back(std::move(r));
    }
    detail::write_file(dir / "report.json", report.dump(2) + "\n");
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }
  return any_failed ? kExitPointFailed : kExitOk;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline CheckResult check_chain_rule(std::uint64_t seed, const SystemConfig& scenario) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::size_t cases = 0;
  auto run = [&](const SystemConfig& cfg, const std::vector<double>& p) {
    for (const auto& order : DecodingOrder::all(cfg.num_users)) {
      for (std::uint32_t mask = 1; mask < (1u << cfg.num_users); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t k = 0; k < cfg.num_users; ++k) {
          if (mask & (1u << k)) subset.push_back(k);
        }
        const auto chain = eve_rate_chain(cfg, p, order, subset);
        double sum = 0.0;
        for (double v : chain) sum += v;
        worst = std::max(worst, std::abs(sum - eve_sum_rate(cfg, p, subset)));
        ++cases;
      }
    }
  };
  run(scenario, scenario.power_budget);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto cfg = random_config(rng, {2 + static_cast<std::size_t>(i % 2), i % 4 < 2 ? 2u : 4u});
    std::vector<double> p;
    for (double pm : cfg.power_budget) p.push_back(pm * unit(rng));
    run(cfg, p);
  }
  return {"chain-rule conservation", worst <= 1e-9,
          std::to_string(cases) + " cases, max |sum chain - sum rate| = " + format_double(worst)};
}

inline CheckResult check_condensation(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_anchor = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 4);
    const auto posy = random_posynomial(rng, n);
    const auto anchor = random_positive_point(rng, n);
    const auto x = random_positive_point(rng, n);
    const auto mono = condense(posy, anchor);
    worst_excess = std::max(worst_excess, (mono(x) - posy(x)) / posy(x));
    worst_anchor = std::max(worst_anchor, std::abs(mono(anchor) - posy(anchor)) / posy(anchor));
  }
  return {"condensation soundness", worst_excess <= 1e-9 && worst_anchor <= 1e-9,
          "1000 cases, max relative excess " + format_double(worst_excess) + ", anchor error " +
              format_double(worst_anchor)};
}

inline void verify_battery(const RunManifest& manifest, const SystemConfig& cfg,
                           const std::vector<std::vector<double>>& demands, std::vector<CheckResult>& checks) {
  checks.push_back(detail::check_chain_rule(manifest.seed, cfg));
  checks.push_back(detail::check_condensation(manifest.seed));

  const Weights half({0.5, 0.5});
  const auto id = DecodingOrder::identity(2);
  SweepOptions options;
  options.threads = manifest.threads;

  for (const auto& d : demands) {
    const std::string tag = demand_tag(d);
    SystemConfig c = cfg;
    c.eh_demands = d;

    bool solver_feasible = true;
    bool oracle_feasible = true;
    try {
      iterate(c, half, id, RateMode::Reliable);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      solver_feasible = false;
    }
    try {
      oracle_grid_search(c, RateMode::Reliable, d, half, id, manifest.oracle_resolution);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFeasiblePoint) throw;
      oracle_feasible = false;
    }
    checks.push_back({"feasibility agreement " + tag, solver_feasible == oracle_feasible,
                      oracle_feasible ? "feasible" : "NoFeasiblePoint (solver: " +
                                                         std::string(solver_feasible ? "feasible" : "Infeasible") + ")"});
    if (!solver_feasible || !oracle_feasible) continue;

    // Secure boundary: subset constraints and exact feasibility.
    const auto secure = sweep(c, RateMode::Secure, d, manifest.grid, options);
    double worst_subset = -std::numeric_limits<double>::infinity();
    double worst_energy = 0.0;
    for (const auto& p : secure.points) {
      worst_subset = std::max(worst_subset,
                              subset_constraints_satisfied(c, p.point, p.rates, 1e-6).worst_violation);
      for (std::size_t k = 0; k < 2; ++k) {
        worst_energy = std::max(worst_energy, d[k] - harvested_energy(c, p.point, k));
      }
    }
    checks.push_back({"subset constraints " + tag, secure.failures.empty() && worst_subset <= 1e-6,
                      std::to_string(secure.points.size()) + " points, worst violation " +
                          format_double(worst_subset)});
    checks.push_back({"energy feasibility " + tag, worst_energy <= 1e-6,
                      "max EH shortfall " + format_double(worst_energy)});

    double worst_gap = 0.0;
    std::size_t compared = 0;
    for (RateMode mode : {RateMode::Reliable, RateMode::Secure}) {
      const auto orders = mode == RateMode::Secure ? DecodingOrder::all(2) : std::vector<DecodingOrder>{id};
      for (double a1 : {0.25, 0.5, 0.75}) {
        const Weights alpha({a1, 1.0 - a1});
        for (const auto& order : orders) {
          const auto rep = iterate(c, alpha, order, mode);
          const auto o = oracle_grid_search(c, mode, d, alpha, order, manifest.oracle_resolution);
          const double solver = weighted_min(alpha.values(), rep.rates);
          worst_gap = std::min(worst_gap, relative_gap(solver, o.objective));
          ++compared;
        }
      }
    }
    checks.push_back({"oracle dominance " + tag, worst_gap >= -0.05,
                      std::to_string(compared) + " solves, worst shortfall " + format_double(-worst_gap)});
  }

  {
    std::mt19937_64 rng(manifest.seed + 2);
    double worst_gap = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto rc = random_config(rng);
      const auto rep = iterate(rc, half, id, RateMode::Reliable);
      const auto o = oracle_grid_search(rc, RateMode::Reliable, rc.eh_demands, half, id, manifest.oracle_resolution);
      worst_gap = std::min(worst_gap, relative_gap(weighted_min(half.values(), rep.rates), o.objective));
    }
    checks.push_back({"oracle dominance (random)", worst_gap >= -0.05,
                      "3 configs, worst shortfall " + format_double(-worst_gap)});
  }
}

}  // namespace detail

/// Invariant battery on the scenario plus seeded random instances. Prints one
/// line per check; returns 0 iff all pass.
inline int run_verify(const RunManifest& manifest, std::ostream& log, std::ostream& err) {
  SystemConfig cfg;
  std::vector<std::vector<double>> demands;
  try {
    cfg = load_config(manifest.scenario_path);
    demands = detail::demand_sets(manifest, cfg);
    if (cfg.num_users != 2) {
      throw ConfigError({{ErrorCode::InvalidArgument, "num_users", "verify supports K = 2 scenarios"}});
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }
  if (manifest.oracle_resolution < 11) {
    err << "oracle resolution must be >= 11\n";
    return kExitConfig;
  }

  std::vector<CheckResult> checks;
  try {
    detail::verify_battery(manifest, cfg, demands, checks);
  } catch (const Error& e) {
    checks.push_back({"unexpected error", false, e.what()});
  }

  bool all = true;
  for (const auto& c : checks) {
    char line[96];
    std::snprintf(line, sizeof line, "%-34s %s  ", c.name.c_str(), c.passed ? "PASS" : "FAIL");
    log << line << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? kExitOk : kExitPointFailed;
}

}  // namespace wiretap::cli

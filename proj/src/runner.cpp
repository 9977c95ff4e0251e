#include "expanse/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "expanse/diagnostics.hpp"
#include "expanse/errors.hpp"
#include "expanse/records_io.hpp"

namespace expanse {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::min(thread_cap(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

void write_plot_script(const std::string& path, const std::string& name) {
  std::ofstream os(path);
  os << "# gnuplot script for " << name << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set terminal pngcairo size 1200,800\n"
     << "set output 'records.png'\n"
     << "set multiplot layout 2,2\n"
     << "set xlabel 's'\n"
     << "plot 'records.csv' using 1:2 with lines\n"
     << "plot 'records.csv' using 1:5 with lines\n"
     << "plot 'records.csv' using 1:8 with lines\n"
     << "set logscale y\n"
     << "plot 'records.csv' using 1:11 with lines\n"
     << "unset multiplot\n";
}

nlohmann::json manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["name"] = m.name;
  j["scenario_hash"] = m.scenario_hash;
  j["tool_version"] = m.tool_version;
  j["start_time"] = m.start_time;
  j["end_time"] = m.end_time;
  j["status"] = std::string(to_string(m.status));
  j["s_final"] = m.s_final;
  j["steps"] = m.steps;
  if (m.status == RunStatus::BlownUp) {
    j["blowup_interval"] = {m.blowup_lo, m.blowup_hi};
  } else {
    j["blowup_interval"] = nullptr;
  }
  j["theorem1"] = m.theorem1;
  j["files"] = m.files;
  return j;
}

}  // namespace

std::size_t thread_cap() {
  if (const char* env = std::getenv("EXPANSE_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void preflight(const Scenario& sc) {
  classifier::Theorem1Verdict v;
  try {
    v = classifier::theorem1_verdict(sc.spec);
  } catch (const InvalidConfig& e) {
    throw ClassifierRejection(std::string("classifier rejected the spec: ") + e.what());
  }
  if (!v.local_wellposed) throw ClassifierRejection("classifier rejected the spec: " + v.reason);
}

RunManifest run_scenario(Scenario sc, const RunOptions& opts) {
  sc.validate_for_run();
  preflight(sc);
  if (opts.seed_override) sc.initial.seed = *opts.seed_override;
  if (opts.max_steps) sc.max_steps = opts.max_steps;
  const double s_end = sc.resolved_s_end();

  RunManifest man;
  man.name = sc.name;
  std::string hashed = sc.canonical;
  if (opts.seed_override) hashed += "seed_override=" + std::to_string(*opts.seed_override) + "\n";
  if (opts.max_steps) hashed += "max_steps_override=" + std::to_string(*opts.max_steps) + "\n";
  man.scenario_hash = io::sha256_hex(hashed);
  man.start_time = utc_now();
  man.theorem1 = classifier::theorem1_verdict(sc.spec).summary();

  SolverConfig cfg;
  try {
    cfg = sc.solver_config();
    cfg.validate();
  } catch (const InvalidConfig& e) {
    throw ConfigError(e.what(), "spec");
  }
  const SplitStepSolver solver(cfg, sc.grid);
  Field u0;
  try {
    u0 = make_initial(solver.grid(), sc.initial);
  } catch (const InvalidConfig& e) {
    throw ConfigError(e.what(), "initial");
  }

  const fs::path dir = fs::path(opts.out_dir) / sc.name;
  fs::create_directories(dir);
  const fs::path snap_dir = dir / "snapshots";
  if (sc.outputs.snapshot_every > 0) fs::create_directories(snap_dir);

  DiagnosticsTracker tracker(solver, sc.outputs.K0);
  std::vector<std::string> snaps;
  auto write_snap = [&](const FieldState& st) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%06zu.bin", st.step);
    const fs::path p = snap_dir / name;
    io::SnapshotHeader h;
    h.dim = static_cast<std::uint32_t>(st.grid.dim);
    h.points = st.grid.points;
    h.length = st.grid.length;
    h.s = st.s;
    h.step = st.step;
    io::write_snapshot(p.string(), h, st.u);
    snaps.push_back(p.string());
  };
  const std::size_t every = sc.outputs.snapshot_every;
  std::size_t last_snap = static_cast<std::size_t>(-1);
  auto observer = [&](const FieldState& st) {
    tracker.observe(st);
    if (every > 0 && st.step % every == 0) {
      write_snap(st);
      last_snap = st.step;
    }
  };
  auto sum = solver.evolve(std::move(u0), s_end, observer, sc.max_steps);
  if (every > 0 && last_snap != sum.steps) {
    FieldState fin{sc.grid, sum.s_final, sum.steps, sum.final_u, sum.status, 0.0, 0.0};
    write_snap(fin);
  }

  if (sc.outputs.records) {
    const fs::path rec = dir / "records.csv";
    io::write_records(rec.string(), tracker.trajectory().records);
    man.files.push_back(rec.string());
  }
  man.files.insert(man.files.end(), snaps.begin(), snaps.end());
  if (sc.outputs.plots) {
    const fs::path gp = dir / "plot.gp";
    write_plot_script(gp.string(), sc.name);
    man.files.push_back(gp.string());
  }
  man.status = sum.status;
  man.s_final = sum.s_final;
  man.steps = sum.steps;
  man.blowup_lo = sum.blowup_lo;
  man.blowup_hi = sum.blowup_hi;
  man.end_time = utc_now();
  const fs::path mp = dir / "manifest.json";
  man.files.push_back(mp.string());
  std::ofstream(mp) << manifest_json(man).dump(2) << "\n";
  return man;
}

BatchResult run_batch(const std::vector<std::string>& paths, const RunOptions& opts) {
  BatchResult res;
  res.entries.resize(paths.size());
  std::vector<std::optional<Scenario>> scenarios(paths.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto& e = res.entries[i];
    e.path = paths[i];
    try {
      scenarios[i] = load_scenario(paths[i]);
      if (!names.insert(scenarios[i]->name).second) {
        throw ConfigError("scenario name '" + scenarios[i]->name + "' is not unique in the batch", "scenario.name");
      }
    } catch (const ConfigError& ex) {
      e.error = ex.what();
      e.exit_code = exit_code::kConfigError;
      scenarios[i].reset();
    }
  }
  parallel_for(paths.size(), [&](std::size_t i) {
    auto& e = res.entries[i];
    if (!scenarios[i]) return;
    try {
      e.manifest = run_scenario(*scenarios[i], opts);
      e.exit_code = e.manifest->status == RunStatus::BlownUp ? exit_code::kBlowUp : exit_code::kSuccess;
    } catch (const ConfigError& ex) {
      e.error = ex.what();
      e.exit_code = exit_code::kConfigError;
    } catch (const ClassifierRejection& ex) {
      e.error = ex.what();
      e.exit_code = exit_code::kClassifierRejection;
    }
  });
  auto rank = [](int code) {
    switch (code) {
      case exit_code::kConfigError: return 3;
      case exit_code::kClassifierRejection: return 2;
      case exit_code::kBlowUp: return 1;
      default: return 0;
    }
  };
  for (const auto& e : res.entries) {
    if (rank(e.exit_code) > rank(res.exit_code)) res.exit_code = e.exit_code;
  }
  return res;
}

std::string classify_scenario(const Scenario& sc, bool kv) {
  const auto report = classifier::classify(sc.spec, sc.energy_sign, sc.weighted_l2);
  return kv ? classifier::to_kv(report) : classifier::to_text(report);
}

SweepResult sweep_scenario(const Scenario& sc, const RunOptions& opts, bool write_file) {
  const auto& axes = sc.sweep.axes;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  if (total > sc.sweep.max_points) {
    throw ConfigError("sweep grid has " + std::to_string(total) + " points, above the cap of " +
                          std::to_string(sc.sweep.max_points),
                      "sweep.max_points");
  }

  std::ostringstream head;
  for (const auto& a : axes) head << a.name << ",";
  head << "local_wellposed,fired,p_crit,p1_crit,p0_crit,q_mu0,A_full,corollary1,corollary2,corollary3,corollary4";
  if (sc.sweep.simulate) head << ",status,s_final";
  head << "\n";

  std::vector<std::string> rows(total);
  parallel_for(total, [&](std::size_t idx) {
    Scenario pt = sc;
    std::vector<double> coords;
    std::size_t rem = idx;
    for (std::size_t k = axes.size(); k-- > 0;) {
      const auto& ax = axes[k];
      const double v = ax.values[rem % ax.values.size()];
      rem /= ax.values.size();
      coords.insert(coords.begin(), v);
      if (ax.name == "p") pt.spec.p = v;
      else if (ax.name == "sigma") pt.spec.background.sigma = v;
      else if (ax.name == "a1") pt.spec.background.a1 = v;
      else if (ax.name == "omega") pt.spec.omega = v;
      else if (ax.name == "lambda") pt.spec.lambda = Complex(v, pt.spec.lambda.imag());
    }
    std::ostringstream row;
    for (double c : coords) row << format_double(c) << ",";
    try {
      const auto rep = classifier::classify(pt.spec, pt.energy_sign, pt.weighted_l2);
      const auto& t = rep.thresholds;
      std::string fired;
      for (const auto& f : rep.theorem1.fired) fired += (fired.empty() ? "" : ";") + f;
      row << (rep.theorem1.local_wellposed ? "true" : "false") << "," << (fired.empty() ? "none" : fired) << ","
          << format_double(t.p_crit) << "," << (t.p1_crit ? format_double(*t.p1_crit) : "undefined") << ","
          << t.p0_crit.to_string() << "," << (t.q_mu0 ? t.q_mu0->to_string() : "undefined") << ","
          << (rep.A_full ? rep.A_full->to_string() : "undefined");
      for (const auto& c : rep.corollaries) row << "," << to_string(c.outcome);
    } catch (const std::exception&) {
      row << "invalid,none,nan,undefined,nan,undefined,undefined,invalid,invalid,invalid,invalid";
    }
    if (sc.sweep.simulate) {
      try {
        pt.validate_for_run();
        preflight(pt);
        const SplitStepSolver solver(pt.solver_config(), pt.grid);
        auto opt_steps = opts.max_steps ? opts.max_steps : pt.max_steps;
        const auto sum = solver.evolve(make_initial(solver.grid(), pt.initial), pt.resolved_s_end(), {}, opt_steps);
        row << "," << to_string(sum.status) << "," << format_double(sum.s_final);
      } catch (const std::exception&) {
        row << ",rejected,nan";
      }
    }
    row << "\n";
    rows[idx] = row.str();
  });

  SweepResult res;
  res.table = head.str();
  for (const auto& r : rows) res.table += r;
  res.rows = total;
  if (write_file) {
    const fs::path dir = fs::path(opts.out_dir) / sc.name;
    fs::create_directories(dir);
    res.path = (dir / "sweep.csv").string();
    std::ofstream(res.path, std::ios::binary) << res.table;
  }
  return res;
}

}  // namespace expanse

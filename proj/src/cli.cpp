#include "tautband/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tautband/bounds.hpp"
#include "tautband/buffer.hpp"
#include "tautband/csv.hpp"
#include "tautband/errors.hpp"
#include "tautband/montecarlo.hpp"
#include "tautband/pursuit.hpp"
#include "tautband/tautstring.hpp"

namespace tautband::cli {

using json = nlohmann::ordered_json;

namespace {

double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

// Writes to `path` when given, otherwise to `fallback`.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  write(f);
  if (!f) throw InputError("error while writing '" + path + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw InputError(flag + " is empty");
  return out;
}

json stats_json(const EnergyStats& s) {
  json j;
  j["count"] = s.count;
  j["normalized"] = s.normalized;
  j["sample_mean"] = s.sample_mean;
  j["mean_standard_error"] = s.mean_standard_error;
  j["sample_median"] = s.sample_median;
  j["sample_variance"] = s.sample_variance;
  j["second_moment"] = s.second_moment;
  j["raw_mean"] = s.raw_mean;
  j["raw_variance"] = s.raw_variance;
  j["raw_variance_standard_error"] = s.raw_variance_standard_error;
  j["raw_second_moment"] = s.raw_second_moment;
  j["raw_second_moment_standard_error"] = s.raw_second_moment_standard_error;
  json h;
  h["lo"] = s.histogram.lo;
  h["hi"] = s.histogram.hi;
  h["counts"] = s.histogram.counts;
  h["underflow"] = s.histogram.underflow;
  h["overflow"] = s.histogram.overflow;
  j["histogram"] = h;
  return j;
}

void write_histogram_csv(std::ostream& o, const Histogram& h) {
  o << "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < h.bins(); ++k) {
    o << csv::format_number(h.edge(k)) << ',' << csv::format_number(h.edge(k + 1)) << ',' << h.counts[k] << '\n';
  }
}

// Shared run context: manifest bookkeeping, threads and progress.
struct Context {
  std::vector<std::string> argv;
  std::string subcommand;
  json config;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool quiet = false;
  std::string manifest_path;
  std::ostream* err = nullptr;

  json embedded_manifest() const {
    json m;
    m["tool"] = "tautband";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["seed"] = seed;
    m["config"] = config;
    return m;
  }

  Execution execution() const {
    Execution exec;
    exec.threads = threads;
    if (!quiet) {
      auto last = std::make_shared<std::chrono::steady_clock::time_point>();
      std::ostream* e = err;
      exec.progress = [last, e](std::size_t done, std::size_t total) {
        const auto now = std::chrono::steady_clock::now();
        if (done == total || now - *last > std::chrono::milliseconds(500)) {
          *last = now;
          *e << "\r[tautband] " << done << "/" << total << " paths" << (done == total ? "\n" : "") << std::flush;
        }
      };
    }
    return exec;
  }
};

void write_manifest(const Context& ctx, double wall_seconds) {
  if (ctx.manifest_path.empty()) return;
  json m = ctx.embedded_manifest();
  m["argv"] = ctx.argv;
  m["threads"] = ctx.threads;
  m["wall_time_seconds"] = wall_seconds;
  emit(ctx.manifest_path, *ctx.err, [&](std::ostream& o) { o << m.dump(2) << '\n'; });
}

std::vector<std::string> manifest_argv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open manifest '" + path + "'");
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw InputError("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw InputError("manifest '" + path + "' has no argv");
  std::vector<std::string> argv;
  for (const auto& a : m["argv"]) argv.push_back(a.get<std::string>());
  return argv;
}

std::size_t default_threads() {
  if (const char* env = std::getenv("TAUTBAND_THREADS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw InputError("TAUTBAND_THREADS must be a nonnegative integer");
    }
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taut strings around Wiener paths, Markovian pursuit, bounds and buffer schedules", "tautband"};
  app.require_subcommand(0, 1);

  Context ctx;
  ctx.argv = args;
  ctx.err = &err;
  std::string from_manifest;
  app.add_option("--from-manifest", from_manifest, "Rerun the invocation recorded in a manifest file");
  app.set_version_flag("--version", kVersion);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", ctx.threads, "Worker threads (0 = all cores; default $TAUTBAND_THREADS)");
    sub->add_flag("--quiet", ctx.quiet, "No progress output on stderr");
    sub->add_option("--manifest", ctx.manifest_path, "Write the run manifest (config, seed, version, wall time)");
  };

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Taut string through a tube read from CSV (t,lower,upper)");
  std::string tube_path, end_mode = "fixed", solve_out, solve_summary;
  double start = 0.0;
  std::optional<double> end_value, end_lo, end_hi;
  solve_cmd->add_option("--tube", tube_path, "Tube CSV with header t,lower,upper")->required();
  solve_cmd->add_option("--end", end_mode, "fixed | free")->check(CLI::IsMember({"fixed", "free"}));
  solve_cmd->add_option("--start", start, "Start value h(0)");
  solve_cmd->add_option("--end-value", end_value, "End value h(T) (fixed end)");
  solve_cmd->add_option("--end-lo", end_lo, "Lower end limit (free end; default last lower bound)");
  solve_cmd->add_option("--end-hi", end_hi, "Upper end limit (free end; default last upper bound)");
  solve_cmd->add_option("--out", solve_out, "Result CSV t,value,contact (default stdout)");
  solve_cmd->add_option("--summary", solve_summary, "Summary JSON with the energy");
  add_common(solve_cmd);

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of the taut-string or pursuit constant");
  std::string est_mode = "taut-fixed", est_out, est_hist, est_per_path;
  double est_t = 1000.0, est_spu = 1000.0, est_r = 1.0, est_clamp = 0.99;
  std::size_t est_paths = 3000, est_bins = 50;
  std::uint64_t est_seed = 0;
  est_cmd->add_option("--mode", est_mode, "taut-fixed | taut-free | pursuit");
  est_cmd->add_option("--t", est_t, "Horizon T");
  est_cmd->add_option("--steps-per-unit", est_spu, "Grid steps per unit time");
  est_cmd->add_option("--r", est_r, "Tube radius");
  est_cmd->add_option("--paths", est_paths, "Number of Wiener paths");
  est_cmd->add_option("--seed", est_seed, "Master seed");
  est_cmd->add_option("--bins", est_bins, "Histogram bins");
  est_cmd->add_option("--clamp", est_clamp, "Pursuit projection half-width");
  est_cmd->add_option("--out", est_out, "stats JSON (default stdout)");
  est_cmd->add_option("--hist", est_hist, "Histogram CSV bin_lo,bin_hi,count");
  est_cmd->add_option("--per-path", est_per_path, "Per-path CSV path,value,raw");
  add_common(est_cmd);

  // pursuit
  auto* pur_cmd = app.add_subcommand("pursuit", "Markovian pursuit with the optimal speed law");
  double pur_t = 1000.0, pur_clamp = 0.99;
  std::size_t pur_steps = 1'000'000, pur_paths = 100, pur_bins = 50;
  std::uint64_t pur_seed = 0;
  std::string pur_out, pur_hist;
  pur_cmd->add_option("--t", pur_t, "Horizon T");
  pur_cmd->add_option("--steps", pur_steps, "Grid steps N");
  pur_cmd->add_option("--paths", pur_paths, "Number of Wiener paths");
  pur_cmd->add_option("--clamp", pur_clamp, "Projection half-width (default 0.99)");
  pur_cmd->add_option("--seed", pur_seed, "Master seed");
  pur_cmd->add_option("--bins", pur_bins, "Occupancy bins on [-1, 1]");
  pur_cmd->add_option("--out", pur_out, "stats JSON (default stdout)");
  pur_cmd->add_option("--hist", pur_hist, "Occupancy CSV bin_lo,bin_hi,count,frequency,stationary_mass");
  add_common(pur_cmd);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Upper and lower bounds on the taut-string constant");
  std::string bounds_out;
  bounds_cmd->add_option("--out", bounds_out, "Report JSON (default stdout)");
  add_common(bounds_cmd);

  // buffer
  auto* buf_cmd = app.add_subcommand("buffer", "Loss schedule for a buffered channel (trace CSV slot,S,C)");
  std::string trace_path, phi_spec = "quad", buf_out, buf_summary;
  double buffer_size = 0.0;
  bool compare_fifo = false;
  buf_cmd->add_option("--trace", trace_path, "Trace CSV with header slot,S,C")->required();
  buf_cmd->add_option("--buffer", buffer_size, "Buffer size B")->required();
  buf_cmd->add_option("--phi", phi_spec, "quad | exp | hinge | poly:a0,a1,...");
  buf_cmd->add_option("--out", buf_out, "Schedule CSV slot,S,C,L_opt,L_fifo,B_opt,B_fifo (default stdout)");
  buf_cmd->add_option("--summary", buf_summary, "Summary JSON with penalty values (default stderr)");
  buf_cmd->add_flag("--compare-fifo", compare_fifo, "Report the FIFO penalty and the gain");
  add_common(buf_cmd);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Convergence, scaling and free-knot experiments");
  std::string sweep_kind = "convergence", sweep_out, t_list = "125,250,500,1000", eps_list = "0.05,0.025";
  std::string sweep_mode = "taut-fixed";
  double sw_spu = 100.0, sw_r = 1.0, sw_t = 400.0, sw_lambda = 2.0;
  std::size_t sw_paths = 300, sw_steps = 1'000'000;
  std::uint64_t sw_seed = 0;
  sweep_cmd->add_option("--kind", sweep_kind, "convergence | scaling | free-knot")
      ->check(CLI::IsMember({"convergence", "scaling", "free-knot"}));
  sweep_cmd->add_option("--mode", sweep_mode, "taut-fixed | taut-free (| pursuit for convergence)");
  sweep_cmd->add_option("--t-list", t_list, "Comma-separated increasing horizons (convergence)");
  sweep_cmd->add_option("--t", sw_t, "Horizon (scaling)");
  sweep_cmd->add_option("--steps-per-unit", sw_spu, "Grid steps per unit time");
  sweep_cmd->add_option("--r", sw_r, "Tube radius");
  sweep_cmd->add_option("--lambda", sw_lambda, "Scaling factor (scaling)");
  sweep_cmd->add_option("--eps-list", eps_list, "Comma-separated eps values (free-knot)");
  sweep_cmd->add_option("--steps", sw_steps, "Steps on [0, 1] (free-knot)");
  sweep_cmd->add_option("--paths", sw_paths, "Number of paths");
  sweep_cmd->add_option("--seed", sw_seed, "Master seed");
  sweep_cmd->add_option("--out", sweep_out, "Result JSON (default stdout)");
  add_common(sweep_cmd);

  try {
    ctx.threads = default_threads();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "tautband: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "tautband: " << e.what() << '\n';
    return kInputError;
  }

  if (!from_manifest.empty()) {
    if (app.get_subcommands().size() > 0) {
      err << "tautband: --from-manifest cannot be combined with a subcommand\n";
      return kInputError;
    }
    try {
      return dispatch(manifest_argv(from_manifest), out, err);
    } catch (const InputError& e) {
      err << "tautband: " << e.what() << '\n';
      return kInputError;
    }
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (solve_cmd->parsed()) {
      ctx.subcommand = "solve";
      ctx.config = {{"tube", tube_path}, {"end", end_mode}, {"start", start}};
      const auto table = csv::read_file(tube_path, {"t", "lower", "upper"});
      EndConstraint end;
      if (end_mode == "fixed") {
        if (!end_value) throw InputError("--end fixed needs --end-value");
        end = FixedAt{*end_value};
        ctx.config["end_value"] = *end_value;
      } else {
        const double lo = end_lo.value_or(table.columns[1].back());
        const double hi = end_hi.value_or(table.columns[2].back());
        end = Interval{lo, hi};
        ctx.config["end_lo"] = lo;
        ctx.config["end_hi"] = hi;
      }
      const Tube tube(TimeGrid(table.columns[0]), table.columns[1], table.columns[2], start, end);
      const TautStringResult r = solve(tube);
      emit(solve_out, out, [&](std::ostream& o) {
        o << "t,value,contact\n";
        for (std::size_t i = 0; i < r.path.size(); ++i) {
          const char* c = r.contact[i] == Contact::upper ? "upper" : r.contact[i] == Contact::lower ? "lower" : "interior";
          o << csv::format_number(r.path.grid()[i]) << ',' << csv::format_number(r.path[i]) << ',' << c << '\n';
        }
      });
      if (!solve_summary.empty()) {
        json s;
        s["manifest"] = ctx.embedded_manifest();
        s["energy"] = r.energy_value;
        s["sqrt_energy"] = std::sqrt(r.energy_value);
        s["variation"] = variation(r.path);
        emit(solve_summary, out, [&](std::ostream& o) { o << s.dump(2) << '\n'; });
      }
    } else if (est_cmd->parsed()) {
      ctx.subcommand = "estimate";
      ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(est_t, est_spu);
      cfg.radius = est_r;
      cfg.paths = est_paths;
      cfg.master_seed = Seed{est_seed};
      cfg.mode = parse_mode(est_mode);
      cfg.bins = est_bins;
      cfg.clamp = est_clamp;
      ctx.seed = est_seed;
      ctx.config = {{"mode", to_string(cfg.mode)}, {"t", cfg.horizon}, {"steps_per_unit", est_spu},
                    {"steps", cfg.steps},          {"r", cfg.radius},   {"paths", cfg.paths},
                    {"seed", est_seed},            {"bins", cfg.bins},  {"clamp", cfg.clamp}};
      const ExperimentResult res = run_experiment(cfg, ctx.execution());
      json j;
      j["manifest"] = ctx.embedded_manifest();
      j["stats"] = stats_json(res.stats);
      if (cfg.mode == Mode::pursuit) {
        j["occupancy_l1_distance"] = occupancy_l1_distance(res.occupancy);
        j["clamp_hits"] = res.clamp_hits;
      }
      emit(est_out, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
      if (!est_hist.empty()) emit(est_hist, out, [&](std::ostream& o) { write_histogram_csv(o, res.stats.histogram); });
      if (!est_per_path.empty()) {
        emit(est_per_path, out, [&](std::ostream& o) {
          o << "path,value,raw\n";
          for (std::size_t i = 0; i < res.per_path.size(); ++i) {
            o << i << ',' << csv::format_number(res.per_path[i]) << ',' << csv::format_number(res.raw_per_path[i])
              << '\n';
          }
        });
      }
    } else if (pur_cmd->parsed()) {
      ctx.subcommand = "pursuit";
      ExperimentConfig cfg;
      cfg.horizon = pur_t;
      cfg.steps = pur_steps;
      cfg.paths = pur_paths;
      cfg.clamp = pur_clamp;
      cfg.master_seed = Seed{pur_seed};
      cfg.mode = Mode::pursuit;
      cfg.bins = pur_bins;
      ctx.seed = pur_seed;
      ctx.config = {{"t", pur_t},       {"steps", pur_steps}, {"paths", pur_paths},
                    {"clamp", pur_clamp}, {"seed", pur_seed},   {"bins", pur_bins}};
      const ExperimentResult res = run_experiment(cfg, ctx.execution());
      const auto mass = stationary_bin_masses(res.occupancy);
      const double total = static_cast<double>(res.occupancy.total());
      json j;
      j["manifest"] = ctx.embedded_manifest();
      j["stats"] = stats_json(res.stats);
      j["mean_energy_rate"] = [&] {
        double s = 0.0;
        for (double v : res.per_path) s += v * v;
        return s / static_cast<double>(res.per_path.size());
      }();
      j["theory_sqrt_rate"] = std::numbers::pi / 2.0;
      j["occupancy_l1_distance"] = occupancy_l1_distance(res.occupancy);
      j["clamp_hits"] = res.clamp_hits;
      const std::size_t last = res.occupancy.bins() - 1;
      j["edge_bins"] = {{"left_frequency", static_cast<double>(res.occupancy.counts[0]) / total},
                        {"left_stationary_mass", mass[0]},
                        {"right_frequency", static_cast<double>(res.occupancy.counts[last]) / total},
                        {"right_stationary_mass", mass[last]}};
      emit(pur_out, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
      if (!pur_hist.empty()) {
        emit(pur_hist, out, [&](std::ostream& o) {
          o << "bin_lo,bin_hi,count,frequency,stationary_mass\n";
          for (std::size_t k = 0; k < res.occupancy.bins(); ++k) {
            o << csv::format_number(res.occupancy.edge(k)) << ',' << csv::format_number(res.occupancy.edge(k + 1))
              << ',' << res.occupancy.counts[k] << ','
              << csv::format_number(static_cast<double>(res.occupancy.counts[k]) / total) << ','
              << csv::format_number(mass[k]) << '\n';
          }
        });
      }
    } else if (bounds_cmd->parsed()) {
      ctx.subcommand = "bounds";
      ctx.config = json::object();
      const BoundReport b = bound_report();
      json j;
      j["manifest"] = ctx.embedded_manifest();
      j["isoperimetric_upper"] = round_sig(b.isoperimetric_upper, 12);
      j["free_knot_upper"] = round_sig(b.free_knot_upper, 12);
      j["oscillation_lower"] = round_sig(b.oscillation_lower, 12);
      j["e1"] = round_sig(b.e1, 12);
      j["e2"] = round_sig(b.e2, 12);
      j["best_x"] = round_sig(b.best_x, 12);
      j["osc_objective_at_best_x"] = round_sig(b.osc_objective_at_best_x, 12);
      emit(bounds_out, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    } else if (buf_cmd->parsed()) {
      ctx.subcommand = "buffer";
      ctx.config = {{"trace", trace_path}, {"buffer", buffer_size}, {"phi", phi_spec}, {"compare_fifo", compare_fifo}};
      const auto table = csv::read_file(trace_path, {"slot", "S", "C"});
      const TrafficTrace trace{table.columns[1], table.columns[2]};
      const PenaltyFunction phi = PenaltyFunction::parse(phi_spec);
      const LossSchedule opt = optimal_losses(trace, buffer_size, phi);
      const LossSchedule fifo = fifo_losses(trace, buffer_size);
      emit(buf_out, out, [&](std::ostream& o) {
        o << "slot,S,C,L_opt,L_fifo,B_opt,B_fifo\n";
        for (std::size_t j = 0; j < trace.size(); ++j) {
          o << csv::format_number(table.columns[0][j]) << ',' << csv::format_number(trace.inflow[j]) << ','
            << csv::format_number(trace.capacity[j]) << ',' << csv::format_number(opt.losses[j]) << ','
            << csv::format_number(fifo.losses[j]) << ',' << csv::format_number(opt.buffer_levels[j]) << ','
            << csv::format_number(fifo.buffer_levels[j]) << '\n';
        }
      });
      json s;
      s["manifest"] = ctx.embedded_manifest();
      s["penalty"] = phi.name();
      s["F_opt"] = penalty(opt, trace, phi);
      s["total_loss_opt"] = opt.total_loss;
      s["endpoint_rule"] = "terminal loss minimizes F over the final band interval";
      s["used_lattice_fallback"] = opt.used_fallback;
      if (compare_fifo) {
        const double ff = penalty(fifo, trace, phi);
        s["F_fifo"] = ff;
        s["total_loss_fifo"] = fifo.total_loss;
        s["F_gain"] = ff - s["F_opt"].get<double>();
      }
      emit(buf_summary, err, [&](std::ostream& o) { o << s.dump(2) << '\n'; });
    } else if (sweep_cmd->parsed()) {
      ctx.subcommand = "sweep";
      ctx.seed = sw_seed;
      json j;
      if (sweep_kind == "convergence") {
        ExperimentConfig base;
        base.radius = sw_r;
        base.paths = sw_paths;
        base.master_seed = Seed{sw_seed};
        base.mode = parse_mode(sweep_mode);
        const auto horizons = parse_list(t_list, "--t-list");
        ctx.config = {{"kind", sweep_kind}, {"mode", to_string(base.mode)}, {"t_list", horizons},
                      {"steps_per_unit", sw_spu}, {"r", sw_r}, {"paths", sw_paths}, {"seed", sw_seed}};
        j["manifest"] = ctx.embedded_manifest();
        const auto points = convergence_sweep(base, horizons, sw_spu, ctx.execution());
        json rows = json::array();
        for (const auto& p : points) {
          json row;
          row["t"] = p.horizon;
          row["stats"] = stats_json(p.stats);
          rows.push_back(row);
        }
        j["points"] = rows;
        json diffs = json::array();
        for (std::size_t k = 1; k < points.size(); ++k) {
          diffs.push_back(std::abs(points[k].stats.sample_mean - points[k - 1].stats.sample_mean));
        }
        j["successive_mean_differences"] = diffs;
      } else if (sweep_kind == "scaling") {
        ExperimentConfig cfg = ExperimentConfig::with_steps_per_unit(sw_t, sw_spu);
        cfg.radius = sw_r;
        cfg.paths = sw_paths;
        cfg.master_seed = Seed{sw_seed};
        cfg.mode = parse_mode(sweep_mode);
        ctx.config = {{"kind", sweep_kind}, {"mode", to_string(cfg.mode)}, {"t", sw_t}, {"steps_per_unit", sw_spu},
                      {"r", sw_r},          {"lambda", sw_lambda},          {"paths", sw_paths}, {"seed", sw_seed}};
        j["manifest"] = ctx.embedded_manifest();
        const ScalingReport rep = scaling_check(cfg, sw_lambda, ctx.execution());
        j["paths"] = rep.paths;
        j["max_rel_dev_unit"] = rep.max_rel_dev_unit;
        j["max_rel_dev_lambda"] = rep.max_rel_dev_lambda;
      } else {
        const auto eps = parse_list(eps_list, "--eps-list");
        ctx.config = {{"kind", sweep_kind}, {"eps_list", eps}, {"steps", sw_steps}, {"paths", sw_paths},
                      {"seed", sw_seed}};
        j["manifest"] = ctx.embedded_manifest();
        const auto points = free_knot_estimate(eps, sw_paths, sw_steps, Seed{sw_seed}, ctx.execution());
        json rows = json::array();
        for (const auto& p : points) {
          if (p.coarse_grid) {
            err << "tautband: warning: grid too coarse for eps = " << p.eps
                << " (fewer than 100 steps per expected crossing time)\n";
          }
          rows.push_back({{"eps", p.eps},
                          {"mean", p.mean},
                          {"standard_error", p.standard_error},
                          {"knots_times_eps_squared", p.knots_scaled},
                          {"max_sup_excess", p.max_sup_excess},
                          {"coarse_grid", p.coarse_grid}});
        }
        j["points"] = rows;
        j["free_knot_upper"] = free_knot_upper();
      }
      emit(sweep_out, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }
  } catch (const InputError& e) {
    err << "tautband " << ctx.subcommand << ": " << e.what() << '\n';
    return kInputError;
  } catch (const InvariantError& e) {
    err << "tautband " << ctx.subcommand << ": internal invariant failed: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "tautband " << ctx.subcommand << ": " << e.what() << '\n';
    return kInternalError;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_manifest(ctx, wall);
  } catch (const InputError& e) {
    err << "tautband: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace tautband::cli

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wiremask/bookshelf.hpp"
#include "wiremask/cli.hpp"
#include "wiremask/grid.hpp"
#include "wiremask/metrics.hpp"
#include "wiremask/refine.hpp"
#include "wiremask/svg.hpp"

namespace wiremask::cli {

namespace fs = std::filesystem;

std::string RunConfig::canonical() const {
  std::ostringstream s;
  s << "aux=" << benchmark_aux.filename().string()
    << ";partitions=" << (partitions ? std::to_string(*partitions) : "default")
    << ";optimizer=" << (optimizer == OptimizerKind::kRandomSearch ? "rs" : "ea")
    << ";mutation=" << to_string(mutation.kind) << ";ordering=" << to_string(ordering)
    << ";seed=" << seed << ";max_evals="
    << (budget.max_evaluations ? std::to_string(*budget.max_evaluations) : "-")
    << ";max_seconds="
    << (budget.max_wall_seconds ? format_coordinate(*budget.max_wall_seconds) : "-")
    << ";post_ls=" << post_ls << ";init_samples=" << init_samples
    << ";include_fixed_pins=" << include_fixed_pins << ";exact_overlap=" << exact_overlap;
  return s.str();
}

namespace {

/// Parsed benchmark plus everything needed to evaluate genotypes on it.
struct Session {
  Netlist netlist;
  std::optional<GridSpec> grid;
  MacroOrder order;
  std::optional<Evaluator> evaluator;
};

std::unique_ptr<Session> open_session(const RunConfig& c) {
  auto s = std::make_unique<Session>(
      Session{parse_aux(c.benchmark_aux, {c.include_fixed_pins}), std::nullopt, {}, std::nullopt});
  s->grid.emplace(c.partitions ? *c.partitions : default_partitions(s->netlist), s->netlist);
  Rng ordering_rng = make_stream(c.seed, "ordering");
  s->order = order_macros(s->netlist, c.ordering, ordering_rng);
  EvaluatorOptions opts;
  opts.overlap = c.exact_overlap ? OverlapMode::kExact : OverlapMode::kConservative;
  s->evaluator.emplace(s->netlist, *s->grid, s->order, opts);
  return s;
}

Placement refine(const Session& s, const RunConfig& c, const Placement& p) {
  LocalSearchConfig ls;
  ls.order = s.order;
  ls.rng = make_stream(c.seed, "tie-break");
  ls.overlap = c.exact_overlap ? OverlapMode::kExact : OverlapMode::kConservative;
  return local_search(p, s.netlist, *s.grid, ls);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

/// runlog.jsonl always; result.pl, metrics.json and layout.svg when feasible.
bool write_artifacts(const RunConfig& c, const Session& s, const RunLog& log,
                     const Placement& final_placement, double eval_seconds, std::ostream& out) {
  fs::create_directories(c.output_dir);
  {
    std::ofstream runlog(c.output_dir / "runlog.jsonl");
    if (!runlog) throw std::runtime_error("cannot write " + (c.output_dir / "runlog.jsonl").string());
    write_runlog(runlog, log, c.canonical());
  }
  if (!final_placement.feasible) return false;
  write_placement(final_placement, s.netlist, c.output_dir / "result.pl");
  const MetricRecord metrics = report(final_placement, s.netlist, *s.grid, eval_seconds);
  write_json(c.output_dir / "metrics.json", to_json(metrics));
  SvgOptions svg;
  if (c.svg_grid) svg.grid_partitions = s.grid->m();
  write_svg(c.output_dir / "layout.svg", final_placement.positions, s.netlist, svg);
  out << to_json(metrics).dump() << '\n';
  return true;
}

RunOptions run_options(const RunConfig& c) {
  RunOptions o;
  o.budget = c.budget;
  o.seed = c.seed;
  o.parallel_width = c.parallel_evals;
  o.record_time = c.wall_time_in_log;
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int cmd_place(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto s = open_session(c);
  std::unique_ptr<Optimizer> opt;
  if (c.optimizer == OptimizerKind::kRandomSearch) {
    opt = std::make_unique<RandomSearch>(s->netlist, c.seed);
  } else {
    if (c.budget.max_evaluations && *c.budget.max_evaluations < c.init_samples) {
      err << "error: evaluation budget is smaller than --init-samples\n";
      return kUsage;
    }
    opt = std::make_unique<OnePlusOneEA>(s->netlist, c.seed, c.mutation, c.init_samples);
  }
  const auto t0 = std::chrono::steady_clock::now();
  RunLog log = run(*opt, *s->evaluator, run_options(c));
  const double per_eval = seconds_since(t0) / static_cast<double>(std::max<std::uint64_t>(1, log.evaluations));

  Placement best = log.best;
  if (best.feasible && c.post_ls) best = refine(*s, c, best);
  if (!write_artifacts(c, *s, log, best, per_eval, out)) {
    err << "error: no feasible placement found; try more partitions\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_finetune(const RunConfig& c, const fs::path& pl, std::ostream& out, std::ostream& err) {
  const auto s = open_session(c);
  const PlacementRead initial = read_placement(pl, s->netlist);
  if (initial.clamped) err << "warning: clamped " << initial.clamped << " macro(s) onto the canvas\n";

  OnePlusOneEA ea(s->netlist, c.seed, c.mutation, initial.genotype);
  const auto t0 = std::chrono::steady_clock::now();
  RunLog log = run(ea, *s->evaluator, run_options(c));
  const double per_eval = seconds_since(t0) / static_cast<double>(std::max<std::uint64_t>(1, log.evaluations));

  Placement best = log.best;
  if (best.feasible && c.post_ls) best = refine(*s, c, best);
  if (!write_artifacts(c, *s, log, best, per_eval, out)) {
    err << "error: no feasible placement found; try more partitions\n";
    return kInfeasible;
  }
  const Placement start = s->evaluator->evaluate(initial.genotype);
  const double before = start.feasible ? start.hpwl : std::numeric_limits<double>::infinity();
  const double after = best.hpwl;
  nlohmann::json imp{{"before", before}, {"after", after}};
  imp["ratio"] = std::isfinite(before) && before > 0.0 ? (before - after) / before : 0.0;
  if (!std::isfinite(before)) imp["before"] = nullptr;
  write_json(c.output_dir / "improvement.json", imp);
  return kOk;
}

int cmd_evaluate(const RunConfig& c, const fs::path& pl, std::ostream& out, std::ostream& err) {
  const auto s = open_session(c);
  const PlacementRead in = read_placement(pl, s->netlist);
  if (in.clamped) err << "warning: clamped " << in.clamped << " macro(s) onto the canvas\n";
  const auto t0 = std::chrono::steady_clock::now();
  const Placement p = s->evaluator->evaluate(in.genotype);
  const double seconds = seconds_since(t0);
  if (!p.feasible) {
    out << nlohmann::json{{"feasible", false}, {"eval_seconds", seconds}}.dump() << '\n';
    err << "error: greedy mapping found no legal anchor for some macro\n";
    return kInfeasible;
  }
  out << to_json(report(p, s->netlist, *s->grid, seconds)).dump() << '\n';
  return kOk;
}

int cmd_localsearch(const RunConfig& c, const fs::path& pl, int passes,
                    const std::optional<fs::path>& out_pl, std::ostream& out, std::ostream& err) {
  const auto s = open_session(c);
  const PlacementRead in = read_placement(pl, s->netlist);
  if (in.clamped) err << "warning: clamped " << in.clamped << " macro(s) onto the canvas\n";
  const Placement start = s->evaluator->evaluate(in.genotype);
  if (!start.feasible) {
    err << "error: input placement could not be legalized on this grid\n";
    return kInfeasible;
  }
  LocalSearchConfig ls;
  ls.passes = passes;
  ls.order = s->order;
  ls.rng = make_stream(c.seed, "tie-break");
  ls.overlap = c.exact_overlap ? OverlapMode::kExact : OverlapMode::kConservative;
  const Placement refined = local_search(start, s->netlist, *s->grid, ls);
  if (out_pl) write_placement(refined, s->netlist, *out_pl);
  const double ratio = start.hpwl > 0.0 ? (start.hpwl - refined.hpwl) / start.hpwl : 0.0;
  out << nlohmann::json{{"before", start.hpwl}, {"after", refined.hpwl}, {"ratio", ratio}}.dump()
      << '\n';
  return kOk;
}

int cmd_plot(const RunConfig& c, const fs::path& pl, const fs::path& out_svg, std::ostream& out,
             std::ostream& err) {
  const Netlist netlist = parse_aux(c.benchmark_aux, {c.include_fixed_pins});
  const PlacementRead in = read_placement(pl, netlist);
  if (in.clamped) err << "warning: clamped " << in.clamped << " macro(s) onto the canvas\n";
  std::vector<Point> positions(netlist.macro_count());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = in.genotype.at(i);
  SvgOptions svg;
  if (c.svg_grid) svg.grid_partitions = c.partitions ? *c.partitions : default_partitions(netlist);
  write_svg(out_svg, positions, netlist, svg);
  out << out_svg.string() << '\n';
  return kOk;
}

namespace {

/// Expands `--config FILE` into `--key=value` tokens placed before the
/// remaining arguments, so later command-line flags take precedence.
std::vector<std::string> splice_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  std::size_t insert_at = std::string::npos;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read config file " + file);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        const auto e = v.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
      };
      std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) continue;
      std::replace(key.begin(), key.end(), '_', '-');
      from_file.push_back("--" + key + "=" + value);
    }
  }
  // After the program name and subcommand.
  insert_at = std::min<std::size_t>(2, out.size());
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(insert_at), from_file.begin(), from_file.end());
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = splice_config(raw_args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Wire-mask-guided black-box macro placement"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  RunConfig c;
  std::string optimizer = "ea", mutation = "swap", ordering = "connected-area";
  std::optional<std::uint64_t> max_evals;
  std::optional<std::string> max_time;
  fs::path pl, out_svg;
  std::optional<fs::path> out_pl;
  int passes = 2;
  bool no_wall_time = false;
  bool wall_time = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--aux", c.benchmark_aux, "Bookshelf .aux file")->required()->check(CLI::ExistingFile);
    sub->add_option("--partitions", c.partitions, "Grid partitions per axis")->check(CLI::PositiveNumber);
    sub->add_option("--ordering", ordering, "connected-area | size-only | random")
        ->check(CLI::IsMember({"connected-area", "size-only", "random"}));
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_flag("--include-fixed-pins", c.include_fixed_pins, "Add fixed pads to macro nets");
    sub->add_flag("--exact-overlap", c.exact_overlap, "Exact rectangle overlap test");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--mutation", mutation, "swap | uniform | mix")
        ->check(CLI::IsMember({"swap", "uniform", "mix"}));
    sub->add_option("--max-evals", max_evals, "Evaluation budget")->check(CLI::PositiveNumber);
    sub->add_option("--max-time", max_time, "Wall-clock budget, e.g. 90s, 10m, 1000m");
    sub->add_option("--output-dir", c.output_dir, "Directory for result artifacts");
    sub->add_flag("--post-ls", c.post_ls, "Run post local search on the final placement");
    sub->add_flag("--wall-time", wall_time, "Record wall-clock seconds in the run log");
    sub->add_flag("--no-wall-time", no_wall_time, "Write t=0 in the run log");
    sub->add_flag("--svg-grid", c.svg_grid, "Draw grid lines in layout.svg");
  };

  CLI::App* place = app.add_subcommand("place", "Optimize a macro placement");
  add_common(place);
  add_run(place);
  place->add_option("--optimizer", optimizer, "rs | ea")->check(CLI::IsMember({"rs", "ea"}));
  place->add_option("--init-samples", c.init_samples, "EA initialization samples")
      ->check(CLI::PositiveNumber);
  place->add_option("--parallel-evals", c.parallel_evals, "Concurrent evaluations (rs only)")
      ->check(CLI::PositiveNumber);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Greedy-map one placement and report metrics");
  add_common(evaluate);
  evaluate->add_option("--pl", pl, "Placement to evaluate")->required()->check(CLI::ExistingFile);

  CLI::App* finetune = app.add_subcommand("finetune", "Improve an existing placement with the EA");
  add_common(finetune);
  add_run(finetune);
  finetune->add_option("--pl", pl, "Initial placement")->required()->check(CLI::ExistingFile);

  CLI::App* ls = app.add_subcommand("localsearch", "Post local search on a placement");
  add_common(ls);
  ls->add_option("--pl", pl, "Placement to refine")->required()->check(CLI::ExistingFile);
  ls->add_option("--passes", passes, "Number of passes")->check(CLI::PositiveNumber);
  ls->add_option("--out", out_pl, "Write the refined placement here");

  CLI::App* plot = app.add_subcommand("plot", "Render a placement as SVG");
  add_common(plot);
  plot->add_option("--pl", pl, "Placement to draw")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out_svg, "Output SVG")->required();
  plot->add_flag("--grid", c.svg_grid, "Draw grid lines");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    c.optimizer = optimizer == "rs" ? OptimizerKind::kRandomSearch : OptimizerKind::kEvolutionary;
    c.mutation.kind = parse_mutation(mutation);
    c.ordering = parse_ordering(ordering);
    c.budget.max_evaluations = max_evals;
    if (max_time) c.budget.max_wall_seconds = parse_duration(*max_time);
    // Evaluation-bounded runs log t=0 by default so their logs are byte-reproducible.
    c.wall_time_in_log = wall_time || (c.budget.max_wall_seconds.has_value() && !no_wall_time);
    if (wall_time && no_wall_time) {
      err << "error: --wall-time and --no-wall-time are exclusive\n";
      return kUsage;
    }

    if (*place || *finetune) {
      if (!c.budget.max_evaluations && !c.budget.max_wall_seconds) {
        err << "error: set --max-evals and/or --max-time\n";
        return kUsage;
      }
    }
    if (*place) return cmd_place(c, out, err);
    if (*finetune) return cmd_finetune(c, pl, out, err);
    if (*evaluate) return cmd_evaluate(c, pl, out, err);
    if (*ls) return cmd_localsearch(c, pl, passes, out_pl, out, err);
    if (*plot) return cmd_plot(c, pl, out_svg, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace wiremask::cli

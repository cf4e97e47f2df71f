#include "wiremask/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace wiremask {

void Budget::validate() const {
  if (!max_evaluations && !max_wall_seconds) {
    throw std::invalid_argument("budget needs an evaluation or wall-clock bound");
  }
  if (max_evaluations && *max_evaluations == 0) {
    throw std::invalid_argument("evaluation budget must be positive");
  }
  if (max_wall_seconds && !(*max_wall_seconds > 0.0)) {
    throw std::invalid_argument("wall-clock budget must be positive");
  }
}

double parse_duration(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty duration");
  double scale = 1.0;
  std::string_view number = text;
  switch (text.back()) {
    case 's': scale = 1.0; number.remove_suffix(1); break;
    case 'm': scale = 60.0; number.remove_suffix(1); break;
    case 'h': scale = 3600.0; number.remove_suffix(1); break;
    default: break;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(number), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != number.size() || number.empty() || !(v > 0.0)) {
    throw std::invalid_argument("bad duration '" + std::string(text) + "'");
  }
  return v * scale;
}

MutationKind parse_mutation(std::string_view text) {
  if (text == "swap") return MutationKind::kSwap;
  if (text == "uniform") return MutationKind::kUniform;
  if (text == "mix") return MutationKind::kMix;
  throw std::invalid_argument("unknown mutation '" + std::string(text) + "'");
}

std::string_view to_string(MutationKind k) {
  switch (k) {
    case MutationKind::kSwap: return "swap";
    case MutationKind::kUniform: return "uniform";
    case MutationKind::kMix: return "mix";
  }
  return "?";
}

Genotype random_genotype(std::size_t macro_count, const Rect& canvas, Rng& rng) {
  std::uniform_real_distribution<double> ux(canvas.x0, canvas.x1);
  std::uniform_real_distribution<double> uy(canvas.y0, canvas.y1);
  Genotype g(macro_count);
  for (std::size_t i = 0; i < macro_count; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    g.set(i, {x, y});
  }
  return g;
}

Genotype random_genotype(const Netlist& netlist, Rng& rng) {
  return random_genotype(netlist.macro_count(), netlist.canvas(), rng);
}

namespace {

void swap_two(Genotype& g, Rng& rng) {
  const std::size_t k = g.macro_count();
  if (k < 2) throw ContractViolation("swap mutation needs at least two macros");
  std::uniform_int_distribution<std::size_t> first(0, k - 1);
  std::uniform_int_distribution<std::size_t> second(0, k - 2);
  const std::size_t a = first(rng);
  std::size_t b = second(rng);
  if (b >= a) ++b;
  const Point pa = g.at(a);
  g.set(a, g.at(b));
  g.set(b, pa);
}

void redraw_one(Genotype& g, const Rect& canvas, Rng& rng) {
  if (g.macro_count() == 0) return;
  std::uniform_int_distribution<std::size_t> pick(0, g.macro_count() - 1);
  const std::size_t i = pick(rng);
  std::uniform_real_distribution<double> ux(canvas.x0, canvas.x1);
  std::uniform_real_distribution<double> uy(canvas.y0, canvas.y1);
  const double x = ux(rng);
  const double y = uy(rng);
  g.set(i, {x, y});
}

}  // namespace

Genotype mutate(const Genotype& parent, MutationOp op, const Rect& canvas, Rng& rng) {
  Genotype child = parent;
  switch (op.kind) {
    case MutationKind::kSwap:
      swap_two(child, rng);
      break;
    case MutationKind::kUniform:
      redraw_one(child, canvas, rng);
      break;
    case MutationKind::kMix: {
      std::bernoulli_distribution coin(0.5);
      if (coin(rng) && child.macro_count() >= 2) {
        swap_two(child, rng);
      } else {
        redraw_one(child, canvas, rng);
      }
      break;
    }
  }
  return child;
}

RandomSearch::RandomSearch(const Netlist& netlist, std::uint64_t seed)
    : netlist_(&netlist), init_(make_stream(seed, "init")) {}

Genotype RandomSearch::ask() { return random_genotype(*netlist_, init_); }

OnePlusOneEA::OnePlusOneEA(const Netlist& netlist, std::uint64_t seed, MutationOp op,
                           std::uint64_t init_samples)
    : netlist_(&netlist),
      op_(op),
      init_(make_stream(seed, "init")),
      mutation_(make_stream(seed, "mutation")),
      init_remaining_(init_samples),
      parent_fitness_(std::numeric_limits<double>::infinity()) {
  if (init_samples == 0) throw std::invalid_argument("EA needs at least one initial sample");
}

OnePlusOneEA::OnePlusOneEA(const Netlist& netlist, std::uint64_t seed, MutationOp op,
                           Genotype initial)
    : netlist_(&netlist),
      op_(op),
      init_(make_stream(seed, "init")),
      mutation_(make_stream(seed, "mutation")),
      init_remaining_(0),
      seeded_(std::move(initial)),
      parent_fitness_(std::numeric_limits<double>::infinity()) {
  if (seeded_->macro_count() != netlist.macro_count()) {
    throw ContractViolation("initial genotype does not match the netlist");
  }
}

Genotype OnePlusOneEA::ask() {
  if (seeded_ && !has_parent_) return *seeded_;
  if (init_remaining_ > 0) return random_genotype(*netlist_, init_);
  return mutate(parent_, op_, netlist_->canvas(), mutation_);
}

void OnePlusOneEA::tell(const Genotype& genotype, double fitness) {
  if (seeded_ && !has_parent_) {
    parent_ = genotype;
    parent_fitness_ = fitness;
    has_parent_ = true;
    return;
  }
  if (init_remaining_ > 0) {
    --init_remaining_;
    if (!has_parent_ || fitness < parent_fitness_) {
      parent_ = genotype;
      parent_fitness_ = fitness;
      has_parent_ = true;
    }
    return;
  }
  if (fitness <= parent_fitness_) {
    parent_ = genotype;
    parent_fitness_ = fitness;
  }
}

RunLog run(Optimizer& optimizer, const Evaluator& evaluator, const RunOptions& options) {
  options.budget.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunLog log;
  log.seed = options.seed;
  log.optimizer = optimizer.name();
  double best = std::numeric_limits<double>::infinity();
  double last_entry_t = 0.0;
  const unsigned width = optimizer.supports_batch() ? std::max(1u, options.parallel_width) : 1u;

  std::vector<Genotype> batch;
  std::vector<Placement> results;
  while (true) {
    if (options.budget.max_evaluations && log.evaluations >= *options.budget.max_evaluations) break;
    if (options.budget.max_wall_seconds && elapsed() >= *options.budget.max_wall_seconds) break;

    std::uint64_t n = width;
    if (options.budget.max_evaluations) {
      n = std::min<std::uint64_t>(n, *options.budget.max_evaluations - log.evaluations);
    }
    batch.clear();
    for (std::uint64_t i = 0; i < n; ++i) batch.push_back(optimizer.ask());
    results.assign(n, Placement{});
    if (n == 1) {
      results[0] = evaluator.evaluate(batch[0]);
    } else {
      std::vector<std::jthread> workers;
      for (std::uint64_t i = 1; i < n; ++i) {
        workers.emplace_back([&, i] { results[i] = evaluator.evaluate(batch[i]); });
      }
      results[0] = evaluator.evaluate(batch[0]);
    }

    // Fold in submission order so the outcome does not depend on the width.
    for (std::uint64_t i = 0; i < n; ++i) {
      ++log.evaluations;
      const double fitness =
          results[i].feasible ? results[i].hpwl : std::numeric_limits<double>::infinity();
      optimizer.tell(batch[i], fitness);
      const double t = options.record_time ? elapsed() : 0.0;
      if (fitness < best) {
        best = fitness;
        log.best = std::move(results[i]);
        log.best_genotype = batch[i];
        log.entries.push_back({log.evaluations, t, best});
        last_entry_t = t;
      } else if (options.record_time && t - last_entry_t >= options.heartbeat_seconds) {
        log.entries.push_back({log.evaluations, t, best});
        last_entry_t = t;
      }
    }
  }
  if (log.entries.empty() || log.entries.back().eval != log.evaluations) {
    log.entries.push_back({log.evaluations, options.record_time ? elapsed() : 0.0, best});
  }
  return log;
}

RunLog run_rs(const Evaluator& evaluator, const Budget& budget, std::uint64_t seed,
              unsigned parallel_width) {
  RandomSearch rs(evaluator.netlist(), seed);
  return run(rs, evaluator, {budget, seed, parallel_width});
}

RunLog run_ea(const Evaluator& evaluator, const Budget& budget, std::uint64_t seed, MutationOp op,
              std::uint64_t init_samples) {
  if (budget.max_evaluations && *budget.max_evaluations < init_samples) {
    throw std::invalid_argument("evaluation budget is smaller than the EA initialization");
  }
  OnePlusOneEA ea(evaluator.netlist(), seed, op, init_samples);
  return run(ea, evaluator, {budget, seed});
}

RunLog finetune(const Genotype& initial, const Evaluator& evaluator, const Budget& budget,
                std::uint64_t seed, MutationOp op) {
  OnePlusOneEA ea(evaluator.netlist(), seed, op, initial);
  return run(ea, evaluator, {budget, seed});
}

void write_runlog(std::ostream& out, const RunLog& log, std::string_view config_text) {
  for (const RunLogEntry& e : log.entries) {
    nlohmann::json j{{"eval", e.eval}, {"t", e.t}, {"best_hpwl", e.best_hpwl}};
    if (!std::isfinite(e.best_hpwl)) j["best_hpwl"] = nullptr;
    out << j.dump() << '\n';
  }
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_text)));
  nlohmann::json footer{{"footer", true},
                        {"seed", log.seed},
                        {"optimizer", log.optimizer},
                        {"evaluations", log.evaluations},
                        {"config_hash", hash}};
  out << footer.dump() << '\n';
}

}  // namespace wiremask

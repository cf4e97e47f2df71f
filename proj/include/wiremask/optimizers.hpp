#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiremask/evaluate.hpp"
#include "wiremask/random.hpp"
#include "wiremask/types.hpp"

namespace wiremask {

/// Stop after max_evaluations or once max_wall_seconds have elapsed,
/// whichever comes first. At least one bound must be set.
struct Budget {
  std::optional<std::uint64_t> max_evaluations;
  std::optional<double> max_wall_seconds;

  static Budget evaluations(std::uint64_t n) { return {n, std::nullopt}; }
  static Budget seconds(double s) { return {std::nullopt, s}; }

  void validate() const;
};

/// Parses "90s", "10m", "1000m", "2h" or a bare number of seconds.
double parse_duration(std::string_view text);

enum class MutationKind { kSwap, kUniform, kMix };

struct MutationOp {
  MutationKind kind = MutationKind::kSwap;
};

MutationKind parse_mutation(std::string_view text);
std::string_view to_string(MutationKind k);

struct RunLogEntry {
  std::uint64_t eval = 0;  // evaluations spent so far
  double t = 0.0;          // wall seconds since the start of the run
  double best_hpwl = 0.0;

  friend bool operator==(const RunLogEntry&, const RunLogEntry&) = default;
};

struct RunLog {
  std::vector<RunLogEntry> entries;
  std::uint64_t seed = 0;
  std::string optimizer;
  std::uint64_t evaluations = 0;
  Genotype best_genotype;
  Placement best;
};

/// Each coordinate uniform over its canvas axis.
Genotype random_genotype(const Netlist& netlist, Rng& rng);
Genotype random_genotype(std::size_t macro_count, const Rect& canvas, Rng& rng);

/// Returns a mutated copy. Swap exchanges the coordinates of two distinct
/// macros; uniform redraws one macro; mix flips a fair coin between them.
/// Swap throws ContractViolation when k < 2; mix then always redraws.
Genotype mutate(const Genotype& parent, MutationOp op, const Rect& canvas, Rng& rng);

/// Ask/tell black-box optimizer over genotypes. Fitness is the phenotype
/// HPWL, +inf when infeasible.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual std::string name() const = 0;
  virtual Genotype ask() = 0;
  virtual void tell(const Genotype& genotype, double fitness) = 0;
  /// Whether several asks may be issued before the matching tells.
  virtual bool supports_batch() const { return false; }
};

class RandomSearch final : public Optimizer {
 public:
  RandomSearch(const Netlist& netlist, std::uint64_t seed);
  std::string name() const override { return "rs"; }
  Genotype ask() override;
  void tell(const Genotype&, double) override {}
  bool supports_batch() const override { return true; }

 private:
  const Netlist* netlist_;
  Rng init_;
};

/// (1+1)-EA: the parent is the best of `init_samples` random genotypes (or a
/// given initial genotype); a child replaces it when its fitness is <= the
/// parent's.
class OnePlusOneEA final : public Optimizer {
 public:
  OnePlusOneEA(const Netlist& netlist, std::uint64_t seed, MutationOp op,
               std::uint64_t init_samples = 100);
  OnePlusOneEA(const Netlist& netlist, std::uint64_t seed, MutationOp op, Genotype initial);

  std::string name() const override { return "ea"; }
  Genotype ask() override;
  void tell(const Genotype& genotype, double fitness) override;

  const Genotype& parent() const { return parent_; }
  double parent_fitness() const { return parent_fitness_; }

 private:
  const Netlist* netlist_;
  MutationOp op_;
  Rng init_;
  Rng mutation_;
  std::uint64_t init_remaining_;
  std::optional<Genotype> seeded_;
  Genotype parent_;
  double parent_fitness_;
  bool has_parent_ = false;
};

struct RunOptions {
  Budget budget;
  std::uint64_t seed = 0;
  /// Concurrent evaluations for optimizers that support batching.
  unsigned parallel_width = 1;
  /// When false, every `t` is written as 0 and no heartbeats are emitted, so
  /// logs of evaluation-bounded runs are byte-reproducible.
  bool record_time = true;
  double heartbeat_seconds = 60.0;
};

/// Drives an optimizer against an evaluator until the budget is spent.
/// Logs one entry per strict improvement, heartbeats, and a final entry
/// unless the last improvement already closed the run.
RunLog run(Optimizer& optimizer, const Evaluator& evaluator, const RunOptions& options);

RunLog run_rs(const Evaluator& evaluator, const Budget& budget, std::uint64_t seed,
              unsigned parallel_width = 1);
RunLog run_ea(const Evaluator& evaluator, const Budget& budget, std::uint64_t seed, MutationOp op,
              std::uint64_t init_samples = 100);
RunLog finetune(const Genotype& initial, const Evaluator& evaluator, const Budget& budget,
                std::uint64_t seed, MutationOp op);

/// JSON lines: one {"eval","t","best_hpwl"} object per entry, then a footer.
void write_runlog(std::ostream& out, const RunLog& log, std::string_view config_text);

}  // namespace wiremask

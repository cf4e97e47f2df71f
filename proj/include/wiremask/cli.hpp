#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wiremask/evaluate.hpp"
#include "wiremask/optimizers.hpp"

namespace wiremask::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kFailure = 3 };

enum class OptimizerKind { kRandomSearch, kEvolutionary };

struct RunConfig {
  std::filesystem::path benchmark_aux;
  std::optional<int> partitions;
  OptimizerKind optimizer = OptimizerKind::kEvolutionary;
  MutationOp mutation;
  OrderingStrategy ordering = OrderingStrategy::kConnectedArea;
  std::uint64_t seed = 0;
  Budget budget;
  std::filesystem::path output_dir = "out";
  bool post_ls = false;
  unsigned parallel_evals = 1;
  std::uint64_t init_samples = 100;
  bool include_fixed_pins = false;
  bool exact_overlap = false;
  bool wall_time_in_log = true;
  bool svg_grid = false;

  /// Canonical text of every knob; hashed into the run log footer.
  std::string canonical() const;
};

int cmd_place(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_finetune(const RunConfig& config, const std::filesystem::path& pl, std::ostream& out,
                 std::ostream& err);
int cmd_evaluate(const RunConfig& config, const std::filesystem::path& pl, std::ostream& out,
                 std::ostream& err);
int cmd_localsearch(const RunConfig& config, const std::filesystem::path& pl, int passes,
                    const std::optional<std::filesystem::path>& out_pl, std::ostream& out,
                    std::ostream& err);
int cmd_plot(const RunConfig& config, const std::filesystem::path& pl,
             const std::filesystem::path& out_svg, std::ostream& out, std::ostream& err);

/// Entry point behind the `wiremask` executable. `args[0]` is the program
/// name. `--config FILE` splices `key=value` lines in as flags; flags given
/// on the command line win.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wiremask::cli

#pragma once

// Data-parallel inner loops of the wire-mask evaluation. Every kernel has a
// scalar reference and optional SIMD variants which must produce bit-identical
// results; the active table is chosen at runtime from CPU features.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace wiremask::kernels {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  Backend backend;
  std::string_view name;

  /// cost[c] += max(0, box_lo - (p + lo_off)) + max(0, (p + hi_off) - box_hi)
  /// with p = origin + c * step. Bounding-box growth along one axis.
  void (*accumulate_expansion)(std::span<double> cost, double origin, double step, double lo_off,
                               double hi_off, double box_lo, double box_hi);

  /// Summed-area table of an m x m byte bitmap into (m+1)^2 int32 entries.
  void (*integral_image)(std::span<const std::uint8_t> bitmap, std::size_t m,
                         std::span<std::int32_t> sums);

  /// valid[j*m + i] = 1 iff i < cols, j < rows and the fw x fh window at
  /// (i, j) sums to zero. Returns the number of ones.
  std::size_t (*free_windows)(std::span<const std::int32_t> sums, std::size_t m, std::size_t fw,
                              std::size_t fh, std::size_t cols, std::size_t rows,
                              std::span<std::uint8_t> valid);

  /// Minimum of values[i] over mask[i] != 0, +inf when the mask is empty.
  double (*masked_min)(std::span<const double> values, std::span<const std::uint8_t> mask);

  /// out[j*m + i] = (x[i] + y[j]) + c.
  void (*outer_sum)(std::span<const double> x, std::span<const double> y, double c,
                    std::span<double> out);
};

const KernelTable& scalar();

/// nullptr when the CPU or the build lacks AVX2.
const KernelTable* avx2();

/// Best table supported here, unless WIREMASK_KERNELS=scalar is set.
const KernelTable& active();

}  // namespace wiremask::kernels

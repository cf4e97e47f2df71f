#include <algorithm>
#include <limits>

#include "kernels_impl.hpp"

namespace wiremask::kernels::scalar_impl {

void accumulate_expansion(std::span<double> cost, double origin, double step, double lo_off,
                          double hi_off, double box_lo, double box_hi) {
  for (std::size_t c = 0; c < cost.size(); ++c) {
    const double p = origin + static_cast<double>(c) * step;
    const double below = std::max(0.0, box_lo - (p + lo_off));
    const double above = std::max(0.0, (p + hi_off) - box_hi);
    cost[c] = cost[c] + (below + above);
  }
}

void integral_image(std::span<const std::uint8_t> bitmap, std::size_t m,
                    std::span<std::int32_t> sums) {
  const std::size_t stride = m + 1;
  std::fill(sums.begin(), sums.begin() + stride, 0);
  for (std::size_t j = 0; j < m; ++j) {
    std::int32_t* row = sums.data() + (j + 1) * stride;
    const std::int32_t* prev = row - stride;
    row[0] = 0;
    std::int32_t run = 0;
    for (std::size_t i = 0; i < m; ++i) {
      run += bitmap[j * m + i];
      row[i + 1] = prev[i + 1] + run;
    }
  }
}

std::size_t free_windows(std::span<const std::int32_t> sums, std::size_t m, std::size_t fw,
                         std::size_t fh, std::size_t cols, std::size_t rows,
                         std::span<std::uint8_t> valid) {
  const std::size_t stride = m + 1;
  std::size_t count = 0;
  for (std::size_t j = 0; j < m; ++j) {
    std::uint8_t* out = valid.data() + j * m;
    if (j >= rows) {
      std::fill(out, out + m, 0);
      continue;
    }
    const std::int32_t* lo = sums.data() + j * stride;
    const std::int32_t* hi = sums.data() + (j + fh) * stride;
    for (std::size_t i = 0; i < m; ++i) {
      if (i >= cols) {
        out[i] = 0;
        continue;
      }
      const std::int32_t s = hi[i + fw] - lo[i + fw] - hi[i] + lo[i];
      out[i] = s == 0 ? 1 : 0;
      count += out[i];
    }
  }
  return count;
}

double masked_min(std::span<const double> values, std::span<const std::uint8_t> mask) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i] != 0) best = std::min(best, values[i]);
  }
  return best;
}

void outer_sum(std::span<const double> x, std::span<const double> y, double c,
               std::span<double> out) {
  const std::size_t m = x.size();
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t i = 0; i < m; ++i) out[j * m + i] = (x[i] + y[j]) + c;
  }
}

}  // namespace wiremask::kernels::scalar_impl

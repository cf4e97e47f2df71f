// Compiled with -mavx2 only; reached through the dispatch table after a CPUID
// check, never called directly.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

#include "kernels_impl.hpp"

namespace wiremask::kernels::avx2_impl {

namespace {

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_min_pd(lo, hi);
  m = _mm_min_pd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

}  // namespace

void accumulate_expansion(std::span<double> cost, double origin, double step, double lo_off,
                          double hi_off, double box_lo, double box_hi) {
  const std::size_t n = cost.size();
  const __m256d vorigin = _mm256_set1_pd(origin);
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vlo = _mm256_set1_pd(lo_off);
  const __m256d vhi = _mm256_set1_pd(hi_off);
  const __m256d vbox_lo = _mm256_set1_pd(box_lo);
  const __m256d vbox_hi = _mm256_set1_pd(box_hi);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

  std::size_t c = 0;
  for (; c + 4 <= n; c += 4) {
    const __m256d p = _mm256_add_pd(vorigin, _mm256_mul_pd(idx, vstep));
    // max(x, 0) keeps std::max(0.0, x) semantics for -0.0.
    const __m256d below = _mm256_max_pd(_mm256_sub_pd(vbox_lo, _mm256_add_pd(p, vlo)), zero);
    const __m256d above = _mm256_max_pd(_mm256_sub_pd(_mm256_add_pd(p, vhi), vbox_hi), zero);
    const __m256d acc = _mm256_loadu_pd(cost.data() + c);
    _mm256_storeu_pd(cost.data() + c, _mm256_add_pd(acc, _mm256_add_pd(below, above)));
    idx = _mm256_add_pd(idx, four);
  }
  for (; c < n; ++c) {
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
      row[i + 1] = run;
    }
    std::size_t i = 1;
    for (; i + 8 <= stride; i += 8) {
      const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
      const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev + i));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(row + i), _mm256_add_epi32(a, b));
    }
    for (; i < stride; ++i) row[i] += prev[i];
  }
}

std::size_t free_windows(std::span<const std::int32_t> sums, std::size_t m, std::size_t fw,
                         std::size_t fh, std::size_t cols, std::size_t rows,
                         std::span<std::uint8_t> valid) {
  const std::size_t stride = m + 1;
  const __m256i zero = _mm256_setzero_si256();
  std::size_t count = 0;
  for (std::size_t j = 0; j < m; ++j) {
    std::uint8_t* out = valid.data() + j * m;
    if (j >= rows) {
      std::fill(out, out + m, 0);
      continue;
    }
    const std::int32_t* lo = sums.data() + j * stride;
    const std::int32_t* hi = sums.data() + (j + fh) * stride;
    const std::size_t limit = std::min(cols, m);
    std::size_t i = 0;
    for (; i + 8 <= limit; i += 8) {
      const auto load = [](const std::int32_t* p) {
        return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
      };
      const __m256i s = _mm256_add_epi32(
          _mm256_sub_epi32(_mm256_sub_epi32(load(hi + i + fw), load(lo + i + fw)), load(hi + i)),
          load(lo + i));
      const unsigned bits = static_cast<unsigned>(
          _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(s, zero))));
      for (int b = 0; b < 8; ++b) out[i + b] = static_cast<std::uint8_t>((bits >> b) & 1u);
      count += static_cast<std::size_t>(std::popcount(bits));
    }
    for (; i < limit; ++i) {
      const std::int32_t s = hi[i + fw] - lo[i + fw] - hi[i] + lo[i];
      out[i] = s == 0 ? 1 : 0;
      count += out[i];
    }
    std::fill(out + limit, out + m, 0);
  }
  return count;
}

double masked_min(std::span<const double> values, std::span<const std::uint8_t> mask) {
  const std::size_t n = values.size();
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d best = inf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::int32_t packed;
    std::memcpy(&packed, mask.data() + i, sizeof(packed));
    const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
    const __m256d keep =
        _mm256_castsi256_pd(_mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
    const __m256d v = _mm256_blendv_pd(inf, _mm256_loadu_pd(values.data() + i), keep);
    best = _mm256_min_pd(v, best);
  }
  double result = hmin(best);
  for (; i < n; ++i) {
    if (mask[i] != 0) result = std::min(result, values[i]);
  }
  return result;
}

void outer_sum(std::span<const double> x, std::span<const double> y, double c,
               std::span<double> out) {
  const std::size_t m = x.size();
  const __m256d vc = _mm256_set1_pd(c);
  for (std::size_t j = 0; j < y.size(); ++j) {
    const __m256d vy = _mm256_set1_pd(y[j]);
    double* row = out.data() + j * m;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      _mm256_storeu_pd(row + i, _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(x.data() + i), vy), vc));
    }
    for (; i < m; ++i) row[i] = (x[i] + y[j]) + c;
  }
}

}  // namespace wiremask::kernels::avx2_impl

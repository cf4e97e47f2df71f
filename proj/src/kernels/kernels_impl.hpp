#pragma once

#include "wiremask/kernels.hpp"

namespace wiremask::kernels {

namespace scalar_impl {
void accumulate_expansion(std::span<double> cost, double origin, double step, double lo_off,
                          double hi_off, double box_lo, double box_hi);
void integral_image(std::span<const std::uint8_t> bitmap, std::size_t m,
                    std::span<std::int32_t> sums);
std::size_t free_windows(std::span<const std::int32_t> sums, std::size_t m, std::size_t fw,
                         std::size_t fh, std::size_t cols, std::size_t rows,
                         std::span<std::uint8_t> valid);
double masked_min(std::span<const double> values, std::span<const std::uint8_t> mask);
void outer_sum(std::span<const double> x, std::span<const double> y, double c,
               std::span<double> out);
}  // namespace scalar_impl

#if defined(WIREMASK_HAVE_AVX2)
namespace avx2_impl {
void accumulate_expansion(std::span<double> cost, double origin, double step, double lo_off,
                          double hi_off, double box_lo, double box_hi);
void integral_image(std::span<const std::uint8_t> bitmap, std::size_t m,
                    std::span<std::int32_t> sums);
std::size_t free_windows(std::span<const std::int32_t> sums, std::size_t m, std::size_t fw,
                         std::size_t fh, std::size_t cols, std::size_t rows,
                         std::span<std::uint8_t> valid);
double masked_min(std::span<const double> values, std::span<const std::uint8_t> mask);
void outer_sum(std::span<const double> x, std::span<const double> y, double c,
               std::span<double> out);
}  // namespace avx2_impl
#endif

}  // namespace wiremask::kernels

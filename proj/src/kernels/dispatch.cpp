#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace wiremask::kernels {

namespace {

constexpr KernelTable kScalarTable{
    Backend::kScalar,          "scalar",
    scalar_impl::accumulate_expansion, scalar_impl::integral_image,
    scalar_impl::free_windows, scalar_impl::masked_min,
    scalar_impl::outer_sum,
};

#if defined(WIREMASK_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    Backend::kAvx2,          "avx2",
    avx2_impl::accumulate_expansion, avx2_impl::integral_image,
    avx2_impl::free_windows, avx2_impl::masked_min,
    avx2_impl::outer_sum,
};
#endif

const KernelTable& choose() {
  if (const char* env = std::getenv("WIREMASK_KERNELS"); env && std::string_view(env) == "scalar") {
    return kScalarTable;
  }
  if (const KernelTable* t = avx2()) return *t;
  return kScalarTable;
}

}  // namespace

const KernelTable& scalar() { return kScalarTable; }

const KernelTable* avx2() {
#if defined(WIREMASK_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace wiremask::kernels

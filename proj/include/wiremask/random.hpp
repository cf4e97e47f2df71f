#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wiremask {

using Rng = std::mt19937_64;

/// Independent stream derived from a run seed and a stream name
/// ("init", "mutation", "tie-break", ...).
Rng make_stream(std::uint64_t seed, std::string_view name);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

}  // namespace wiremask

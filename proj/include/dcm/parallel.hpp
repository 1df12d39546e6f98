#pragma once

#include <cstdint>

namespace dcm {

/// Caps the OpenMP worker pool. Zero leaves the runtime default.
void set_threads(int threads);

/// Independent 64-bit seed for stream `index` of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace dcm

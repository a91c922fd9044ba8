#pragma once

#include "gmp/tree.hpp"

#include <array>
#include <cstdint>

namespace gmp {

/// Philox4x32-10 block: a keyed bijection of the 128-bit counter.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Randomness scope of one path: every coefficient of the path is a pure
/// function of (master seed, path id, node).
struct KeyScope {
    std::uint64_t master_seed = 0;
    std::uint64_t path_id = 0;

    friend bool operator==(const KeyScope&, const KeyScope&) = default;
};

/// Uniform in the open interval (0, 1), keyed on (scope, node).
double keyed_uniform(KeyScope scope, NodeIndex node);

/// Standard normal by inverse CDF of keyed_uniform.
double keyed_normal(KeyScope scope, NodeIndex node);

/// Standard normal quantile.
double normal_quantile(double p);

} // namespace gmp

#include "gmp/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace gmp {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

double keyed_uniform(KeyScope scope, NodeIndex node) {
    const auto flat = static_cast<std::uint64_t>(flat_index(node));
    const auto out = philox4x32(
        {static_cast<std::uint32_t>(flat), static_cast<std::uint32_t>(flat >> 32),
         static_cast<std::uint32_t>(scope.path_id),
         static_cast<std::uint32_t>(scope.path_id >> 32)},
        {static_cast<std::uint32_t>(scope.master_seed),
         static_cast<std::uint32_t>(scope.master_seed >> 32)});
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    // 53 random bits, offset by half an ulp so 0 and 1 are never produced.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double normal_quantile(double p) {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double keyed_normal(KeyScope scope, NodeIndex node) {
    return normal_quantile(keyed_uniform(scope, node));
}

} // namespace gmp

// SPDX-License-Identifier: Apache-2.0
#include "landau/rng.hpp"

namespace landau {
namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo)
{
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Philox4x64::Counter Philox4x64::block(Counter ctr, Key key)
{
    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

void Philox4x64::discard_blocks(std::uint64_t n)
{
    std::uint64_t carry = n;
    for (auto& w : ctr_)
    {
        std::uint64_t prev = w;
        w += carry;
        carry = (w < prev) ? 1 : 0;
        if (!carry)
            break;
    }
    pos_ = 4;
}

std::uint64_t RngStream::poisson(double mean)
{
    if (!(mean > 0))
        return 0;
    boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
    return dist(engine_);
}

}  // namespace landau

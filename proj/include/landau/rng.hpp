// SPDX-License-Identifier: Apache-2.0
//! \file rng.hpp
//! Counter-based Philox4x64-10 generator and per-trajectory streams.
#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace landau {

/*!
 * Philox4x64 with ten rounds.
 *
 * Satisfies UniformRandomBitGenerator. Each call to the block function maps a
 * 256-bit counter and 128-bit key to four 64-bit words; the engine walks the
 * counter and hands out the words in order.
 */
class Philox4x64
{
  public:
    using result_type = std::uint64_t;
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    Philox4x64() = default;
    Philox4x64(Key key, Counter counter) : key_{key}, ctr_{counter} {}

    //! Stateless block function (ten rounds)
    static Counter block(Counter ctr, Key key);

    result_type operator()()
    {
        if (pos_ == 4)
        {
            buf_ = block(ctr_, key_);
            increment();
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    //! Skip ahead by whole blocks
    void discard_blocks(std::uint64_t n);

    Key const& key() const { return key_; }
    Counter const& counter() const { return ctr_; }

  private:
    void increment()
    {
        for (auto& w : ctr_)
        {
            if (++w != 0)
                break;
        }
    }

    Key key_{0, 0};
    Counter ctr_{0, 0, 0, 0};
    Counter buf_{};
    int pos_ = 4;
};

//! Purpose tags occupying the top counter word so substreams never overlap
enum class Substream : std::uint64_t
{
    initial = 1,
    dynamics = 2,
    sde = 3,
    analysis = 4,
};

/*!
 * Random stream owned by one task.
 *
 * The key is (master seed, stream index); the upper counter word carries a
 * substream tag. Streams with different indices are independent by the
 * Philox construction, so results never depend on scheduling.
 */
class RngStream
{
  public:
    RngStream(std::uint64_t seed, std::uint64_t index,
              Substream sub = Substream::dynamics)
        : engine_{{seed, index}, {0, 0, 0, static_cast<std::uint64_t>(sub)}}
    {
    }

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    std::uint64_t poisson(double mean);
    std::uint64_t bits() { return engine_(); }

    Philox4x64& engine() { return engine_; }

  private:
    Philox4x64 engine_;
    boost::random::uniform_01<double> uniform_;
    boost::random::normal_distribution<double> normal_;
};

}  // namespace landau

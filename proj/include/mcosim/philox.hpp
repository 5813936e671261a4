// Copyright 2026 The mcosim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace mcosim {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output is
/// a pure function of (counter, key), so independent streams are obtained by
/// choosing disjoint counters.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Uniform doubles for one Monte Carlo sample: the key is the user seed and
/// the counter is (stream index, draw index), so a sample's draws do not
/// depend on which worker evaluates it.
class StreamUniform {
public:
    StreamUniform(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    /// Uniform on [0, 1) with 53 random bits.
    double operator()() noexcept {
        if (used_ == 2) {
            refill();
        }
        const std::uint64_t hi = buf_[2 * used_];
        const std::uint64_t lo = buf_[2 * used_ + 1];
        ++used_;
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

private:
    void refill() noexcept {
        buf_ = Philox4x32::block({static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(stream_),
                                  static_cast<std::uint32_t>(stream_ >> 32)},
                                 key_);
        ++block_;
        used_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buf_{};
    int used_ = 2;
};

}  // namespace mcosim

// Copyright 2026 The lsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A draw is a pure function of (key, counter), so streams can be split by
// seed and replicate index and evaluated in any order.

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace lsq {

inline constexpr std::string_view kRngName = "philox4x32-10";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32-10 block.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Stream of uniform doubles keyed by a 64-bit seed. Block i of the stream is
/// philox(counter = (i_lo, i_hi, stream_lo, stream_hi), key = seed).
class PhiloxStream {
   public:
    explicit PhiloxStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1): ((k >> 11) + 0.5) 2^-53.
    double next_uniform();
    /// Standard normal by Box-Muller (both values of a pair are used).
    double next_normal();

   private:
    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lsq

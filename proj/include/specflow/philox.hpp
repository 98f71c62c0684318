// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace specflow {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: block(counter, key) is a pure function, so sample i of stream k
/// is reproducible in any order and on any thread.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr const char* kAlgorithm = "philox4x32-10";

    static Counter block(Counter ctr, Key key);

    explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    /// Uniform double in [0,1) with 53 random bits, from draw `index` of this stream.
    double uniform(std::uint64_t index) const;
    std::array<std::uint32_t, 4> words(std::uint64_t index) const;

private:
    Key key_;
    std::uint64_t stream_;
};

}  // namespace specflow

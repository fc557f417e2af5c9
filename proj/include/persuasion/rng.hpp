// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random numbers. Philox4x32-10 (Salmon et al., SC 2011) maps a
// 128-bit counter and a 64-bit key to 128 random bits, so the stream for any
// (seed, stream index) pair can be opened without touching shared state.
// Paths are keyed by their index, which makes Monte Carlo output independent
// of how paths are scheduled across workers.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>

namespace persuasion {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Independent stream families drawn from the same seed.
enum class StreamDomain : std::uint32_t {
    natural_scale = 0,
    calendar_euler = 1,
    test = 0xFFFFu,
};

/// Random stream of one path. The starting state is the Philox image of
/// (seed, stream, domain), so any stream can be opened directly; draws within
/// the stream come from xoshiro256** seeded with that state.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint32_t stream,
            StreamDomain domain = StreamDomain::natural_scale) {
        const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                                  static_cast<std::uint32_t>(seed >> 32)};
        const auto dom = static_cast<std::uint32_t>(domain);
        const auto a = Philox4x32::generate({0u, 0u, stream, dom}, key);
        const auto b = Philox4x32::generate({1u, 0u, stream, dom}, key);
        state_ = {join(a[0], a[1]), join(a[2], a[3]), join(b[0], b[1]), join(b[2], b[3])};
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the 128-layer ziggurat (Marsaglia and Tsang, with
    /// Doornik's layer tests). Layer index and abscissa come from disjoint
    /// bits of one 64-bit draw.
    double normal() {
        const auto& zig = ziggurat();
        for (;;) {
            const std::uint64_t bits = next_u64();
            const std::size_t layer = bits & 0x7F;
            const double u = 2.0 * ((static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53) - 1.0;
            if (std::abs(u) < zig.ratio[layer]) return u * zig.x[layer];
            if (layer == 0) return normal_tail(u < 0.0);
            const double x = u * zig.x[layer];
            const double f0 = std::exp(-0.5 * (zig.x[layer] * zig.x[layer] - x * x));
            const double f1 = std::exp(-0.5 * (zig.x[layer + 1] * zig.x[layer + 1] - x * x));
            if (f1 + uniform() * (f0 - f1) < 1.0) return x;
        }
    }

private:
    static constexpr std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
        return (std::uint64_t{hi} << 32) | lo;
    }
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    struct Ziggurat {
        static constexpr int kLayers = 128;
        static constexpr double kTailStart = 3.442619855899;
        static constexpr double kLayerArea = 9.91256303526217e-3;
        std::array<double, kLayers + 1> x{};
        std::array<double, kLayers> ratio{};

        Ziggurat() {
            double f = std::exp(-0.5 * kTailStart * kTailStart);
            x[0] = kLayerArea / f;
            x[1] = kTailStart;
            x[kLayers] = 0.0;
            for (int i = 2; i < kLayers; ++i) {
                x[i] = std::sqrt(-2.0 * std::log(kLayerArea / x[i - 1] + f));
                f = std::exp(-0.5 * x[i] * x[i]);
            }
            for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
        }
    };

    static const Ziggurat& ziggurat() {
        static const Ziggurat table;
        return table;
    }

    double normal_tail(bool negative) {
        constexpr double r = Ziggurat::kTailStart;
        double x = 0.0;
        double y = 0.0;
        do {
            x = std::log(uniform()) / r;
            y = std::log(uniform());
        } while (-2.0 * y < x * x);
        return negative ? x - r : r - x;
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace persuasion

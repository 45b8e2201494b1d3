// Philox4x32-10 counter-based generator. Each draw is a pure function of
// (key, counter), so streams can be addressed by (seed, message, stage)
// without carrying state between draws.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mecaoi {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Stage identifiers used as part of the counter.
enum class Stage : std::uint32_t { Local = 0, Transmit = 1, Remote = 2 };

/// Uniform draws addressed by (message index, stage) under a fixed seed.
class StageStreams {
public:
    explicit constexpr StageStreams(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    /// 64 random bits for (message, stage).
    constexpr std::uint64_t bits(std::uint64_t message, Stage stage) const noexcept {
        const auto out = Philox4x32::apply({static_cast<std::uint32_t>(message),
                                            static_cast<std::uint32_t>(message >> 32),
                                            static_cast<std::uint32_t>(stage), 0u},
                                           key_);
        return (std::uint64_t{out[0]} << 32) | out[1];
    }

    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t message, Stage stage) const noexcept {
        return (static_cast<double>(bits(message, stage) >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(std::uint64_t message, Stage stage, double rate) const noexcept {
        return -std::log(uniform(message, stage)) / rate;
    }

private:
    Philox4x32::Key key_;
};

}  // namespace mecaoi

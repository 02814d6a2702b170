#pragma once

#include <cstdint>
#include <random>

namespace sumsetlab {

/// Deterministic generator used by every randomized stage.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, seeded with the 64-bit seed directly. Bounded draws use
/// rejection sampling on the raw 64-bit output (no std distributions, whose
/// algorithms differ between standard libraries), so a seed determines the
/// same stream on every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (true) {
            const std::uint64_t x = engine_();
            if (x >= threshold)
                return x % bound;
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace sumsetlab

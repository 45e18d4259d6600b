#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ocl {

/// Independent sub-streams carved out of one realization's handle.
enum class Substream : std::uint32_t { events = 0, values = 1, auxiliary = 2 };

/// Identifies the random stream of one realization.
///
/// The engine state is derived from (seed, stream_index, substream) only, so a
/// realization draws the same numbers whatever thread runs it.
struct RngHandle {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;

    friend bool operator==(const RngHandle&, const RngHandle&) = default;
};

/// Thin wrapper over std::mt19937_64 with portable variate transforms.
///
/// The std:: distributions are implementation-defined; these transforms are
/// not, so streams are bit-identical across standard libraries.
class Rng {
public:
    Rng(RngHandle handle, Substream sub);
    explicit Rng(std::uint64_t seed) : Rng(RngHandle{seed, 0}, Substream::auxiliary) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    double exponential(double rate);

    /// Standard normal by Box-Muller; always consumes two uniforms.
    double normal();

    /// +1 or -1 with equal probability.
    double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace ocl

#include "ocl/rng.hpp"

#include <cmath>
#include <numbers>

namespace ocl {

namespace {

std::mt19937_64 seeded_engine(RngHandle h, Substream sub) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(h.seed), static_cast<std::uint32_t>(h.seed >> 32),
        static_cast<std::uint32_t>(h.stream_index),
        static_cast<std::uint32_t>(h.stream_index >> 32),
        static_cast<std::uint32_t>(sub)};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(RngHandle handle, Substream sub) : engine_(seeded_engine(handle, sub)) {}

double Rng::exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ocl

#pragma once

#include "ocl/params.hpp"
#include "ocl/rng.hpp"

#include <cmath>

namespace ocl {

/// Zero-mean draw with variance params.sigma2 from the configured law.
inline double sample_value(const SystemParams& params, Rng& rng) {
    if (params.value_dist == ValueDist::rademacher)
        return rng.sign() * std::sqrt(params.sigma2);
    return rng.normal() * std::sqrt(params.sigma2);
}

}  // namespace ocl

#pragma once

#include <cmath>

#include "fedfraud/common/rng.hpp"
#include "fedfraud/datagen/types.hpp"

namespace fedfraud::datagen {

struct LogNormalParams {
    double mu = 0.0;
    double sigma_sq = 0.0;
};

// Converts the desired arithmetic moments (x_bar, sd_raw) into the underlying
// normal parameters: sigma^2 = ln(1 + sd^2/x_bar^2), mu = ln(x_bar) - sigma^2/2.
inline LogNormalParams lognormal_params(const LogNormalSpec& spec) {
    spec.validate();
    const double ratio = spec.sd_arith / spec.mean_arith;
    LogNormalParams p;
    p.sigma_sq = std::log1p(ratio * ratio);
    p.mu = std::log(spec.mean_arith) - 0.5 * p.sigma_sq;
    return p;
}

inline double sample_lognormal(Rng& rng, const LogNormalParams& p) {
    if (p.sigma_sq == 0.0) return std::exp(p.mu);
    return std::exp(rng.normal(p.mu, std::sqrt(p.sigma_sq)));
}

inline double sample_lognormal(Rng& rng, const LogNormalSpec& spec) {
    return sample_lognormal(rng, lognormal_params(spec));
}

}  // namespace fedfraud::datagen

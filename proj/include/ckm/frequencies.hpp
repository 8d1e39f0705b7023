#pragma once

#include <cstdint>

#include "ckm/types.hpp"

namespace ckm {

// Draws the m x n frequency matrix from spec.distribution. Gaussian rows are
// i.i.d. isotropic with per-coordinate variance 1/sigma2. AdaptedRadius rows
// are R * phi with phi uniform on the unit sphere and the radius R drawn by
// inverse-CDF from the density
//   p(R) ~ (sigma2 R^2 + sigma2^2 R^4 / 4)^(1/2) exp(-sigma2 R^2 / 2)
// tabulated on 10^4 points over [0, 10/sigma]. Deterministic given spec.seed.
FrequencyMatrix sample_frequencies(const FrequencySpec& spec, Index m, Index n);

// Scale estimate from a data subsample: mean squared Euclidean distance over
// 1000 random point pairs, divided by 2n. Scaling the points by s scales the
// estimate by s^2. Throws "degenerate subsample" when every sampled pair
// coincides; callers may fall back to sigma2 = 1.
double estimate_sigma2(const Dataset& subsample, std::uint64_t pair_seed = 0x51a9c2);

}  // namespace ckm

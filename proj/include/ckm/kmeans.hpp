#pragma once

#include <vector>

#include "ckm/rng.hpp"
#include "ckm/types.hpp"

namespace ckm {

// Classical Lloyd-Max: alternate nearest-centroid assignment (ties to the
// lower index) and mean updates until assignments stop changing or max_iters
// is reached. Empty clusters are re-seeded from the point farthest from its
// assigned centroid, so SSE never increases. Weights are cluster shares.
// When sse_trace is given it receives the assignment SSE of every iteration.
CentroidModel lloyd_max(const Dataset& data, const Matrix& init, int max_iters = 300,
                        std::vector<double>* sse_trace = nullptr);

// k-means++ seeding: first seed uniform, every next one drawn among the
// not-yet-chosen rows with probability proportional to the squared distance
// to the nearest chosen seed (uniform fallback when all distances vanish).
Matrix kmeanspp_seed(const Dataset& data, Index k, Rng& rng);

// K starting centroids per strategy: Range draws each inside the data box,
// Sample picks K rows, KPP runs kmeanspp_seed.
Matrix lloyd_init(const Dataset& data, Index k, InitStrategy strategy, Rng& rng);

}  // namespace ckm

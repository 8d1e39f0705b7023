#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ckm/types.hpp"

namespace ckm {

// Nearest-centroid labels, ties to the lower centroid index.
std::vector<std::uint32_t> assign_labels(const Dataset& data, const CentroidModel& model);

// Sum over points of the squared distance to the nearest centroid.
double sse(const Dataset& data, const CentroidModel& model);

// sse(candidate) / sse(reference); throws when the reference SSE is zero.
double relative_sse(const CentroidModel& candidate, const CentroidModel& reference,
                    const Dataset& data);

// Adjusted Rand index (Hubert-Arabie form): 1 for identical partitions up to
// relabeling, 0 in expectation for independent ones.
double ari(std::span<const std::uint32_t> labels_a, std::span<const std::uint32_t> labels_b);

}  // namespace ckm

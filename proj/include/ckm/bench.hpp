#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ckm/types.hpp"

namespace ckm {

// Worker count for parallel sections: `requested` (0 = hardware count),
// capped by the CKM_THREADS environment variable when set.
int thread_budget(int requested = 0);

// Runs fn(0..count-1) on up to `threads` workers. Tasks must be independent;
// the first exception thrown by any task is rethrown on the caller.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

enum class Method { CKM, Lloyd };

// One independent solver run. CKM runs carry the sketch-domain residual
// norm; Lloyd runs carry their SSE.
struct ReplicateRun {
  CentroidModel model;
  double sketch_residual = 0.0;
  std::optional<double> sse;
};

// Index of the best run: lowest sketch residual for CKM, lowest SSE for
// Lloyd. Ties go to the lowest run index. Throws on an empty list.
std::size_t select_best_replicate(Method method, std::span<const ReplicateRun> runs);

// Runs `replicates` independent CKM decodes (seed = base.seed + index,
// optionally concurrent) and keeps the one with the smallest residual.
CentroidModel solve_replicates(const Sketch& sketch, const SolverConfig& base,
                               int replicates, const Dataset* data = nullptr,
                               int threads = 1);

// Same protocol for Lloyd-Max: independent seeded inits, keep lowest SSE.
CentroidModel lloyd_replicates(const Dataset& data, Index k, InitStrategy init,
                               int replicates, std::uint64_t seed,
                               int max_iters = 300, int threads = 1);

}  // namespace ckm

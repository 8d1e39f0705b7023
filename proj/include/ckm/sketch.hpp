#pragma once

#include <memory>

#include "ckm/types.hpp"

namespace ckm {

// Running, unnormalized sketch state. Single-owner mutable: absorb chunks
// into one instance, or sketch shards independently and merge. Dividing by
// the count happens only in finalize.
struct PartialSketch {
  explicit PartialSketch(std::shared_ptr<const FrequencyMatrix> freq);

  ComplexVector weighted_sum;  // sum over absorbed points of e^{-i w_j.x}
  std::uint64_t count = 0;
  Bounds bounds;  // running box; empty state holds (+inf, -inf)
  std::shared_ptr<const FrequencyMatrix> freq;
};

// Sk(Y, beta)_j = sum_l beta_l e^{-i w_j . y_l}. Weights must be finite and
// non-negative; point dimension must match W.
ComplexVector sketch_points(const Eigen::Ref<const Matrix>& points,
                            const Eigen::Ref<const Vector>& weights,
                            const FrequencyMatrix& W);

// Adds a chunk of points (unit weight each) into the running state.
void absorb(PartialSketch& state, const Eigen::Ref<const Matrix>& chunk);

// Combines two shard states: sums and counts add, bounds take the
// componentwise envelope. Throws on mismatched frequency matrices.
PartialSketch merge(PartialSketch a, const PartialSketch& b);

// Normalizes by the point count, producing the decoder's input.
Sketch finalize(const PartialSketch& state);

// One-shot convenience: shard the dataset, sketch shards (in parallel when
// threads > 1), merge in shard order, finalize. `threads` = 0 picks the
// hardware count capped by the CKM_THREADS environment variable.
Sketch compute_sketch(const Dataset& dataset,
                      std::shared_ptr<const FrequencyMatrix> freq,
                      std::size_t shards = 1, std::size_t threads = 1);

}  // namespace ckm

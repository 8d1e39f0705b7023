#include "ckm/sketch.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ckm/bench.hpp"

namespace ckm {
namespace {

// Rows per dense phase block; keeps the m x block trig temporaries around a
// few MB for m ~ 1000.
constexpr Index kBlockRows = 1024;

void check_dims(Index point_dim, const FrequencyMatrix& W) {
  if (point_dim != W.dim()) {
    throw std::invalid_argument("point dimension does not match frequency matrix");
  }
}

void accumulate_block(const Eigen::Ref<const Matrix>& block,
                      const Vector& weights, const FrequencyMatrix& W,
                      Vector& acc_re, Vector& acc_im) {
  // Phase block: theta(j, l) = w_j . y_l, computed as one dense product.
  const Matrix theta = W.W * block.transpose();
  acc_re.noalias() += theta.array().cos().matrix() * weights;
  acc_im.noalias() -= theta.array().sin().matrix() * weights;
}

ComplexVector assemble(const Vector& re, const Vector& im) {
  ComplexVector out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

}  // namespace

PartialSketch::PartialSketch(std::shared_ptr<const FrequencyMatrix> freq_in)
    : weighted_sum(ComplexVector::Zero(freq_in ? freq_in->m() : 0)),
      freq(std::move(freq_in)) {
  if (!freq) throw std::invalid_argument("partial sketch needs a frequency matrix");
  bounds.lower = Vector::Constant(freq->dim(), std::numeric_limits<double>::infinity());
  bounds.upper = Vector::Constant(freq->dim(), -std::numeric_limits<double>::infinity());
}

ComplexVector sketch_points(const Eigen::Ref<const Matrix>& points,
                            const Eigen::Ref<const Vector>& weights,
                            const FrequencyMatrix& W) {
  check_dims(points.cols(), W);
  if (points.rows() != weights.size()) {
    throw std::invalid_argument("one weight per point required");
  }
  if (!weights.allFinite() || (weights.array() < 0).any()) {
    throw std::invalid_argument("weights must be finite and non-negative");
  }
  Vector acc_re = Vector::Zero(W.m());
  Vector acc_im = Vector::Zero(W.m());
  for (Index start = 0; start < points.rows(); start += kBlockRows) {
    const Index rows = std::min(kBlockRows, points.rows() - start);
    accumulate_block(points.middleRows(start, rows),
                     weights.segment(start, rows), W, acc_re, acc_im);
  }
  return assemble(acc_re, acc_im);
}

void absorb(PartialSketch& state, const Eigen::Ref<const Matrix>& chunk) {
  if (chunk.rows() == 0) return;
  check_dims(chunk.cols(), *state.freq);
  Vector acc_re = Vector::Zero(state.freq->m());
  Vector acc_im = Vector::Zero(state.freq->m());
  for (Index start = 0; start < chunk.rows(); start += kBlockRows) {
    const Index rows = std::min(kBlockRows, chunk.rows() - start);
    accumulate_block(chunk.middleRows(start, rows), Vector::Ones(rows),
                     *state.freq, acc_re, acc_im);
  }
  state.weighted_sum.real() += acc_re;
  state.weighted_sum.imag() += acc_im;
  state.count += static_cast<std::uint64_t>(chunk.rows());
  state.bounds.lower = state.bounds.lower.cwiseMin(chunk.colwise().minCoeff().transpose());
  state.bounds.upper = state.bounds.upper.cwiseMax(chunk.colwise().maxCoeff().transpose());
}

PartialSketch merge(PartialSketch a, const PartialSketch& b) {
  const bool same_freq =
      a.freq == b.freq ||
      (a.freq->spec.distribution == b.freq->spec.distribution &&
       a.freq->spec.sigma2 == b.freq->spec.sigma2 &&
       a.freq->spec.seed == b.freq->spec.seed && a.freq->W == b.freq->W);
  if (!same_freq) throw std::invalid_argument("cannot merge sketches with different frequencies");
  a.weighted_sum += b.weighted_sum;
  a.count += b.count;
  a.bounds.lower = a.bounds.lower.cwiseMin(b.bounds.lower);
  a.bounds.upper = a.bounds.upper.cwiseMax(b.bounds.upper);
  return a;
}

Sketch finalize(const PartialSketch& state) {
  if (state.count == 0) throw std::invalid_argument("cannot finalize an empty sketch");
  Sketch sketch;
  sketch.values = state.weighted_sum / static_cast<double>(state.count);
  sketch.bounds = state.bounds;
  sketch.count = state.count;
  sketch.freq = *state.freq;
  return sketch;
}

Sketch compute_sketch(const Dataset& dataset,
                      std::shared_ptr<const FrequencyMatrix> freq,
                      std::size_t shards, std::size_t threads) {
  if (dataset.size() == 0) throw std::invalid_argument("empty dataset");
  if (shards == 0) shards = 1;
  shards = std::min(shards, static_cast<std::size_t>(dataset.size()));

  std::vector<PartialSketch> parts;
  parts.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) parts.emplace_back(freq);

  const Index total = dataset.size();
  const Index per_shard = (total + static_cast<Index>(shards) - 1) / static_cast<Index>(shards);
  parallel_for(shards, thread_budget(static_cast<int>(threads)), [&](std::size_t s) {
    const Index start = static_cast<Index>(s) * per_shard;
    const Index rows = std::min(per_shard, total - start);
    if (rows > 0) absorb(parts[s], dataset.points.middleRows(start, rows));
  });

  PartialSketch combined = std::move(parts.front());
  for (std::size_t s = 1; s < shards; ++s) combined = merge(std::move(combined), parts[s]);
  return finalize(combined);
}

}  // namespace ckm

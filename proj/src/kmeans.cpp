#include "ckm/kmeans.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

#include "ckm/types.hpp"

namespace ckm {
namespace {

struct Assignment {
  std::vector<Index> labels;
  std::vector<Index> counts;
  Vector point_cost;  // squared distance to the assigned centroid
  double sse = 0.0;
};

Assignment assign_points(const Dataset& data, const Matrix& centroids) {
  const Index n_points = data.size();
  const Index k = centroids.rows();
  const Vector point_norms = data.points.rowwise().squaredNorm();
  const Vector centroid_norms = centroids.rowwise().squaredNorm();
  const Matrix cross = data.points * centroids.transpose();  // N x K

  Assignment out;
  out.labels.resize(static_cast<std::size_t>(n_points));
  out.counts.assign(static_cast<std::size_t>(k), 0);
  out.point_cost.resize(n_points);
  for (Index i = 0; i < n_points; ++i) {
    Index best = 0;
    double best_partial = centroid_norms[0] - 2.0 * cross(i, 0);
    for (Index c = 1; c < k; ++c) {
      const double partial = centroid_norms[c] - 2.0 * cross(i, c);
      if (partial < best_partial) {
        best_partial = partial;
        best = c;
      }
    }
    out.labels[static_cast<std::size_t>(i)] = best;
    ++out.counts[static_cast<std::size_t>(best)];
    out.point_cost[i] = std::max(point_norms[i] + best_partial, 0.0);
  }
  out.sse = out.point_cost.sum();
  return out;
}

// Re-seed every empty cluster from the point currently farthest from its
// assigned centroid.
void repair_empty_clusters(const Dataset& data, Matrix& centroids, Assignment& asn) {
  const Index k = centroids.rows();
  for (Index c = 0; c < k; ++c) {
    if (asn.counts[static_cast<std::size_t>(c)] > 0) continue;
    Index farthest = -1;
    double worst = -1.0;
    for (Index i = 0; i < data.size(); ++i) {
      const Index owner = asn.labels[static_cast<std::size_t>(i)];
      if (asn.counts[static_cast<std::size_t>(owner)] <= 1) continue;  // keep donors non-empty
      if (asn.point_cost[i] > worst) {
        worst = asn.point_cost[i];
        farthest = i;
      }
    }
    if (farthest < 0) continue;  // fewer distinct points than clusters
    const Index donor = asn.labels[static_cast<std::size_t>(farthest)];
    --asn.counts[static_cast<std::size_t>(donor)];
    ++asn.counts[static_cast<std::size_t>(c)];
    asn.labels[static_cast<std::size_t>(farthest)] = c;
    asn.sse -= asn.point_cost[farthest];
    asn.point_cost[farthest] = 0.0;
    centroids.row(c) = data.points.row(farthest);
  }
}

}  // namespace

CentroidModel lloyd_max(const Dataset& data, const Matrix& init, int max_iters,
                        std::vector<double>* sse_trace) {
  const Index k = init.rows();
  const Index n_points = data.size();
  if (k > n_points) throw std::invalid_argument("more clusters than points");
  if (init.cols() != data.dim()) throw std::invalid_argument("centroid dimension mismatch");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (sse_trace) sse_trace->clear();

  Matrix centroids = init;
  std::vector<Index> prev_labels;
  Assignment asn;
  for (int iter = 0; iter < max_iters; ++iter) {
    asn = assign_points(data, centroids);
    repair_empty_clusters(data, centroids, asn);
    if (sse_trace) sse_trace->push_back(asn.sse);
    if (asn.labels == prev_labels) break;
    prev_labels = asn.labels;

    Matrix sums = Matrix::Zero(k, data.dim());
    for (Index i = 0; i < n_points; ++i) {
      sums.row(asn.labels[static_cast<std::size_t>(i)]) += data.points.row(i);
    }
    for (Index c = 0; c < k; ++c) {
      if (asn.counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<double>(asn.counts[static_cast<std::size_t>(c)]);
      }
    }
  }

  Vector weights(k);
  for (Index c = 0; c < k; ++c) {
    weights[c] = static_cast<double>(asn.counts[static_cast<std::size_t>(c)]) /
                 static_cast<double>(n_points);
  }
  return CentroidModel{std::move(centroids), std::move(weights)};
}

Matrix kmeanspp_seed(const Dataset& data, Index k, Rng& rng) {
  const Index n_points = data.size();
  if (k > n_points) throw std::invalid_argument("more seeds than points");
  if (k < 1) throw std::invalid_argument("k must be at least 1");

  Matrix seeds(k, data.dim());
  std::vector<bool> chosen(static_cast<std::size_t>(n_points), false);
  const Index first = static_cast<Index>(rng.index(static_cast<std::size_t>(n_points)));
  seeds.row(0) = data.points.row(first);
  chosen[static_cast<std::size_t>(first)] = true;

  Vector d2 = Vector::Constant(n_points, std::numeric_limits<double>::infinity());
  for (Index s = 1; s < k; ++s) {
    for (Index i = 0; i < n_points; ++i) {
      const double dist = (data.points.row(i) - seeds.row(s - 1)).squaredNorm();
      if (dist < d2[i]) d2[i] = dist;
    }
    double total = 0.0;
    for (Index i = 0; i < n_points; ++i) {
      if (!chosen[static_cast<std::size_t>(i)]) total += d2[i];
    }
    Index pick = -1;
    if (total > 0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n_points; ++i) {
        if (chosen[static_cast<std::size_t>(i)]) continue;
        acc += d2[i];
        if (acc >= u) {
          pick = i;
          break;
        }
      }
    }
    if (pick < 0) {
      // All remaining distances vanish (duplicates): fall back to a uniform
      // draw over the unchosen rows.
      std::size_t remaining = 0;
      for (Index i = 0; i < n_points; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) ++remaining;
      }
      std::size_t target = rng.index(remaining);
      for (Index i = 0; i < n_points; ++i) {
        if (chosen[static_cast<std::size_t>(i)]) continue;
        if (target == 0) {
          pick = i;
          break;
        }
        --target;
      }
    }
    seeds.row(s) = data.points.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
  }
  return seeds;
}

Matrix lloyd_init(const Dataset& data, Index k, InitStrategy strategy, Rng& rng) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  switch (strategy) {
    case InitStrategy::Range: {
      const Bounds box = compute_bounds(data);
      Matrix init(k, data.dim());
      for (Index c = 0; c < k; ++c) {
        for (Index j = 0; j < data.dim(); ++j) {
          init(c, j) = rng.uniform(box.lower[j], box.upper[j]);
        }
      }
      return init;
    }
    case InitStrategy::Sample: {
      if (k > data.size()) throw std::invalid_argument("more seeds than points");
      Matrix init(k, data.dim());
      for (Index c = 0; c < k; ++c) {
        init.row(c) =
            data.points.row(static_cast<Index>(rng.index(static_cast<std::size_t>(data.size()))));
      }
      return init;
    }
    case InitStrategy::KPP:
      return kmeanspp_seed(data, k, rng);
  }
  throw std::invalid_argument("unknown init strategy");
}

}  // namespace ckm

#include "ckm/metrics.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace ckm {
namespace {

void check_dims(const Dataset& data, const CentroidModel& model) {
  if (data.dim() != model.dim()) {
    throw std::invalid_argument("data and centroid dimensions do not match");
  }
}

}  // namespace

std::vector<std::uint32_t> assign_labels(const Dataset& data, const CentroidModel& model) {
  check_dims(data, model);
  const Vector centroid_norms = model.centroids.rowwise().squaredNorm();
  const Matrix cross = data.points * model.centroids.transpose();
  std::vector<std::uint32_t> labels(static_cast<std::size_t>(data.size()));
  for (Index i = 0; i < data.size(); ++i) {
    Index best = 0;
    double best_partial = centroid_norms[0] - 2.0 * cross(i, 0);
    for (Index c = 1; c < model.k(); ++c) {
      const double partial = centroid_norms[c] - 2.0 * cross(i, c);
      if (partial < best_partial) {
        best_partial = partial;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best);
  }
  return labels;
}

double sse(const Dataset& data, const CentroidModel& model) {
  check_dims(data, model);
  const Vector centroid_norms = model.centroids.rowwise().squaredNorm();
  const Matrix cross = data.points * model.centroids.transpose();
  const Vector point_norms = data.points.rowwise().squaredNorm();
  double total = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    double best = centroid_norms[0] - 2.0 * cross(i, 0);
    for (Index c = 1; c < model.k(); ++c) {
      best = std::min(best, centroid_norms[c] - 2.0 * cross(i, c));
    }
    total += std::max(point_norms[i] + best, 0.0);
  }
  return total;
}

double relative_sse(const CentroidModel& candidate, const CentroidModel& reference,
                    const Dataset& data) {
  const double ref = sse(data, reference);
  if (!(ref > 0)) throw std::invalid_argument("degenerate reference");
  return sse(data, candidate) / ref;
}

double ari(std::span<const std::uint32_t> labels_a, std::span<const std::uint32_t> labels_b) {
  if (labels_a.size() != labels_b.size()) {
    throw std::invalid_argument("label vectors differ in length");
  }
  const std::size_t n = labels_a.size();
  if (n < 2) throw std::invalid_argument("ari needs at least two points");

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  std::map<std::uint32_t, double> rows;
  std::map<std::uint32_t, double> cols;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{labels_a[i], labels_b[i]}] += 1.0;
    rows[labels_a[i]] += 1.0;
    cols[labels_b[i]] += 1.0;
  }

  // Pair counts C(x, 2) from the contingency table.
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double same_both = 0.0;
  for (const auto& [key, count] : joint) same_both += choose2(count);
  double same_a = 0.0;
  for (const auto& [key, count] : rows) same_a += choose2(count);
  double same_b = 0.0;
  for (const auto& [key, count] : cols) same_b += choose2(count);

  const double all_pairs = choose2(static_cast<double>(n));
  const double expected = same_a * same_b / all_pairs;
  const double maximum = 0.5 * (same_a + same_b);
  if (maximum == expected) {
    // Both partitions all-singletons or all-one-cluster; they agree iff the
    // pair structure matches exactly.
    return 1.0;
  }
  return (same_both - expected) / (maximum - expected);
}

}  // namespace ckm

#include "ckm/types.hpp"

#include <stdexcept>
#include <utility>

namespace ckm {

Dataset validate_dataset(Matrix points, std::vector<std::uint32_t> labels) {
  if (points.rows() == 0) {
    throw std::invalid_argument("empty dataset");
  }
  if (points.cols() == 0) {
    throw std::invalid_argument("dataset has zero dimensions");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("dataset contains a non-finite coordinate");
  }
  if (!labels.empty() &&
      static_cast<Index>(labels.size()) != points.rows()) {
    throw std::invalid_argument("label vector length does not match point count");
  }
  return Dataset{std::move(points), std::move(labels)};
}

Bounds compute_bounds(const Dataset& dataset) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("empty dataset");
  }
  return Bounds{dataset.points.colwise().minCoeff().transpose(),
                dataset.points.colwise().maxCoeff().transpose()};
}

}  // namespace ckm

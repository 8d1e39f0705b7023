#include "ckm/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "ckm/rng.hpp"

namespace ckm {

GmmSample gen_gmm_sample(const GmmGenConfig& config) {
  if (config.k < 1 || config.dim < 1 || config.count < 1) {
    throw std::invalid_argument("counts must be at least 1");
  }
  if (!(config.separation > 0)) throw std::invalid_argument("separation must be positive");

  Rng rng(config.seed);
  const double mean_scale = std::sqrt(
      config.separation * std::pow(static_cast<double>(config.k),
                                   1.0 / static_cast<double>(config.dim)));

  Matrix means(config.k, config.dim);
  for (Index c = 0; c < config.k; ++c) {
    for (Index j = 0; j < config.dim; ++j) means(c, j) = mean_scale * rng.normal();
  }

  Matrix points(config.count, config.dim);
  std::vector<std::uint32_t> labels(static_cast<std::size_t>(config.count));
  for (Index i = 0; i < config.count; ++i) {
    const auto component = rng.index(static_cast<std::size_t>(config.k));
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(component);
    for (Index j = 0; j < config.dim; ++j) {
      points(i, j) = means(static_cast<Index>(component), j) + rng.normal();
    }
  }
  return GmmSample{validate_dataset(std::move(points), std::move(labels)),
                   std::move(means)};
}

Dataset gen_gmm(const GmmGenConfig& config) { return gen_gmm_sample(config).data; }

}  // namespace ckm

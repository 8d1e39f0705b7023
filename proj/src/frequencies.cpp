#include "ckm/frequencies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ckm/rng.hpp"

namespace ckm {
namespace {

constexpr int kRadiusTableSize = 10000;

// Inverse-CDF table for the adapted-radius density on [0, 10/sigma].
struct RadiusTable {
  std::vector<double> r;
  std::vector<double> cdf;

  explicit RadiusTable(double sigma2) {
    const double sigma = std::sqrt(sigma2);
    const double r_max = 10.0 / sigma;
    r.resize(kRadiusTableSize);
    cdf.resize(kRadiusTableSize);
    std::vector<double> density(kRadiusTableSize);
    for (int i = 0; i < kRadiusTableSize; ++i) {
      const double ri = r_max * static_cast<double>(i) / (kRadiusTableSize - 1);
      const double r2 = sigma2 * ri * ri;
      r[i] = ri;
      density[i] = std::sqrt(r2 + r2 * r2 / 4.0) * std::exp(-r2 / 2.0);
    }
    cdf[0] = 0.0;
    for (int i = 1; i < kRadiusTableSize; ++i) {
      cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * (r[i] - r[i - 1]);
    }
    const double total = cdf.back();
    for (double& c : cdf) c /= total;
  }

  double sample(double u) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return r.front();
    if (it == cdf.end()) return r.back();
    const auto hi = static_cast<std::size_t>(it - cdf.begin());
    const std::size_t lo = hi - 1;
    const double span = cdf[hi] - cdf[lo];
    const double frac = span > 0 ? (u - cdf[lo]) / span : 0.0;
    return r[lo] + frac * (r[hi] - r[lo]);
  }
};

}  // namespace

FrequencyMatrix sample_frequencies(const FrequencySpec& spec, Index m, Index n) {
  if (m < 1 || n < 1) throw std::invalid_argument("frequency matrix needs m >= 1 and n >= 1");
  if (!(spec.sigma2 > 0)) throw std::invalid_argument("sigma2 must be positive");

  Rng rng(spec.seed);
  Matrix W(m, n);
  if (spec.distribution == FreqDistribution::Gaussian) {
    const double inv_sigma = 1.0 / std::sqrt(spec.sigma2);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) W(i, j) = rng.normal() * inv_sigma;
    }
  } else {
    const RadiusTable table(spec.sigma2);
    Vector direction(n);
    for (Index i = 0; i < m; ++i) {
      double norm = 0.0;
      do {
        for (Index j = 0; j < n; ++j) direction[j] = rng.normal();
        norm = direction.norm();
      } while (norm < 1e-300);
      const double radius = table.sample(rng.uniform());
      W.row(i) = (radius / norm) * direction.transpose();
    }
  }
  return FrequencyMatrix{std::move(W), spec};
}

double estimate_sigma2(const Dataset& subsample, std::uint64_t pair_seed) {
  const Index n_points = subsample.size();
  if (n_points < 2) throw std::invalid_argument("degenerate subsample");

  constexpr int kPairs = 1000;
  Rng rng(pair_seed);
  double total = 0.0;
  for (int p = 0; p < kPairs; ++p) {
    const auto i = rng.index(static_cast<std::size_t>(n_points));
    std::size_t j;
    do {
      j = rng.index(static_cast<std::size_t>(n_points));
    } while (j == i);
    total += (subsample.points.row(static_cast<Index>(i)) -
              subsample.points.row(static_cast<Index>(j)))
                 .squaredNorm();
  }
  const double mean_sq_dist = total / kPairs;
  if (mean_sq_dist <= 0.0) throw std::invalid_argument("degenerate subsample");
  return mean_sq_dist / (2.0 * static_cast<double>(subsample.dim()));
}

}  // namespace ckm

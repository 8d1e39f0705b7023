#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ckm/frequencies.hpp"
#include "ckm/types.hpp"
#include "test_util.hpp"

using namespace ckm;

namespace {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace

TEST_CASE("sampling is deterministic for a fixed spec") {
  const FrequencySpec spec{FreqDistribution::Gaussian, 1.0, 42};
  const FrequencyMatrix a = sample_frequencies(spec, 4, 2);
  const FrequencyMatrix b = sample_frequencies(spec, 4, 2);
  CHECK(a.W == b.W);

  const FrequencySpec adapted{FreqDistribution::AdaptedRadius, 2.5, 42};
  CHECK(sample_frequencies(adapted, 6, 3).W == sample_frequencies(adapted, 6, 3).W);
}

TEST_CASE("gaussian scale equivariance in sigma2") {
  const FrequencyMatrix base = sample_frequencies({FreqDistribution::Gaussian, 1.0, 9}, 8, 3);
  const FrequencyMatrix scaled = sample_frequencies({FreqDistribution::Gaussian, 4.0, 9}, 8, 3);
  CHECK(scaled.W == (base.W * 0.5).eval());
}

TEST_CASE("gaussian entries have variance 1/sigma2") {
  const FrequencyMatrix freq =
      sample_frequencies({FreqDistribution::Gaussian, 1.0, 123}, 100000, 1);
  const double mean = freq.W.mean();
  const double var = (freq.W.array() - mean).square().mean();
  CHECK(var > 0.98);
  CHECK(var < 1.02);
}

TEST_CASE("gaussian entries pass a KS normality test on most seeds") {
  int passes = 0;
  for (unsigned seed = 0; seed < 10; ++seed) {
    const FrequencyMatrix freq =
        sample_frequencies({FreqDistribution::Gaussian, 2.0, seed}, 2500, 4);
    const double sigma = std::sqrt(2.0);
    std::vector<double> samples;
    samples.reserve(10000);
    for (Index i = 0; i < freq.W.rows(); ++i) {
      for (Index j = 0; j < freq.W.cols(); ++j) samples.push_back(freq.W(i, j) * sigma);
    }
    const double d = ks_statistic(std::move(samples), standard_normal_cdf);
    const double critical = 1.62762 / std::sqrt(10000.0);  // alpha = 0.01
    if (d < critical) ++passes;
  }
  CHECK(passes >= 8);
}

TEST_CASE("adapted radius rows are radius times a unit direction") {
  const FrequencyMatrix freq =
      sample_frequencies({FreqDistribution::AdaptedRadius, 1.7, 5}, 500, 6);
  for (Index i = 0; i < freq.m(); ++i) {
    const double radius = freq.W.row(i).norm();
    CHECK(radius >= 0.0);
    CHECK(radius <= 10.0 / std::sqrt(1.7) + 1e-9);
    if (radius > 0) {
      CHECK(std::abs(freq.W.row(i).norm() / radius - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("adapted radius magnitudes follow the tabulated density") {
  // Independent oracle: integrate the radius density with Simpson's rule on
  // a finer grid than the sampler's table, then KS-test the row norms.
  const double sigma2 = 2.0;
  const double r_max = 10.0 / std::sqrt(sigma2);
  const int n_grid = 40001;
  std::vector<double> grid(n_grid), pdf(n_grid), cdf(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double r = r_max * static_cast<double>(i) / (n_grid - 1);
    const double r2 = sigma2 * r * r;
    grid[i] = r;
    pdf[i] = std::sqrt(r2 + r2 * r2 / 4.0) * std::exp(-r2 / 2.0);
  }
  cdf[0] = 0.0;
  for (int i = 1; i < n_grid; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (pdf[i] + pdf[i - 1]) * (grid[i] - grid[i - 1]);
  }
  for (double& c : cdf) c /= cdf.back();
  const auto radius_cdf = [&](double r) {
    const auto it = std::upper_bound(grid.begin(), grid.end(), r);
    if (it == grid.begin()) return 0.0;
    if (it == grid.end()) return 1.0;
    const auto hi = static_cast<std::size_t>(it - grid.begin());
    const double frac = (r - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return cdf[hi - 1] + frac * (cdf[hi] - cdf[hi - 1]);
  };

  int passes = 0;
  for (unsigned seed = 0; seed < 10; ++seed) {
    const FrequencyMatrix freq =
        sample_frequencies({FreqDistribution::AdaptedRadius, sigma2, seed}, 4000, 3);
    std::vector<double> radii;
    radii.reserve(4000);
    for (Index i = 0; i < freq.m(); ++i) radii.push_back(freq.W.row(i).norm());
    const double d = ks_statistic(std::move(radii), radius_cdf);
    const double critical = 1.62762 / std::sqrt(4000.0);
    if (d < critical) ++passes;
  }
  CHECK(passes >= 8);
}

TEST_CASE("estimate_sigma2 rejects a repeated point") {
  Matrix pts(5, 2);
  for (Index i = 0; i < 5; ++i) pts.row(i) << 1.5, -2.0;
  CHECK_THROWS_WITH_AS(estimate_sigma2(validate_dataset(pts)), "degenerate subsample",
                       std::invalid_argument);
}

TEST_CASE("estimate_sigma2 scales quadratically with the data") {
  const Dataset data = validate_dataset(test::random_matrix(300, 4, 21));
  const Dataset scaled = validate_dataset((data.points * 3.0).eval());
  const double base = estimate_sigma2(data);
  const double big = estimate_sigma2(scaled);
  CHECK(big == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("estimate_sigma2 recovers the scale of a unit gaussian") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Dataset data = validate_dataset(test::random_matrix(2000, 10, 100 + seed));
    const double estimate = estimate_sigma2(data, seed);
    CHECK(estimate > 0.2);
    CHECK(estimate < 5.0);
  }
}

TEST_CASE("sample_frequencies rejects bad shapes") {
  CHECK_THROWS_AS(sample_frequencies({FreqDistribution::Gaussian, 1.0, 0}, 0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_frequencies({FreqDistribution::Gaussian, 1.0, 0}, 2, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_frequencies({FreqDistribution::Gaussian, -1.0, 0}, 2, 2),
                  std::invalid_argument);
}

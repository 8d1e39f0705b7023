#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>
#include <random>

#include "ckm/frequencies.hpp"
#include "ckm/io.hpp"
#include "ckm/sketch.hpp"
#include "test_util.hpp"

using namespace ckm;

namespace {

std::shared_ptr<const FrequencyMatrix> gaussian_freq(Index m, Index n, std::uint64_t seed,
                                                     double sigma2 = 1.0) {
  return std::make_shared<FrequencyMatrix>(
      sample_frequencies({FreqDistribution::Gaussian, sigma2, seed}, m, n));
}

}  // namespace

TEST_CASE("a point at the origin sketches to all ones") {
  const auto freq = gaussian_freq(16, 3, 1);
  Matrix pts = Matrix::Zero(1, 3);
  const ComplexVector z = sketch_points(pts, Vector::Ones(1), *freq);
  for (Index j = 0; j < z.size(); ++j) {
    CHECK(z[j].real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z[j].imag() == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("two symmetric points at frequency pi cancel to -1") {
  FrequencyMatrix freq;
  freq.W.resize(1, 1);
  freq.W(0, 0) = std::numbers::pi;
  Matrix pts(2, 1);
  pts << 1.0, -1.0;
  Vector w(2);
  w << 0.5, 0.5;
  const ComplexVector z = sketch_points(pts, w, freq);
  CHECK(z[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(z[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sketch_points matches the naive complex sum") {
  const auto freq = gaussian_freq(37, 4, 2);
  const Matrix pts = test::random_matrix(211, 4, 3);
  Vector w = test::random_vector(211, 4).cwiseAbs();
  const ComplexVector got = sketch_points(pts, w, *freq);
  const ComplexVector want = test::naive_sketch(pts, w, freq->W);
  CHECK(test::relative_error(got, want) <= 1e-12);
}

TEST_CASE("uniform-weight sketches have modulus at most one") {
  const auto freq = gaussian_freq(1000, 2, 5);
  const Dataset data = validate_dataset(test::random_matrix(300000, 2, 6, 2.0));
  const Sketch sketch = compute_sketch(data, freq, 4, 2);
  for (Index j = 0; j < sketch.values.size(); ++j) {
    CHECK(std::abs(sketch.values[j]) <= 1.0 + 1e-9);
  }
}

TEST_CASE("absorbing an empty chunk changes nothing") {
  const auto freq = gaussian_freq(8, 2, 7);
  PartialSketch state(freq);
  absorb(state, test::random_matrix(5, 2, 8));
  const ComplexVector before = state.weighted_sum;
  Matrix empty(0, 2);
  absorb(state, empty);
  CHECK(state.weighted_sum == before);
  CHECK(state.count == 5);
}

TEST_CASE("absorbing one point stores its atom values") {
  const auto freq = gaussian_freq(8, 2, 9);
  PartialSketch state(freq);
  Matrix one = test::random_matrix(1, 2, 10);
  absorb(state, one);
  CHECK(state.count == 1);
  const ComplexVector want = test::naive_sketch(one, Vector::Ones(1), freq->W);
  CHECK(test::relative_error(state.weighted_sum, want) <= 1e-12);
  CHECK(state.bounds.lower == one.row(0).transpose());
  CHECK(state.bounds.upper == one.row(0).transpose());
}

TEST_CASE("chunked absorption matches a single pass") {
  const auto freq = gaussian_freq(33, 3, 11);
  const Matrix pts = test::random_matrix(4001, 3, 12);

  PartialSketch whole(freq);
  absorb(whole, pts);

  PartialSketch chunked(freq);
  absorb(chunked, pts.topRows(1500));
  absorb(chunked, pts.middleRows(1500, 1700));
  absorb(chunked, pts.bottomRows(801));

  CHECK(chunked.count == whole.count);
  CHECK(test::relative_error(chunked.weighted_sum, whole.weighted_sum) <= 1e-12);
  CHECK(chunked.bounds.lower == whole.bounds.lower);
  CHECK(chunked.bounds.upper == whole.bounds.upper);
}

TEST_CASE("merge has the empty sketch as identity and commutes") {
  const auto freq = gaussian_freq(21, 2, 13);
  PartialSketch a(freq);
  absorb(a, test::random_matrix(100, 2, 14));
  PartialSketch b(freq);
  absorb(b, test::random_matrix(57, 2, 15));

  const PartialSketch with_empty = merge(a, PartialSketch(freq));
  CHECK(with_empty.weighted_sum == a.weighted_sum);
  CHECK(with_empty.count == a.count);
  CHECK(with_empty.bounds.lower == a.bounds.lower);

  const PartialSketch ab = merge(a, b);
  const PartialSketch ba = merge(b, a);
  CHECK(test::relative_error(ab.weighted_sum, ba.weighted_sum) <= 1e-12);
  CHECK(ab.count == ba.count);
  CHECK(ab.bounds.lower == ba.bounds.lower);
  CHECK(ab.bounds.upper == ba.bounds.upper);
}

TEST_CASE("merge is associative within tolerance") {
  const auto freq = gaussian_freq(19, 2, 16);
  PartialSketch parts[3] = {PartialSketch(freq), PartialSketch(freq), PartialSketch(freq)};
  for (int s = 0; s < 3; ++s) absorb(parts[s], test::random_matrix(50 + s, 2, 17 + s));
  const PartialSketch left = merge(merge(parts[0], parts[1]), parts[2]);
  const PartialSketch right = merge(parts[0], merge(parts[1], parts[2]));
  CHECK(test::relative_error(left.weighted_sum, right.weighted_sum) <= 1e-12);
  CHECK(left.count == right.count);
}

TEST_CASE("merging different frequency matrices is an error") {
  PartialSketch a(gaussian_freq(8, 2, 18));
  PartialSketch b(gaussian_freq(8, 2, 19));
  CHECK_THROWS_AS(merge(a, b), std::invalid_argument);
}

TEST_CASE("sharded sketch equals the single-pass sketch") {
  const auto freq = gaussian_freq(64, 3, 20);
  const Dataset data = validate_dataset(test::random_matrix(10007, 3, 21));
  const Sketch whole = compute_sketch(data, freq, 1, 1);
  const Sketch sharded = compute_sketch(data, freq, 4, 2);
  CHECK(test::relative_error(sharded.values, whole.values) <= 1e-12);
  CHECK(sharded.count == whole.count);
  CHECK(sharded.bounds.lower == whole.bounds.lower);
  CHECK(sharded.bounds.upper == whole.bounds.upper);
}

TEST_CASE("finalize divides by the count") {
  const auto freq = gaussian_freq(12, 2, 22);
  const Matrix one = test::random_matrix(1, 2, 23);

  PartialSketch single(freq);
  absorb(single, one);
  const Sketch s1 = finalize(single);

  Matrix twice(2, 2);
  twice.row(0) = one.row(0);
  twice.row(1) = one.row(0);
  PartialSketch doubled(freq);
  absorb(doubled, twice);
  const Sketch s2 = finalize(doubled);

  CHECK(test::relative_error(s2.values, s1.values) <= 1e-12);
  CHECK(s1.count == 1);
  CHECK(s2.count == 2);
}

TEST_CASE("finalize rejects an empty state") {
  PartialSketch empty(gaussian_freq(4, 2, 24));
  CHECK_THROWS_AS(finalize(empty), std::invalid_argument);
}

TEST_CASE("gaussian data reproduces the gaussian characteristic function") {
  const Index n_points = 10000;
  const auto freq = gaussian_freq(64, 2, 25);
  const Dataset data = validate_dataset(test::random_matrix(n_points, 2, 26));
  const Sketch sketch = compute_sketch(data, freq);
  const double tol = 5.0 / std::sqrt(static_cast<double>(n_points));
  for (Index j = 0; j < sketch.values.size(); ++j) {
    const double want = std::exp(-freq->W.row(j).squaredNorm() / 2.0);
    CHECK(std::abs(sketch.values[j] - std::complex<double>(want, 0.0)) <= tol);
  }
}

TEST_CASE("sketching is permutation invariant") {
  const auto freq = gaussian_freq(16, 2, 27);
  const Matrix pts = test::random_matrix(500, 2, 28);
  Matrix reversed(500, 2);
  for (Index i = 0; i < 500; ++i) reversed.row(i) = pts.row(499 - i);

  const Dataset a = validate_dataset(pts);
  const Dataset b = validate_dataset(reversed);
  CHECK(test::relative_error(compute_sketch(a, freq).values,
                             compute_sketch(b, freq).values) <= 1e-12);
}

TEST_CASE("finalized absorb equals uniform-weight sketch_points") {
  const auto freq = gaussian_freq(24, 3, 29);
  const Matrix pts = test::random_matrix(777, 3, 30);
  PartialSketch state(freq);
  absorb(state, pts);
  const Sketch sketch = finalize(state);
  const ComplexVector direct =
      sketch_points(pts, Vector::Constant(777, 1.0 / 777.0), *freq);
  CHECK(test::relative_error(sketch.values, direct) <= 1e-12);
}

TEST_CASE("sketch file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "ckm_test_sketch.ckms";
  const auto freq = std::make_shared<FrequencyMatrix>(
      sample_frequencies({FreqDistribution::AdaptedRadius, 2.25, 31}, 40, 3));
  const Dataset data = validate_dataset(test::random_matrix(321, 3, 32));
  const Sketch sketch = compute_sketch(data, freq);
  write_sketch(path, sketch);
  const Sketch back = read_sketch(path);
  CHECK(back.values == sketch.values);
  CHECK(back.freq.W == sketch.freq.W);
  CHECK(back.freq.spec.sigma2 == sketch.freq.spec.sigma2);
  CHECK(back.freq.spec.distribution == sketch.freq.spec.distribution);
  CHECK(back.freq.spec.seed == sketch.freq.spec.seed);
  CHECK(back.bounds.lower == sketch.bounds.lower);
  CHECK(back.bounds.upper == sketch.bounds.upper);
  CHECK(back.count == sketch.count);
  std::filesystem::remove(path);
}

TEST_CASE("dimension mismatch is rejected") {
  const auto freq = gaussian_freq(8, 3, 33);
  PartialSketch state(freq);
  CHECK_THROWS_AS(absorb(state, test::random_matrix(4, 2, 34)), std::invalid_argument);
  CHECK_THROWS_AS(
      sketch_points(test::random_matrix(4, 2, 35), Vector::Ones(4), *freq),
      std::invalid_argument);
}

TEST_CASE("negative weights are rejected") {
  const auto freq = gaussian_freq(8, 2, 36);
  Vector w = Vector::Ones(4);
  w[2] = -0.5;
  CHECK_THROWS_AS(sketch_points(test::random_matrix(4, 2, 37), w, *freq),
                  std::invalid_argument);
}

#pragma once

#include <complex>
#include <random>
#include <vector>

#include "ckm/types.hpp"

namespace ckm::test {

// Test-side data generator, independent of the library's Rng.
inline Matrix random_matrix(Index rows, Index cols, unsigned seed, double scale = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = dist(gen);
  }
  return out;
}

inline Vector random_vector(Index size, unsigned seed, double scale = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Vector out(size);
  for (Index i = 0; i < size; ++i) out[i] = dist(gen);
  return out;
}

inline ComplexVector random_complex_vector(Index size, unsigned seed, double scale = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  ComplexVector out(size);
  for (Index i = 0; i < size; ++i) out[i] = {dist(gen), dist(gen)};
  return out;
}

// Naive reference for the sketching operator: plain double loop over points
// and frequencies with std::polar.
inline ComplexVector naive_sketch(const Matrix& points, const Vector& weights,
                                  const Matrix& freq_rows) {
  ComplexVector out = ComplexVector::Zero(freq_rows.rows());
  for (Index j = 0; j < freq_rows.rows(); ++j) {
    std::complex<double> acc(0.0, 0.0);
    for (Index l = 0; l < points.rows(); ++l) {
      const double phase = freq_rows.row(j).dot(points.row(l));
      acc += weights[l] * std::polar(1.0, -phase);
    }
    out[j] = acc;
  }
  return out;
}

inline double relative_error(const ComplexVector& got, const ComplexVector& want) {
  const double denom = want.norm();
  return denom > 0 ? (got - want).norm() / denom : (got - want).norm();
}

}  // namespace ckm::test

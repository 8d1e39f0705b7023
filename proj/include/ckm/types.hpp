#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace ckm {

// Points and frequency matrices are row-major so that a row (one point, one
// frequency vector) is contiguous and file I/O is a straight copy.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// N points in n dimensions, optionally with ground-truth labels used only
// for evaluation.
struct Dataset {
  Matrix points;                      // N x n, rows are points
  std::vector<std::uint32_t> labels;  // empty, or one label per point

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
  bool has_labels() const { return !labels.empty(); }
};

// Checks finiteness, non-empty shape and label length; throws
// std::invalid_argument otherwise.
Dataset validate_dataset(Matrix points, std::vector<std::uint32_t> labels = {});

// Componentwise box l <= x <= u.
struct Bounds {
  Vector lower;
  Vector upper;

  Index dim() const { return lower.size(); }
  Vector clamp(Vector x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }
  bool contains(const Vector& x, double slack = 0.0) const {
    return (x.array() >= lower.array() - slack).all() &&
           (x.array() <= upper.array() + slack).all();
  }
};

// Componentwise min/max of the data, single pass. Throws on an empty dataset.
Bounds compute_bounds(const Dataset& dataset);

enum class FreqDistribution : std::uint8_t { Gaussian = 0, AdaptedRadius = 1 };

// Parameters of the frequency distribution Lambda.
struct FrequencySpec {
  FreqDistribution distribution = FreqDistribution::AdaptedRadius;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
};

// m frequency vectors, rows of W, drawn from the distribution in `spec`.
struct FrequencyMatrix {
  Matrix W;  // m x n
  FrequencySpec spec;

  Index m() const { return W.rows(); }
  Index dim() const { return W.cols(); }
};

// The compressed representation of a dataset: sampled characteristic
// function values plus the box bounds and point count gathered in the same
// pass. This is the only thing the decoder sees.
struct Sketch {
  ComplexVector values;  // length m, every entry has modulus <= 1
  Bounds bounds;
  std::uint64_t count = 0;
  FrequencyMatrix freq;
};

// K centroids with non-negative weights; weights sum to 1 once finalized.
struct CentroidModel {
  Matrix centroids;  // K x n
  Vector weights;    // length K

  Index k() const { return centroids.rows(); }
  Index dim() const { return centroids.cols(); }
};

enum class InitStrategy : std::uint8_t { Range = 0, Sample = 1, KPP = 2 };

struct SolverConfig {
  Index k = 1;
  InitStrategy init_strategy = InitStrategy::Range;
  int max_ascent_iters = 300;
  int max_descent_iters = 500;
  double grad_tol = 1e-8;  // scaled by sqrt(m) inside the solver
  double step_tol = 1e-9;
  std::uint64_t seed = 0;
};

}  // namespace ckm

#pragma once

#include <functional>

#include "ckm/rng.hpp"
#include "ckm/types.hpp"

namespace ckm {

// Knobs for the projected-gradient loops. The first line search starts at
// initial_step; later iterations reuse a spectral (Barzilai-Borwein)
// estimate, backtracked by `shrink` until the Armijo test passes.
struct AscentOptions {
  int max_iters = 300;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo_c = 1e-4;
  double grad_tol = 1e-6;
  double step_tol = 1e-9;
};

// Internal decoder state exposed to the per-iteration callback.
struct SolverState {
  ComplexVector residual;  // z_hat minus the current model's sketch
  Matrix support;          // current centroids, one per row
  Vector beta;             // weights from the last projection
  int iteration = 0;       // 1-based outer iteration
};

using IterationCallback = std::function<void(const SolverState&)>;

// Dictionary element: entry j is e^{-i w_j . c}. Euclidean norm is sqrt(m)
// for every c.
ComplexVector atom(const Eigen::Ref<const Vector>& c, const FrequencyMatrix& W);

// Re< atom(c)/sqrt(m), residual > with <u, v> = sum_j conj(u_j) v_j, and its
// exact derivative in c.
double correlation(const Eigen::Ref<const Vector>& c, const ComplexVector& residual,
                   const FrequencyMatrix& W);
Vector correlation_grad(const Eigen::Ref<const Vector>& c,
                        const ComplexVector& residual, const FrequencyMatrix& W);

// Projected gradient ascent of the correlation inside the box. The result
// stays in bounds and never correlates worse than the (clamped) start; this
// is a local maximizer only.
Vector maximize_c(const Vector& init, const ComplexVector& residual,
                  const FrequencyMatrix& W, const Bounds& bounds,
                  const AscentOptions& opts);

// min ||target - columns * beta||_2 with beta >= 0, solved by Lawson-Hanson
// active sets on the real-stacked (2m x p) system.
Vector nnls(const Eigen::MatrixXcd& columns, const ComplexVector& target,
            double tol = 1e-10);

// Keeps the k centroids with the largest beta, ties to the lower index;
// surviving rows stay in their original order. k >= |C| returns C unchanged.
Matrix hard_threshold(const Matrix& centroids, const Vector& beta, Index k);

// Step-4 projection: NNLS weights on unnormalized atoms against the sketch.
Vector project_weights(const Matrix& centroids, const Sketch& sketch);

// Cost ||target - sum_k alpha_k atom(c_k)||^2 of a weighted support; non-null
// grad_centroids / grad_alpha receive the exact derivatives.
double descent_cost(const Matrix& centroids, const Vector& alpha,
                    const ComplexVector& target, const FrequencyMatrix& W,
                    Matrix* grad_centroids = nullptr, Vector* grad_alpha = nullptr);

// Step-5 refinement: joint projected gradient descent of
// ||target - sum_k alpha_k atom(c_k)||^2 over centroids (kept in bounds) and
// weights (kept non-negative). The returned cost never exceeds the input's.
std::pair<Matrix, Vector> global_descent(Matrix centroids, Vector alpha,
                                         const ComplexVector& target,
                                         const FrequencyMatrix& W,
                                         const Bounds& bounds,
                                         const AscentOptions& opts);

// A fresh starting point for the step-1 ascent. Sample and KPP require the
// dataset; KPP draws proportional to the squared distance to the current
// support (uniform while the support is empty or the distances vanish).
Vector pick_init(InitStrategy strategy, const Bounds& bounds,
                 const Matrix& current_support, const Dataset* data, Rng& rng);

// The full decoder: 2K greedy iterations of atom search, hard thresholding
// once the support exceeds K, weight projection and global descent. Returns
// K centroids inside the sketch bounds with weights normalized to sum 1.
// Deterministic given config.seed.
CentroidModel ckm(const Sketch& sketch, const SolverConfig& config,
                  const Dataset* data = nullptr,
                  const IterationCallback& on_iteration = {});

// || sketch.values - sum_k alpha_k atom(c_k) ||_2 for a finished model; the
// replicate-selection criterion.
double sketch_residual_norm(const Sketch& sketch, const CentroidModel& model);

}  // namespace ckm

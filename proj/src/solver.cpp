#include "ckm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ckm {
namespace {

// Columns A*delta_c for each support row; normalized divides by sqrt(m) (the
// norm every Dirac atom shares).
Eigen::MatrixXcd atom_columns(const Matrix& centroids, const FrequencyMatrix& W,
                              bool normalized) {
  const Matrix theta = W.W * centroids.transpose();  // m x K
  Eigen::MatrixXcd cols(theta.rows(), theta.cols());
  cols.real() = theta.array().cos();
  cols.imag() = -theta.array().sin();
  if (normalized) cols /= std::sqrt(static_cast<double>(W.m()));
  return cols;
}

struct JointGrad {
  Matrix centroids;  // K x n
  Vector alpha;      // K
};

// Internal form of descent_cost working on the split real/imaginary target.
double joint_cost(const Matrix& centroids, const Vector& alpha, const Vector& zr,
                  const Vector& zi, const FrequencyMatrix& W, JointGrad* grad) {
  const Matrix theta = W.W * centroids.transpose();  // m x K
  const Eigen::ArrayXXd ct = theta.array().cos();
  const Eigen::ArrayXXd st = theta.array().sin();
  const Vector p = zr - ct.matrix() * alpha;
  const Vector q = zi + st.matrix() * alpha;
  const double cost = p.squaredNorm() + q.squaredNorm();
  if (grad) {
    grad->alpha = -2.0 * (ct.matrix().transpose() * p - st.matrix().transpose() * q);
    const Eigen::ArrayXXd h = st.colwise() * p.array() + ct.colwise() * q.array();
    grad->centroids = 2.0 * (alpha.asDiagonal() * (h.matrix().transpose() * W.W));
  }
  return cost;
}

double spectral_step(double ss, double sy, double fallback) {
  if (!(sy > 0) || !std::isfinite(sy)) return fallback;
  return std::clamp(ss / sy, 1e-12, 1e12);
}

}  // namespace

ComplexVector atom(const Eigen::Ref<const Vector>& c, const FrequencyMatrix& W) {
  if (c.size() != W.dim()) throw std::invalid_argument("atom dimension mismatch");
  const Vector theta = W.W * c;
  ComplexVector out(W.m());
  out.real() = theta.array().cos();
  out.imag() = -theta.array().sin();
  return out;
}

double correlation(const Eigen::Ref<const Vector>& c, const ComplexVector& residual,
                   const FrequencyMatrix& W) {
  if (residual.size() != W.m()) throw std::invalid_argument("residual length mismatch");
  const Vector theta = W.W * c;
  const double raw = (residual.real().array() * theta.array().cos() -
                      residual.imag().array() * theta.array().sin())
                         .sum();
  return raw / std::sqrt(static_cast<double>(W.m()));
}

Vector correlation_grad(const Eigen::Ref<const Vector>& c,
                        const ComplexVector& residual, const FrequencyMatrix& W) {
  if (residual.size() != W.m()) throw std::invalid_argument("residual length mismatch");
  const Vector theta = W.W * c;
  const Vector g = -(residual.real().array() * theta.array().sin() +
                     residual.imag().array() * theta.array().cos())
                        .matrix();
  return W.W.transpose() * g / std::sqrt(static_cast<double>(W.m()));
}

Vector maximize_c(const Vector& init, const ComplexVector& residual,
                  const FrequencyMatrix& W, const Bounds& bounds,
                  const AscentOptions& opts) {
  const Vector a = residual.real();
  const Vector b = residual.imag();
  const double sqrt_m = std::sqrt(static_cast<double>(W.m()));
  const auto value = [&](const Vector& c) {
    const Vector theta = W.W * c;
    return (a.array() * theta.array().cos() - b.array() * theta.array().sin()).sum() /
           sqrt_m;
  };
  const auto gradient = [&](const Vector& c) -> Vector {
    const Vector theta = W.W * c;
    const Vector g =
        -(a.array() * theta.array().sin() + b.array() * theta.array().cos()).matrix();
    return W.W.transpose() * g / sqrt_m;
  };

  Vector x = bounds.clamp(init);
  double f = value(x);
  Vector g = gradient(x);
  double step = opts.initial_step;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if ((bounds.clamp(x + g) - x).norm() <= opts.grad_tol) break;
    double t = step;
    Vector xn;
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = bounds.clamp(x + t * g);
      const Vector d = xn - x;
      if (d.norm() == 0.0) break;
      fn = value(xn);
      if (fn >= f + opts.armijo_c * g.dot(d)) {
        accepted = true;
        break;
      }
      t *= opts.shrink;
    }
    if (!accepted) break;
    Vector gn = gradient(xn);
    const Vector s = xn - x;
    const double sy = s.dot(g - gn);  // ascent: curvature along s is -s.(gn-g)
    step = spectral_step(s.squaredNorm(), sy, opts.initial_step);
    const bool converged = s.norm() <= opts.step_tol * (1.0 + x.norm());
    x = std::move(xn);
    f = fn;
    g = std::move(gn);
    if (converged) break;
  }
  return x;
}

Vector nnls(const Eigen::MatrixXcd& columns, const ComplexVector& target, double tol) {
  const Index m = columns.rows();
  const Index p = columns.cols();
  if (p < 1) throw std::invalid_argument("nnls needs at least one column");
  if (target.size() != m) throw std::invalid_argument("nnls target length mismatch");
  if (!columns.allFinite() || !target.allFinite()) {
    throw std::invalid_argument("nnls inputs must be finite");
  }

  Eigen::MatrixXd A(2 * m, p);
  A.topRows(m) = columns.real();
  A.bottomRows(m) = columns.imag();
  Eigen::VectorXd b(2 * m);
  b.head(m) = target.real();
  b.tail(m) = target.imag();

  Vector x = Vector::Zero(p);
  std::vector<bool> passive(static_cast<std::size_t>(p), false);
  Vector w = A.transpose() * b;
  const double dual_tol = tol * std::max(1.0, w.cwiseAbs().maxCoeff());

  std::vector<Index> idx;
  const int max_outer = 10 * static_cast<int>(p) + 30;
  for (int outer = 0; outer < max_outer; ++outer) {
    Index entering = -1;
    double best = dual_tol;
    for (Index i = 0; i < p; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w[i] > best) {
        best = w[i];
        entering = i;
      }
    }
    if (entering < 0) break;
    passive[static_cast<std::size_t>(entering)] = true;

    for (int inner = 0; inner < static_cast<int>(p) + 2; ++inner) {
      idx.clear();
      for (Index i = 0; i < p; ++i) {
        if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
      }
      Eigen::MatrixXd Ap(2 * m, static_cast<Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) Ap.col(static_cast<Index>(j)) = A.col(idx[j]);
      const Vector z = Ap.colPivHouseholderQr().solve(b);

      bool feasible = true;
      for (Index j = 0; j < z.size(); ++j) {
        if (!(z[j] > 0)) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        x.setZero();
        for (std::size_t j = 0; j < idx.size(); ++j) x[idx[j]] = z[static_cast<Index>(j)];
        break;
      }

      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const double zj = z[static_cast<Index>(j)];
        const double xj = x[idx[j]];
        if (zj <= 0 && xj - zj > 0) alpha = std::min(alpha, xj / (xj - zj));
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        x[idx[j]] += alpha * (z[static_cast<Index>(j)] - x[idx[j]]);
      }
      bool removed = false;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (x[idx[j]] <= dual_tol) {
          x[idx[j]] = 0.0;
          passive[static_cast<std::size_t>(idx[j])] = false;
          removed = true;
        }
      }
      if (!removed) break;  // numerical stall; keep the current feasible point
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

Matrix hard_threshold(const Matrix& centroids, const Vector& beta, Index k) {
  if (centroids.rows() != beta.size()) {
    throw std::invalid_argument("one weight per centroid required");
  }
  if (k >= centroids.rows()) return centroids;
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::vector<Index> order(static_cast<std::size_t>(centroids.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    if (beta[i] != beta[j]) return beta[i] > beta[j];
    return i < j;
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  Matrix kept(k, centroids.cols());
  for (Index r = 0; r < k; ++r) kept.row(r) = centroids.row(order[static_cast<std::size_t>(r)]);
  return kept;
}

Vector project_weights(const Matrix& centroids, const Sketch& sketch) {
  if (centroids.rows() < 1) throw std::invalid_argument("empty support");
  return nnls(atom_columns(centroids, sketch.freq, false), sketch.values);
}

double descent_cost(const Matrix& centroids, const Vector& alpha,
                    const ComplexVector& target, const FrequencyMatrix& W,
                    Matrix* grad_centroids, Vector* grad_alpha) {
  if (centroids.rows() != alpha.size()) {
    throw std::invalid_argument("one weight per centroid required");
  }
  JointGrad grad;
  const bool want_grad = grad_centroids != nullptr || grad_alpha != nullptr;
  const double cost = joint_cost(centroids, alpha, target.real(), target.imag(), W,
                                 want_grad ? &grad : nullptr);
  if (grad_centroids) *grad_centroids = std::move(grad.centroids);
  if (grad_alpha) *grad_alpha = std::move(grad.alpha);
  return cost;
}

std::pair<Matrix, Vector> global_descent(Matrix centroids, Vector alpha,
                                         const ComplexVector& target,
                                         const FrequencyMatrix& W,
                                         const Bounds& bounds,
                                         const AscentOptions& opts) {
  const Vector zr = target.real();
  const Vector zi = target.imag();
  const auto project_c = [&](Matrix& c) {
    for (Index k = 0; k < c.rows(); ++k) {
      c.row(k) = c.row(k)
                     .cwiseMax(bounds.lower.transpose())
                     .cwiseMin(bounds.upper.transpose());
    }
  };
  project_c(centroids);
  alpha = alpha.cwiseMax(0.0);

  JointGrad grad;
  double f = joint_cost(centroids, alpha, zr, zi, W, &grad);
  double step = opts.initial_step;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    Matrix pc = centroids - grad.centroids;
    Vector pa = alpha - grad.alpha;
    project_c(pc);
    pa = pa.cwiseMax(0.0);
    const double pg_norm = std::sqrt((pc - centroids).squaredNorm() +
                                     (pa - alpha).squaredNorm());
    if (pg_norm <= opts.grad_tol) break;

    double t = step;
    Matrix cn;
    Vector an;
    double fn = f;
    double d_norm2 = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      cn = centroids - t * grad.centroids;
      an = alpha - t * grad.alpha;
      project_c(cn);
      an = an.cwiseMax(0.0);
      const Matrix dc = cn - centroids;
      const Vector da = an - alpha;
      d_norm2 = dc.squaredNorm() + da.squaredNorm();
      if (d_norm2 == 0.0) break;
      fn = joint_cost(cn, an, zr, zi, W, nullptr);
      const double slope = grad.centroids.cwiseProduct(dc).sum() + grad.alpha.dot(da);
      if (fn <= f + opts.armijo_c * slope) {
        accepted = true;
        break;
      }
      t *= opts.shrink;
    }
    if (!accepted) break;

    JointGrad next_grad;
    const double f_next = joint_cost(cn, an, zr, zi, W, &next_grad);
    const double sy = (cn - centroids).cwiseProduct(next_grad.centroids - grad.centroids).sum() +
                      (an - alpha).dot(next_grad.alpha - grad.alpha);
    step = spectral_step(d_norm2, sy, opts.initial_step);
    const bool converged =
        std::sqrt(d_norm2) <=
        opts.step_tol * (1.0 + std::sqrt(centroids.squaredNorm() + alpha.squaredNorm()));
    centroids = std::move(cn);
    alpha = std::move(an);
    f = f_next;
    grad = std::move(next_grad);
    if (converged) break;
  }
  return {std::move(centroids), std::move(alpha)};
}

Vector pick_init(InitStrategy strategy, const Bounds& bounds,
                 const Matrix& current_support, const Dataset* data, Rng& rng) {
  if (strategy == InitStrategy::Range) {
    Vector c(bounds.dim());
    for (Index j = 0; j < c.size(); ++j) c[j] = rng.uniform(bounds.lower[j], bounds.upper[j]);
    return c;
  }
  if (!data) throw std::invalid_argument("initialization requires data access");
  const Index n_points = data->size();
  if (strategy == InitStrategy::Sample || current_support.rows() == 0) {
    return data->points.row(static_cast<Index>(rng.index(static_cast<std::size_t>(n_points))))
        .transpose();
  }
  // KPP: squared distance to the nearest current centroid.
  const Vector point_norms = data->points.rowwise().squaredNorm();
  const Vector support_norms = current_support.rowwise().squaredNorm();
  const Matrix cross = data->points * current_support.transpose();  // N x |C|
  Vector d2(n_points);
  for (Index i = 0; i < n_points; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < current_support.rows(); ++k) {
      best = std::min(best, point_norms[i] - 2.0 * cross(i, k) + support_norms[k]);
    }
    d2[i] = std::max(best, 0.0);
  }
  const double total = d2.sum();
  if (!(total > 0)) {
    return data->points.row(static_cast<Index>(rng.index(static_cast<std::size_t>(n_points))))
        .transpose();
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (Index i = 0; i < n_points; ++i) {
    acc += d2[i];
    if (acc >= u) return data->points.row(i).transpose();
  }
  return data->points.row(n_points - 1).transpose();
}

CentroidModel ckm(const Sketch& sketch, const SolverConfig& config,
                  const Dataset* data, const IterationCallback& on_iteration) {
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (config.max_ascent_iters < 1 || config.max_descent_iters < 1) {
    throw std::invalid_argument("iteration limits must be positive");
  }
  if (!(config.grad_tol > 0) || !(config.step_tol > 0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (config.init_strategy != InitStrategy::Range && data == nullptr) {
    throw std::invalid_argument("initialization requires data access");
  }
  const FrequencyMatrix& W = sketch.freq;
  const Index n = W.dim();
  if (sketch.values.size() != W.m()) {
    throw std::invalid_argument("sketch length does not match frequency matrix");
  }
  if (sketch.bounds.dim() != n) {
    throw std::invalid_argument("sketch bounds dimension mismatch");
  }

  const double grad_scale = config.grad_tol * std::sqrt(static_cast<double>(W.m()));
  AscentOptions ascent;
  ascent.max_iters = config.max_ascent_iters;
  ascent.grad_tol = grad_scale;
  ascent.step_tol = config.step_tol;
  AscentOptions descent = ascent;
  descent.max_iters = config.max_descent_iters;

  Rng rng(config.seed);
  const ComplexVector& target = sketch.values;
  ComplexVector residual = target;
  Matrix support(0, n);
  Vector alpha;

  for (int t = 1; t <= 2 * static_cast<int>(config.k); ++t) {
    const Vector init = pick_init(config.init_strategy, sketch.bounds, support, data, rng);
    Vector c = maximize_c(init, residual, W, sketch.bounds, ascent);

    for (Index k = 0; k < support.rows(); ++k) {
      if ((support.row(k).transpose() - c).norm() <= 1e-10) {
        for (Index j = 0; j < n; ++j) {
          c[j] += 1e-6 * (sketch.bounds.upper[j] - sketch.bounds.lower[j]) *
                  rng.uniform(-1.0, 1.0);
        }
        c = sketch.bounds.clamp(c);
        break;
      }
    }

    support.conservativeResize(support.rows() + 1, Eigen::NoChange);
    support.row(support.rows() - 1) = c.transpose();

    if (support.rows() > config.k) {
      const Vector beta = nnls(atom_columns(support, W, true), target);
      support = hard_threshold(support, beta, config.k);
    }
    alpha = project_weights(support, sketch);
    std::tie(support, alpha) =
        global_descent(std::move(support), std::move(alpha), target, W, sketch.bounds,
                       descent);
    residual = target - atom_columns(support, W, false) * alpha;
    if (on_iteration) on_iteration(SolverState{residual, support, alpha, t});
  }

  const double total = alpha.sum();
  Vector weights = total > 0
                       ? Vector(alpha / total)
                       : Vector::Constant(support.rows(),
                                          1.0 / static_cast<double>(support.rows()));
  return CentroidModel{std::move(support), std::move(weights)};
}

double sketch_residual_norm(const Sketch& sketch, const CentroidModel& model) {
  return (sketch.values - atom_columns(model.centroids, sketch.freq, false) * model.weights)
      .norm();
}

}  // namespace ckm

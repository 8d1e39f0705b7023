#pragma once

#include <cstdint>

#include "ckm/types.hpp"

namespace ckm {

// Synthetic mixture of k unit Gaussians with uniform component weights.
// Component means are drawn from a centered Gaussian with per-coordinate
// variance separation * k^(1/dim); separation 1.5 keeps clusters apart with
// high probability.
struct GmmGenConfig {
  Index k = 10;
  Index dim = 10;
  Index count = 300000;
  double separation = 1.5;
  std::uint64_t seed = 0;
};

struct GmmSample {
  Dataset data;  // labels record the generating component
  Matrix means;  // k x dim
};

GmmSample gen_gmm_sample(const GmmGenConfig& config);
Dataset gen_gmm(const GmmGenConfig& config);

}  // namespace ckm

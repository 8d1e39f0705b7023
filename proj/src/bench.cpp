#include "ckm/bench.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "ckm/kmeans.hpp"
#include "ckm/metrics.hpp"
#include "ckm/rng.hpp"
#include "ckm/solver.hpp"

namespace ckm {

int thread_budget(int requested) {
  int budget = requested > 0 ? requested
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* cap = std::getenv("CKM_THREADS")) {
    try {
      const int limit = std::stoi(cap);
      if (limit >= 1) budget = std::min(budget, limit);
    } catch (const std::exception&) {
      // unparseable cap is ignored
    }
  }
  return budget;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::size_t select_best_replicate(Method method, std::span<const ReplicateRun> runs) {
  if (runs.empty()) throw std::invalid_argument("no replicate runs to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (method == Method::CKM) {
      if (runs[i].sketch_residual < runs[best].sketch_residual) best = i;
    } else {
      if (!runs[i].sse || !runs[best].sse) {
        throw std::invalid_argument("Lloyd replicate selection requires SSE values");
      }
      if (*runs[i].sse < *runs[best].sse) best = i;
    }
  }
  return best;
}

CentroidModel solve_replicates(const Sketch& sketch, const SolverConfig& base,
                               int replicates, const Dataset* data, int threads) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  std::vector<ReplicateRun> runs(static_cast<std::size_t>(replicates));
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    SolverConfig config = base;
    config.seed = base.seed + static_cast<std::uint64_t>(i);
    runs[i].model = ckm(sketch, config, data);
    runs[i].sketch_residual = sketch_residual_norm(sketch, runs[i].model);
  });
  return runs[select_best_replicate(Method::CKM, runs)].model;
}

CentroidModel lloyd_replicates(const Dataset& data, Index k, InitStrategy init,
                               int replicates, std::uint64_t seed, int max_iters,
                               int threads) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  std::vector<ReplicateRun> runs(static_cast<std::size_t>(replicates));
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    Rng rng(seed + static_cast<std::uint64_t>(i));
    const Matrix start = lloyd_init(data, k, init, rng);
    runs[i].model = lloyd_max(data, start, max_iters);
    runs[i].sse = sse(data, runs[i].model);
  });
  return runs[select_best_replicate(Method::Lloyd, runs)].model;
}

}  // namespace ckm

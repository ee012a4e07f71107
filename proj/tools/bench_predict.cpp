// Compares the serial reference batch-prediction path against the OpenMP
// fan-out on a realistic validation-sized workload.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "qgc/training.hpp"

using namespace qgc;

namespace {

double time_ms(const std::vector<double>& samples) {
  double best = samples[0];
  for (double s : samples) best = std::min(best, s);
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n_graphs = argc > 1 ? std::atoi(argv[1]) : 500;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  Rng rng(1);
  std::vector<Graph> graphs;
  graphs.reserve(n_graphs);
  for (int i = 0; i < n_graphs; ++i) {
    graphs.push_back(sample_er(8, rng.uniform(), rng));
  }

  Model model{build_permutation_invariant(8, 40), {}};
  model.params.resize(model.circuit.slot_count);
  for (double& p : model.params) {
    p = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }

  auto bench = [&](bool parallel) {
    std::vector<double> samples;
    std::vector<double> out;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      out = predict_many(model, graphs, parallel);
      const auto t1 = std::chrono::steady_clock::now();
      samples.push_back(
          std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return std::make_pair(time_ms(samples), out);
  };

  auto [serial_ms, serial_out] = bench(false);
  auto [parallel_ms, parallel_out] = bench(true);

  double max_diff = 0.0;
  for (std::size_t i = 0; i < serial_out.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(serial_out[i] - parallel_out[i]));
  }

  std::printf("graphs: %d, perm-inv 40 layers\n", n_graphs);
  std::printf("serial:   %8.2f ms  (%.1f graphs/s)\n", serial_ms,
              1000.0 * n_graphs / serial_ms);
  std::printf("openmp:   %8.2f ms  (%.1f graphs/s)\n", parallel_ms,
              1000.0 * n_graphs / parallel_ms);
  std::printf("speedup:  %8.2fx\n", serial_ms / parallel_ms);
  std::printf("max |serial - openmp|: %g\n", max_diff);
  return max_diff == 0.0 ? 0 : 1;
}

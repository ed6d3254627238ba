// Serial vs OpenMP replicate loop on a cluster-configuration workload.
#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <vector>

#include "msa/estimators.hpp"
#include "msa/mc_engine.hpp"
#include "msa/model.hpp"

int main(int argc, char** argv) {
  int reps = 200;
  int workers = omp_get_max_threads();
  CLI::App app{"Time the serial and OpenMP replicate loops"};
  app.add_option("--reps", reps, "Replicates")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "Threads for the parallel loop")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  const msa::ProblemInstance inst = msa::make_cluster_config(100, 100, 400, 1.0);
  const double c = msa::default_cluster_threshold(inst.m(), 400);

  auto run = [&](bool parallel, std::vector<double>& err) {
    err.assign(static_cast<std::size_t>(reps), 0.0);
    auto kernel = [&](std::size_t rep) {
      const auto est = msa::sample_estimates(inst, 7, rep);
      const auto a = msa::elimination_estimator(est, inst.sizes(), inst.d(), {});
      const auto b = msa::practical_clustering_estimator(est, inst.sizes(), inst.d(), 2, c, rep);
      err[rep] = msa::squared_distance(a.value, inst.target()) + msa::squared_distance(b.value, inst.target());
    };
    const auto t0 = std::chrono::steady_clock::now();
    if (parallel) {
      msa::run_replicates_parallel(static_cast<std::size_t>(reps), workers, kernel);
    } else {
      msa::run_replicates_serial(static_cast<std::size_t>(reps), kernel);
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  std::vector<double> serial, parallel;
  const double ts = run(false, serial);
  const double tp = run(true, parallel);
  std::printf("reps=%d workers=%d\n", reps, workers);
  std::printf("serial   %.3f s\n", ts);
  std::printf("parallel %.3f s  (speedup %.2fx)\n", tp, ts / tp);
  std::printf("identical results: %s\n", serial == parallel ? "yes" : "no");
  return serial == parallel ? 0 : 1;
}

#include "msa/mc_engine.hpp"

#include <omp.h>

#include <cmath>
#include <exception>

namespace msa {

void run_replicates_serial(std::size_t reps, const ReplicateKernel& kernel) {
  for (std::size_t r = 0; r < reps; ++r) kernel(r);
}

void run_replicates_parallel(std::size_t reps, int workers, const ReplicateKernel& kernel) {
  if (workers < 1) workers = 1;
  std::exception_ptr failure;
  const auto n = static_cast<long long>(reps);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (long long r = 0; r < n; ++r) {
    try {
      kernel(static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(msa_replicate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void run_replicates(std::size_t reps, int workers, const ReplicateKernel& kernel) {
  if (workers <= 1) {
    run_replicates_serial(reps, kernel);
  } else {
    run_replicates_parallel(reps, workers, kernel);
  }
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

}  // namespace msa

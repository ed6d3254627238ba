#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace msa {

// Writes the results of replicate `rep` into caller-owned, per-replicate slots.
using ReplicateKernel = std::function<void(std::size_t rep)>;

// Reference implementation: replicates in index order on the calling thread.
void run_replicates_serial(std::size_t reps, const ReplicateKernel& kernel);

// Same kernel spread over an OpenMP team. Output is identical to the serial run as
// long as the kernel only touches its own slot.
void run_replicates_parallel(std::size_t reps, int workers, const ReplicateKernel& kernel);

void run_replicates(std::size_t reps, int workers, const ReplicateKernel& kernel);

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample sd / sqrt(count)
};

// Summed in index order so the result does not depend on scheduling.
Summary summarize(const std::vector<double>& values);

}  // namespace msa

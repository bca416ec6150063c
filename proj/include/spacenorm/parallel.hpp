#ifndef SPACENORM_PARALLEL_HPP
#define SPACENORM_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace spacenorm {

/// Worker count used by parallel_for; 0 restores hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs fn(begin, end) on contiguous chunks of [0, n) from a fixed static
/// partition. Each index belongs to exactly one chunk, so per-slot writes
/// are race-free and results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Max of fn(i) over [0, n). Per-chunk maxima are combined in chunk order;
/// max is exact, so the result is independent of the partition.
double parallel_max(std::size_t n, const std::function<double(std::size_t)>& fn);

}  // namespace spacenorm

#endif

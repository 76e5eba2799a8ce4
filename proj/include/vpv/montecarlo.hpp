#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vpv/random.hpp"

namespace vpv {

// Worker count from VPV_WORKERS, falling back to the hardware concurrency.
int default_workers();

// Per-replication outputs, row-major: reps rows of `width` values.
class ReplicationTable {
 public:
  ReplicationTable(std::size_t reps, std::size_t width) : reps_(reps), width_(width), data_(reps * width) {}

  std::size_t reps() const { return reps_; }
  std::size_t width() const { return width_; }
  std::span<double> row(std::size_t rep) { return {data_.data() + rep * width_, width_}; }
  std::span<const double> row(std::size_t rep) const { return {data_.data() + rep * width_, width_}; }
  std::vector<double> column(std::size_t col) const;

 private:
  std::size_t reps_;
  std::size_t width_;
  std::vector<double> data_;
};

struct McSummary {
  double mean;
  double std_err;
  std::size_t reps;
};

// Mean and standard error (sample sd / sqrt(reps)), summed in index order.
McSummary summarize(std::span<const double> values);
// Fraction of values <= threshold, with its binomial standard error.
McSummary fraction_at_most(std::span<const double> values, double threshold);

using ReplicationFn = std::function<void(RandomStream& stream, std::span<double> out)>;

// Runs reps independent replications; replication r draws from substream r of
// `seed`, so the table is identical for every worker count.
ReplicationTable run_replications(std::uint64_t seed, std::size_t reps, std::size_t width, int workers,
                                  const ReplicationFn& fn);

}  // namespace vpv

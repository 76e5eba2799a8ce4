#include "vpv/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "vpv/errors.hpp"

namespace vpv {

int default_workers() {
  if (const char* env = std::getenv("VPV_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> ReplicationTable::column(std::size_t col) const {
  std::vector<double> out(reps_);
  for (std::size_t r = 0; r < reps_; ++r) out[r] = data_[r * width_ + col];
  return out;
}

McSummary summarize(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return {0.0, 0.0, 0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return {mean, sd / std::sqrt(static_cast<double>(n)), n};
}

McSummary fraction_at_most(std::span<const double> values, double threshold) {
  const std::size_t n = values.size();
  if (n == 0) return {0.0, 0.0, 0};
  std::size_t hits = 0;
  for (double v : values) hits += v <= threshold ? 1 : 0;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1 - p) / static_cast<double>(n)), n};
}

ReplicationTable run_replications(std::uint64_t seed, std::size_t reps, std::size_t width, int workers,
                                  const ReplicationFn& fn) {
  ReplicationTable table(reps, width);
  workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(reps, 1)));

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream(seed, r);
      fn(stream, table.row(r));
    }
  };
  if (workers == 1) {
    run_range(0, reps);
    return table;
  }

  // Chunks are claimed dynamically; each replication still owns its substream.
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      try {
        for (;;) {
          const std::size_t begin = next.fetch_add(kChunk);
          if (begin >= reps) break;
          run_range(begin, std::min(begin + kChunk, reps));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(reps);
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return table;
}

}  // namespace vpv

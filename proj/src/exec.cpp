#include "deskmd/exec.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace deskmd {

ChunkPlan plan_chunks(std::size_t total, std::size_t workers) {
  if (workers == 0) throw InvalidArgument("worker count must be at least 1");
  ChunkPlan plan;
  plan.total = total;
  const std::size_t target_chunks = 4 * workers;
  plan.chunk_size = std::max<std::size_t>(1, (total + target_chunks - 1) / target_chunks);
  for (std::size_t begin = 0; begin < total; begin += plan.chunk_size)
    plan.chunks.push_back({begin, std::min(total, begin + plan.chunk_size)});
  return plan;
}

void run_chunks(const ChunkPlan& plan, std::size_t workers,
                const std::function<void(std::size_t, ChunkRange)>& body) {
  if (workers == 0) throw InvalidArgument("worker count must be at least 1");
  const std::size_t n_chunks = plan.chunks.size();
  if (workers == 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) body(c, plan.chunks[c]);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> cancelled{false};
  std::mutex failure_mutex;
  std::size_t failed_chunk = n_chunks;
  std::exception_ptr failure;

  auto worker = [&] {
    while (!cancelled.load(std::memory_order_relaxed)) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      try {
        body(c, plan.chunks[c]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (c < failed_chunk) {
          failed_chunk = c;
          failure = std::current_exception();
        }
        cancelled.store(true, std::memory_order_relaxed);
      }
    }
  };

  const std::size_t n_threads = std::min(workers, n_chunks);
  {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads - 1);
    for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

Accumulator& Accumulator::operator+=(const Accumulator& other) {
  energy += other.energy;
  if (forces.size() < other.forces.size()) forces.resize(other.forces.size());
  for (std::size_t i = 0; i < other.forces.size(); ++i) forces[i] += other.forces[i];
  return *this;
}

Accumulator deterministic_reduce(std::span<const Accumulator> partials) {
  Accumulator total;
  for (const auto& p : partials) total += p;
  return total;
}

double deterministic_reduce(std::span<const double> partials) {
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

}  // namespace deskmd

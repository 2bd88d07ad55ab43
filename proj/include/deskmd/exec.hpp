#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

#include "deskmd/error.hpp"
#include "deskmd/vec3.hpp"

namespace deskmd {

struct ChunkRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const ChunkRange&, const ChunkRange&) = default;
};

// Contiguous, ascending partition of [0, total).
struct ChunkPlan {
  std::size_t total = 0;
  std::size_t chunk_size = 1;
  std::vector<ChunkRange> chunks;
};

struct WorkerPoolConfig {
  std::size_t workers = 1;
  // Off: reductions may combine partial results in completion order.
  bool deterministic = true;
};

// Chunks of ceil(total / (4 * workers)) indices, at least one index each.
ChunkPlan plan_chunks(std::size_t total, std::size_t workers);

// Runs `body` once per chunk on up to `workers` threads (the caller's thread
// included). With one worker this is a plain loop on the calling thread.
// The first exception stops outstanding chunks; the one from the lowest
// chunk index among those that failed is rethrown after all threads join.
void run_chunks(const ChunkPlan& plan, std::size_t workers,
                const std::function<void(std::size_t chunk_index, ChunkRange range)>& body);

// results[i] = task(i), placed by index regardless of completion order.
// Throws TaskError naming the failing index; no partial results escape.
template <class Task>
auto parallel_map_indexed(const ChunkPlan& plan, Task&& task, const WorkerPoolConfig& cfg)
    -> std::vector<std::invoke_result_t<Task&, std::size_t>> {
  using Result = std::invoke_result_t<Task&, std::size_t>;
  if (cfg.workers == 0) throw InvalidArgument("worker count must be at least 1");
  std::vector<Result> results(plan.total);
  auto run_index = [&](std::size_t i) {
    try {
      results[i] = task(i);
    } catch (const TaskError&) {
      throw;
    } catch (const std::exception& e) {
      throw TaskError(i, e.what(), std::current_exception());
    } catch (...) {
      throw TaskError(i, "unknown exception", std::current_exception());
    }
  };
  if (cfg.workers == 1) {
    for (std::size_t i = 0; i < plan.total; ++i) run_index(i);
    return results;
  }
  run_chunks(plan, cfg.workers, [&](std::size_t, ChunkRange range) {
    for (std::size_t i = range.begin; i < range.end; ++i) run_index(i);
  });
  return results;
}

// Energy plus per-atom forces; the unit combined by the reducers below.
struct Accumulator {
  double energy = 0.0;
  std::vector<Vec3> forces;

  // Element-wise sum; a shorter force list is padded with zeros.
  Accumulator& operator+=(const Accumulator& other);
};

// Serial left fold in the given order: ((p0 + p1) + p2) + ...
Accumulator deterministic_reduce(std::span<const Accumulator> partials);
double deterministic_reduce(std::span<const double> partials);

}  // namespace deskmd

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace deskmd {

enum class BenchStage { EM, NVT, MD, DOCK };

const char* to_string(BenchStage stage);
BenchStage parse_bench_stage(std::string_view text);

struct BenchmarkRecord {
  BenchStage stage = BenchStage::EM;
  std::uint64_t workload = 0;  // steps or conformers
  std::uint64_t workers = 1;
  std::uint64_t repetition = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

struct ScalingRow {
  std::uint64_t workers = 1;
  double median_seconds = 0.0;
  double speedup = 1.0;
  double efficiency = 1.0;

  friend bool operator==(const ScalingRow&, const ScalingRow&) = default;
};

struct AmdahlFit {
  double f = 0.0;   // sequential fraction
  double t1 = 0.0;  // s
  double residual = 0.0;  // RMS of fitted minus observed T(p), s
  bool clamped = false;   // raw f fell outside [0, 1]
};

// FNV-1a over the bit patterns of everything a runner produced.
class Checksum {
 public:
  void add(std::uint64_t value);
  void add(double value);
  std::uint64_t value() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

struct MeasureSpec {
  BenchStage stage = BenchStage::EM;
  std::uint64_t workload = 0;
  std::uint64_t workers = 1;
  std::size_t repetitions = 1;
  std::size_t warmup = 0;
};

// Runs `runner` spec.warmup times untimed, then spec.repetitions times on a
// monotonic clock. Every run must return the same checksum, otherwise
// MeasurementInvalid is thrown. Runner exceptions propagate; nothing partial
// is returned.
std::vector<BenchmarkRecord> measure(const std::function<std::uint64_t()>& runner,
                                     const MeasureSpec& spec);

double median(std::span<const double> values);

// One (stage, workload) group: T(p) is the median over repetitions,
// S(p) = T(1)/T(p), E(p) = S(p)/p, rows sorted by p.
std::vector<ScalingRow> compute_scaling(std::span<const BenchmarkRecord> records);

using GroupKey = std::pair<BenchStage, std::uint64_t>;
std::map<GroupKey, std::vector<BenchmarkRecord>> group_records(std::span<const BenchmarkRecord> records);

// Least squares T(p) = a + b/p; t1 = a + b, f = a/(a + b).
AmdahlFit amdahl_fit(std::span<const ScalingRow> rows);

// Model prediction T(p) = t1 (f + (1 - f)/p).
double amdahl_time(const AmdahlFit& fit, double workers);

// `f=<...> t1=<...> residual=<...> clamped=<bool>`
std::string format_amdahl(const AmdahlFit& fit);

// `stage,workload,workers,repetition,wall_seconds`
std::string write_records_csv(std::span<const BenchmarkRecord> records);
std::vector<BenchmarkRecord> read_records_csv(std::string_view text);

// `workers,median_seconds,speedup,efficiency`
std::string write_scaling_csv(std::span<const ScalingRow> rows);
std::vector<ScalingRow> read_scaling_csv(std::string_view text);

}  // namespace deskmd

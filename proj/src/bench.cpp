#include "deskmd/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <optional>

#include "deskmd/error.hpp"
#include "deskmd/numfmt.hpp"

namespace deskmd {

const char* to_string(BenchStage stage) {
  switch (stage) {
    case BenchStage::EM: return "EM";
    case BenchStage::NVT: return "NVT";
    case BenchStage::MD: return "MD";
    case BenchStage::DOCK: return "DOCK";
  }
  return "?";
}

BenchStage parse_bench_stage(std::string_view text) {
  if (text == "EM") return BenchStage::EM;
  if (text == "NVT") return BenchStage::NVT;
  if (text == "MD") return BenchStage::MD;
  if (text == "DOCK") return BenchStage::DOCK;
  throw InvalidArgument("unknown stage '" + std::string(text) + "'");
}

void Checksum::add(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    hash_ ^= (value >> (8 * i)) & 0xffU;
    hash_ *= 0x100000001b3ULL;
  }
}

void Checksum::add(double value) { add(std::bit_cast<std::uint64_t>(value)); }

std::vector<BenchmarkRecord> measure(const std::function<std::uint64_t()>& runner,
                                     const MeasureSpec& spec) {
  if (spec.repetitions < 1) throw InvalidArgument("repetitions must be at least 1");
  using Clock = std::chrono::steady_clock;
  std::optional<std::uint64_t> reference;
  auto check = [&](std::uint64_t sum) {
    if (!reference) {
      reference = sum;
    } else if (*reference != sum) {
      throw MeasurementInvalid("runner output checksum changed between repetitions");
    }
  };
  for (std::size_t w = 0; w < spec.warmup; ++w) check(runner());

  std::vector<BenchmarkRecord> records;
  records.reserve(spec.repetitions);
  for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
    const auto start = Clock::now();
    const auto sum = runner();
    const auto stop = Clock::now();
    check(sum);
    double seconds = std::chrono::duration<double>(stop - start).count();
    // Keep the record valid on coarse clocks.
    if (!(seconds > 0.0)) seconds = 1e-9;
    records.push_back({spec.stage, spec.workload, spec.workers, rep, seconds});
  }
  return records;
}

double median(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

std::vector<ScalingRow> compute_scaling(std::span<const BenchmarkRecord> records) {
  if (records.empty()) throw InvalidArgument("no benchmark records");
  std::map<std::uint64_t, std::vector<double>> by_workers;
  for (const auto& r : records) {
    if (r.stage != records.front().stage || r.workload != records.front().workload)
      throw InvalidArgument("records mix stages or workloads; group them first");
    by_workers[r.workers].push_back(r.wall_seconds);
  }
  const auto base = by_workers.find(1);
  if (base == by_workers.end()) throw InvalidArgument("no workers=1 baseline; speedup undefined");
  const double t1 = median(base->second);
  std::vector<ScalingRow> rows;
  for (const auto& [p, times] : by_workers) {
    ScalingRow row;
    row.workers = p;
    row.median_seconds = median(times);
    row.speedup = p == 1 ? 1.0 : t1 / row.median_seconds;
    row.efficiency = row.speedup / static_cast<double>(p);
    rows.push_back(row);
  }
  return rows;
}

std::map<GroupKey, std::vector<BenchmarkRecord>> group_records(std::span<const BenchmarkRecord> records) {
  std::map<GroupKey, std::vector<BenchmarkRecord>> groups;
  for (const auto& r : records) groups[{r.stage, r.workload}].push_back(r);
  return groups;
}

AmdahlFit amdahl_fit(std::span<const ScalingRow> rows) {
  if (rows.size() < 2) throw InvalidArgument("Amdahl fit needs at least two worker counts");
  const double n = static_cast<double>(rows.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& r : rows) {
    if (r.workers < 1) throw InvalidArgument("worker count must be at least 1");
    mean_x += 1.0 / static_cast<double>(r.workers);
    mean_y += r.median_seconds;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& r : rows) {
    const double dx = 1.0 / static_cast<double>(r.workers) - mean_x;
    sxx += dx * dx;
    sxy += dx * (r.median_seconds - mean_y);
  }
  if (sxx == 0.0) throw InvalidArgument("degenerate design: all worker counts are equal");
  const double b = sxy / sxx;
  const double a = mean_y - b * mean_x;

  AmdahlFit fit;
  fit.t1 = a + b;
  if (!(fit.t1 > 0.0)) throw InvalidArgument("fitted T(1) is not positive");
  const double raw_f = a / fit.t1;
  fit.f = std::clamp(raw_f, 0.0, 1.0);
  fit.clamped = fit.f != raw_f;

  double sq = 0.0;
  for (const auto& r : rows) {
    const double e = a + b / static_cast<double>(r.workers) - r.median_seconds;
    sq += e * e;
  }
  fit.residual = std::sqrt(sq / n);
  return fit;
}

double amdahl_time(const AmdahlFit& fit, double workers) {
  return fit.t1 * (fit.f + (1.0 - fit.f) / workers);
}

std::string format_amdahl(const AmdahlFit& fit) {
  return "f=" + format_double(fit.f) + " t1=" + format_double(fit.t1) +
         " residual=" + format_double(fit.residual) + " clamped=" + (fit.clamped ? "true" : "false");
}

namespace {

constexpr std::string_view kRecordsHeader = "stage,workload,workers,repetition,wall_seconds";
constexpr std::string_view kScalingHeader = "workers,median_seconds,speedup,efficiency";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Calls `row(fields, line_no)` for every non-empty line after the header.
template <class RowFn>
void for_each_row(std::string_view text, std::string_view header, RowFn&& row) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool seen_header = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw ParseError(line_no, "expected header `" + std::string(header) + "`");
      seen_header = true;
      continue;
    }
    row(split(line, ','), line_no);
  }
  if (!seen_header) throw ParseError(1, "missing header");
}

std::uint64_t need_uint(std::string_view field, std::size_t line_no, const char* what) {
  const auto v = parse_uint(field);
  if (!v) throw ParseError(line_no, std::string("bad ") + what);
  return *v;
}

double need_double(std::string_view field, std::size_t line_no, const char* what) {
  const auto v = parse_double(field);
  if (!v || !std::isfinite(*v)) throw ParseError(line_no, std::string("bad ") + what);
  return *v;
}

}  // namespace

std::string write_records_csv(std::span<const BenchmarkRecord> records) {
  std::string out(kRecordsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::string(to_string(r.stage)) + ',' + std::to_string(r.workload) + ',' +
           std::to_string(r.workers) + ',' + std::to_string(r.repetition) + ',' +
           format_double(r.wall_seconds) + '\n';
  }
  return out;
}

std::vector<BenchmarkRecord> read_records_csv(std::string_view text) {
  std::vector<BenchmarkRecord> records;
  for_each_row(text, kRecordsHeader, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 5) throw ParseError(line_no, "expected 5 fields");
    BenchmarkRecord r;
    try {
      r.stage = parse_bench_stage(f[0]);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
    r.workload = need_uint(f[1], line_no, "workload");
    r.workers = need_uint(f[2], line_no, "workers");
    r.repetition = need_uint(f[3], line_no, "repetition");
    r.wall_seconds = need_double(f[4], line_no, "wall_seconds");
    if (r.workers < 1) throw ParseError(line_no, "workers must be at least 1");
    if (!(r.wall_seconds > 0.0)) throw ParseError(line_no, "wall_seconds must be positive");
    records.push_back(r);
  });
  return records;
}

std::string write_scaling_csv(std::span<const ScalingRow> rows) {
  std::string out(kScalingHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.workers) + ',' + format_double(r.median_seconds) + ',' +
           format_double(r.speedup) + ',' + format_double(r.efficiency) + '\n';
  }
  return out;
}

std::vector<ScalingRow> read_scaling_csv(std::string_view text) {
  std::vector<ScalingRow> rows;
  for_each_row(text, kScalingHeader, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 4) throw ParseError(line_no, "expected 4 fields");
    ScalingRow r;
    r.workers = need_uint(f[0], line_no, "workers");
    r.median_seconds = need_double(f[1], line_no, "median_seconds");
    r.speedup = need_double(f[2], line_no, "speedup");
    r.efficiency = need_double(f[3], line_no, "efficiency");
    if (r.workers < 1) throw ParseError(line_no, "workers must be at least 1");
    if (!(r.median_seconds > 0.0)) throw ParseError(line_no, "median_seconds must be positive");
    rows.push_back(r);
  });
  return rows;
}

}  // namespace deskmd

#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace rapcd {

// One per-iteration trace row.  has_fref / has_gap mark optional columns that
// are emitted as empty CSV fields when absent.
struct IterRecord {
  std::string run_id;
  long long k = 0;
  long long coord_updates = 0;
  double epoch = 0.0;
  double F = 0.0;
  double F_minus_Fref = 0.0;
  bool has_fref = false;
  double duality_gap = 0.0;
  bool has_gap = false;
  double elapsed_seconds = 0.0;
};

// One restart-boundary event.
struct RestartRecord {
  std::string run_id;
  long long restart_index = 0;
  long long period = 0;  // K_r
  double F_before = 0.0;
  double F_after = 0.0;
  bool kept_candidate = true;  // candidate vs previous point
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void iter(const IterRecord& rec) = 0;
  virtual void restart(const RestartRecord& rec) = 0;
};

// Iteration rows go to <prefix>.trace.csv and restart events to
// <prefix>.restarts.csv.  Numbers are printed with %.17g, so a run with the
// same config and seed produces byte-identical files except for the
// elapsed_seconds column.
class CsvTraceSink : public TraceSink {
 public:
  explicit CsvTraceSink(const std::string& prefix);
  void iter(const IterRecord& rec) override;
  void restart(const RestartRecord& rec) override;

  static const char* iter_header();
  static const char* restart_header();

 private:
  std::ofstream trace_;
  std::ofstream restarts_;
  bool trace_header_written_ = false;
  bool restart_header_written_ = false;
};

// Keeps records in memory; used by tests.
class MemoryTraceSink : public TraceSink {
 public:
  void iter(const IterRecord& rec) override { iters.push_back(rec); }
  void restart(const RestartRecord& rec) override { restarts.push_back(rec); }
  std::vector<IterRecord> iters;
  std::vector<RestartRecord> restarts;
};

// Shared bookkeeping for one solver run (possibly spanning many restarts):
// global counters, trace cadence and the wall clock.  Engines bump the
// counters; emit decisions are made here so the cadence is uniform whether
// or not the run is restarted.
struct RunContext {
  std::string run_id = "run";
  TraceSink* sink = nullptr;
  long long trace_stride = 0;  // emit every this many coordinate updates; 0 = off
  bool trace_gap = true;       // evaluate the duality gap at trace rows
  double fref = std::numeric_limits<double>::quiet_NaN();

  long long iterations = 0;
  long long coord_updates = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  long long next_trace_at = 0;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
  bool trace_due() const {
    return sink != nullptr && trace_stride > 0 && coord_updates >= next_trace_at;
  }
  void advance_trace() {
    while (next_trace_at <= coord_updates) next_trace_at += trace_stride;
  }
};

}  // namespace rapcd

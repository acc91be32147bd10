#pragma once

// Incremental alignment-score structure built on lazy rebuilding. A batch
// solver produces the alignment table for snapshots of the strings; updates
// land in a log and queries patch the stale table entry with one correction
// per touched window cell. When the log reaches capacity ceil(sqrt(W)) -- W
// being the batch cost in work units -- the snapshots refresh.
//
// amortized    rebuilds run synchronously when the log fills.
// deamortized  a fresh rebuild job starts every ceil(capacity/2) updates and
//              every update advances the in-flight job by a fixed work-unit
//              budget; queries keep answering from the old snapshot plus the
//              full log until the job commits. The log capacity is doubled
//              to cover the overlap window, and no update ever triggers a
//              synchronous batch solve.
//
// Work units are the unit steps of the batch plans (element visits and
// butterflies), plus one unit per log append and one per query correction.

#include <cstdint>
#include <memory>
#include <optional>

#include "dynstr/batch.hpp"
#include "dynstr/dynamic_string.hpp"
#include "dynstr/local_fn.hpp"

namespace dynstr {

enum class LazyMode { amortized, deamortized };

struct LazyCounters {
  uint64_t rebuilds_total = 0;       // table refreshes of either kind
  uint64_t monolithic_rebuilds = 0;  // synchronous full solves after build
  uint64_t incremental_commits = 0;  // background jobs run to completion
  uint64_t build_work_units = 0;     // initial batch solve (excluded below)
  uint64_t work_units_total = 0;     // updates + queries since build
  uint64_t work_units_last_op = 0;
  uint64_t max_op_work_units = 0;
  uint64_t batch_work_last = 0;      // cost of the most recent batch solve
  size_t log_len = 0;
};

class LazyStructure {
 public:
  // Requires m <= n <= 2m. The alphabet must carry a wildcard for
  // em_weighted and must not for the other local functions.
  LazyStructure(DynamicString pattern, DynamicString text, LocalFn fn, LazyMode mode);

  size_t pattern_len() const { return live_p_.size(); }
  size_t text_len() const { return live_t_.size(); }
  size_t alignments() const { return live_t_.size() - live_p_.size() + 1; }
  size_t capacity() const { return capacity_; }
  LazyMode mode() const { return mode_; }
  LocalFn fn() const { return fn_; }
  const DynamicString& pattern() const { return live_p_; }
  const DynamicString& text() const { return live_t_; }
  const LazyCounters& counters() const { return counters_; }

  void update(Target target, size_t position, Symbol new_symbol);
  int64_t query(size_t i) const;

 private:
  struct Job {
    std::vector<Symbol> new_p, new_t;
    size_t log_prefix = 0;   // log entries already reflected in new_p/new_t
    size_t copy_cursor = 0;
    int stage = 0;           // 0 copy pattern, 1 copy text, 2 apply log, 3 solve
    std::unique_ptr<BatchPlan> plan;
    uint64_t consumed = 0;
  };

  void rebuild_monolithic();
  void start_job();
  uint64_t advance_job(uint64_t budget);
  void commit_job();
  uint64_t job_budget() const;
  void note_op(uint64_t work) const;

  LocalFn fn_;
  LazyMode mode_;
  DynamicString live_p_, live_t_;
  std::vector<Symbol> snap_p_, snap_t_;
  std::vector<int64_t> table_;
  UpdateLog log_;
  size_t capacity_ = 1;
  size_t half_window_ = 1;       // rebuild cadence in deamortized mode
  uint64_t budget_ref_ = 1;      // latest completed batch cost
  size_t updates_since_start_ = 0;
  std::optional<Job> job_;
  mutable LazyCounters counters_;
};

}  // namespace dynstr

#include "dynstr/lazy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dynstr {

namespace {

size_t isqrt_ceil(uint64_t w) {
  if (w <= 1) return w;
  auto s = static_cast<uint64_t>(std::sqrt(static_cast<double>(w)));
  while (s * s >= w) --s;
  while (s * s < w) ++s;
  return static_cast<size_t>(s);
}

}  // namespace

LazyStructure::LazyStructure(DynamicString pattern, DynamicString text, LocalFn fn,
                             LazyMode mode)
    : fn_(fn),
      mode_(mode),
      live_p_(std::move(pattern)),
      live_t_(std::move(text)),
      log_(1) {
  if (live_p_.role() != Target::pattern || live_t_.role() != Target::text)
    throw std::invalid_argument("expected a pattern string and a text string");
  if (!(live_p_.alphabet() == live_t_.alphabet()))
    throw std::invalid_argument("pattern and text must share an alphabet");
  const size_t m = live_p_.size(), n = live_t_.size();
  if (n < m || n > 2 * m)
    throw std::invalid_argument("core structure requires m <= n <= 2m");
  if (fn_ == LocalFn::em_weighted) {
    if (!live_p_.alphabet().wildcard_enabled())
      throw std::invalid_argument("weighted matching requires a wildcard alphabet");
    check_em_bound(live_p_.alphabet(), m);
  } else {
    if (live_p_.alphabet().wildcard_enabled())
      throw std::invalid_argument("this local function does not accept wildcard alphabets");
    if (fn_ == LocalFn::inner_product) check_ip_bound(live_p_.alphabet(), m);
  }

  snap_p_.assign(live_p_.data().begin(), live_p_.data().end());
  snap_t_.assign(live_t_.data().begin(), live_t_.data().end());
  auto plan = make_batch_plan(fn_, live_p_.alphabet(), snap_p_, snap_t_);
  BatchResult r = run_plan_to_completion(*plan);
  table_ = std::move(r.table.values);

  counters_.build_work_units = r.work_units;
  counters_.batch_work_last = r.work_units;
  budget_ref_ = std::max<uint64_t>(1, r.work_units);
  capacity_ = std::max<size_t>(1, isqrt_ceil(r.work_units));
  half_window_ = std::max<size_t>(1, (capacity_ + 1) / 2);
  log_.set_capacity(mode_ == LazyMode::amortized ? capacity_ : 2 * half_window_);
}

void LazyStructure::note_op(uint64_t work) const {
  counters_.work_units_total += work;
  counters_.work_units_last_op = work;
  counters_.max_op_work_units = std::max(counters_.max_op_work_units, work);
  counters_.log_len = log_.size();
}

uint64_t LazyStructure::job_budget() const {
  // A job costs the batch solve plus the snapshot copies and the log prefix
  // it absorbs (the prefix never exceeds the log capacity). 1.25x the latest
  // batch cost plus that fixed overhead, spread over half a window, finishes
  // with slack before the next job is due and stays under 4*sqrt(batch).
  const uint64_t overhead = snap_p_.size() + snap_t_.size() + log_.capacity();
  const uint64_t total = (5 * budget_ref_ + 3) / 4 + overhead;
  return std::max<uint64_t>(1, (total + half_window_ - 1) / half_window_);
}

void LazyStructure::update(Target target, size_t position, Symbol new_symbol) {
  DynamicString& s = target == Target::pattern ? live_p_ : live_t_;
  const Update u = s.apply_update(position, new_symbol);
  log_.push(u);
  uint64_t work = 1;

  if (mode_ == LazyMode::amortized) {
    if (log_.size() >= capacity_) {
      rebuild_monolithic();
      work += counters_.batch_work_last;
    }
  } else {
    ++updates_since_start_;
    if (!job_ && updates_since_start_ >= half_window_) start_job();
    if (job_) {
      uint64_t consumed = advance_job(job_budget());
      if (job_->stage == 3 && job_->plan->finished()) {
        commit_job();
      } else if (log_.full()) {
        // The next update would overflow the log, so the job finishes now.
        // Only reachable when the pacing reference lagged far behind an
        // unusually expensive solve; at realistic sizes the budget lands the
        // job with half a window to spare.
        consumed += advance_job(UINT64_MAX);
        commit_job();
      }
      work += consumed;
    }
  }
  note_op(work);
}

void LazyStructure::rebuild_monolithic() {
  snap_p_.assign(live_p_.data().begin(), live_p_.data().end());
  snap_t_.assign(live_t_.data().begin(), live_t_.data().end());
  auto plan = make_batch_plan(fn_, live_p_.alphabet(), snap_p_, snap_t_);
  BatchResult r = run_plan_to_completion(*plan);
  table_ = std::move(r.table.values);
  log_.clear();
  counters_.batch_work_last = r.work_units;
  counters_.rebuilds_total += 1;
  counters_.monolithic_rebuilds += 1;
  budget_ref_ = std::max<uint64_t>(1, r.work_units);
}

void LazyStructure::start_job() {
  job_.emplace();
  job_->log_prefix = log_.size();
  job_->new_p.resize(snap_p_.size());
  job_->new_t.resize(snap_t_.size());
  updates_since_start_ = 0;
}

uint64_t LazyStructure::advance_job(uint64_t budget) {
  Job& j = *job_;
  uint64_t used = 0;
  while (used < budget && j.stage < 3) {
    switch (j.stage) {
      case 0: {  // materialize the new pattern snapshot from the old one
        while (j.copy_cursor < snap_p_.size() && used < budget) {
          j.new_p[j.copy_cursor] = snap_p_[j.copy_cursor];
          ++j.copy_cursor;
          ++used;
        }
        if (j.copy_cursor == snap_p_.size()) {
          j.stage = 1;
          j.copy_cursor = 0;
        }
        break;
      }
      case 1: {
        while (j.copy_cursor < snap_t_.size() && used < budget) {
          j.new_t[j.copy_cursor] = snap_t_[j.copy_cursor];
          ++j.copy_cursor;
          ++used;
        }
        if (j.copy_cursor == snap_t_.size()) {
          j.stage = 2;
          j.copy_cursor = 0;
        }
        break;
      }
      case 2: {  // roll the already-logged updates into the new snapshot
        while (j.copy_cursor < j.log_prefix && used < budget) {
          const Update& u = log_[j.copy_cursor];
          (u.target == Target::pattern ? j.new_p : j.new_t)[u.position - 1] = u.new_symbol;
          ++j.copy_cursor;
          ++used;
        }
        if (j.copy_cursor == j.log_prefix) {
          j.plan = make_batch_plan(fn_, live_p_.alphabet(), j.new_p, j.new_t);
          j.stage = 3;
        }
        break;
      }
    }
  }
  if (j.stage == 3 && used < budget) used += j.plan->advance(budget - used);
  j.consumed += used;
  return used;
}

void LazyStructure::commit_job() {
  Job& j = *job_;
  table_ = j.plan->take_table().values;
  j.plan.reset();
  snap_p_ = std::move(j.new_p);
  snap_t_ = std::move(j.new_t);
  log_.drop_front(j.log_prefix);
  counters_.batch_work_last = j.consumed;
  counters_.rebuilds_total += 1;
  counters_.incremental_commits += 1;
  budget_ref_ = std::max<uint64_t>(1, j.consumed);
  job_.reset();
}

int64_t LazyStructure::query(size_t i) const {
  const size_t m = live_p_.size();
  if (i == 0 || i > alignments())
    throw std::out_of_range("alignment index out of range");

  int64_t value = table_[i - 1];
  // Collect the window cells any logged update touches; a cell is corrected
  // once even when several updates (or a pattern and a text update pairing
  // at the same cell) land on it.
  std::vector<size_t> cells;
  cells.reserve(log_.size());
  for (const Update& u : log_.entries()) {
    if (u.target == Target::pattern) {
      cells.push_back(u.position);
    } else if (u.position >= i && u.position < i + m) {
      cells.push_back(u.position - i + 1);
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  const auto live_p = live_p_.data();
  const auto live_t = live_t_.data();
  for (size_t k : cells) {
    const size_t tp = i + k - 2;  // 0-based text offset paired with cell k
    value -= local_eval(fn_, snap_p_[k - 1], snap_t_[tp]);
    value += local_eval(fn_, live_p[k - 1], live_t[tp]);
  }
  note_op(cells.size());
  return value;
}

}  // namespace dynstr

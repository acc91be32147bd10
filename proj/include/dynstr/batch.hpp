#pragma once

// Batch alignment-table solvers. Each solver computes, for every alignment
// i = 1..n-m+1, the sum of per-position local scores of the pattern against
// the text window starting at i. All solvers are exposed both as one-shot
// functions and as resumable plans whose advance(budget) runs a bounded
// number of unit steps (element fills, butterflies, list visits); running a
// plan to completion yields the same table no matter how it was sliced, and
// the unit steps double as the work-unit measure for cost accounting.

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "dynstr/alphabet.hpp"
#include "dynstr/dynamic_string.hpp"
#include "dynstr/local_fn.hpp"
#include "dynstr/ntt.hpp"

namespace dynstr {

struct AlignmentTable {
  size_t pattern_len = 0;
  std::vector<int64_t> values;  // values[i-1] belongs to alignment i

  size_t size() const { return values.size(); }
  int64_t at(size_t i) const {
    if (i == 0 || i > values.size()) throw std::out_of_range("alignment index out of range");
    return values[i - 1];
  }
};

struct BatchResult {
  AlignmentTable table;
  uint64_t work_units = 0;
};

class BatchPlan {
 public:
  virtual ~BatchPlan() = default;
  virtual uint64_t advance(uint64_t budget) = 0;
  virtual bool finished() const = 0;
  AlignmentTable take_table();

 protected:
  BatchPlan(size_t n, size_t m);
  size_t n_, m_, out_len_;
  std::vector<int64_t> acc_;
  bool taken_ = false;
};

// Per-letter correlation solver for small alphabets (sigma <= 64). For the
// binary alphabet it always runs both letter passes; otherwise letters absent
// from pattern or text are skipped.
class HdSmallPlan final : public BatchPlan {
 public:
  HdSmallPlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
              std::span<const Symbol> text);
  uint64_t advance(uint64_t budget) override;
  bool finished() const override { return phase_ == Phase::done; }

 private:
  enum class Phase { hist, corr, finalize, done };
  void start_letter_corr();

  Alphabet alphabet_;
  std::span<const Symbol> p_, t_;
  Phase phase_;
  size_t cursor_ = 0;
  std::vector<uint32_t> cnt_p_, cnt_t_;
  std::vector<Symbol> letters_;
  size_t letter_idx_ = 0;
  std::unique_ptr<ResumableCorrelation> corr_;
};

// Frequency-split solver for polynomial alphabets: letters frequent in the
// pattern get one correlation each, rare letters are handled by walking
// occurrence lists. The split threshold is ceil(sqrt(n / log2 n)), with ties
// going to the frequent side.
class HdLargePlan final : public BatchPlan {
 public:
  HdLargePlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
              std::span<const Symbol> text);
  uint64_t advance(uint64_t budget) override;
  bool finished() const override { return phase_ == Phase::done; }
  size_t threshold() const { return theta_; }
  size_t heavy_letter_count() const { return heavy_.size(); }

 private:
  enum class Phase { hist_p, hist_t, classify, occ, walk, corr, finalize, done };
  void start_heavy_corr();

  std::span<const Symbol> p_, t_;
  Phase phase_;
  size_t cursor_ = 0;
  size_t theta_;
  std::unordered_map<Symbol, uint32_t> cnt_p_, cnt_t_;
  std::unordered_map<Symbol, std::vector<uint32_t>> light_occ_;  // positions in pattern
  std::vector<Symbol> heavy_;
  size_t heavy_idx_ = 0;
  std::unordered_map<Symbol, uint32_t>::const_iterator classify_it_;
  std::unique_ptr<ResumableCorrelation> corr_;
};

// Single correlation of the raw integer sequences.
class IpPlan final : public BatchPlan {
 public:
  IpPlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
         std::span<const Symbol> text);
  uint64_t advance(uint64_t budget) override;
  bool finished() const override { return corr_->finished(); }

 private:
  std::unique_ptr<ResumableCorrelation> corr_;
};

// Weighted wildcard-match score via three correlations:
//   sum p^3 t - 2 sum p^2 t^2 + sum p t^3 = sum p t (p - t)^2,
// which is zero exactly when the window matches (wildcard encoded as 0).
class EmPlan final : public BatchPlan {
 public:
  EmPlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
         std::span<const Symbol> text);
  uint64_t advance(uint64_t budget) override;
  bool finished() const override { return stage_ == 2 && corr_->finished(); }

 private:
  void start_stage(int s);

  std::span<const Symbol> p_, t_;
  unsigned __int128 bound_;
  int stage_ = 0;
  std::unique_ptr<ResumableCorrelation> corr_;
};

// Solver selection for a local function over a given alphabet.
std::unique_ptr<BatchPlan> make_batch_plan(LocalFn fn, const Alphabet& alphabet,
                                           std::span<const Symbol> pattern,
                                           std::span<const Symbol> text);

// One-shot wrappers. All require 1 <= |P| <= |T| and matching alphabets.
BatchResult batch_hd_small_alphabet(const DynamicString& pattern, const DynamicString& text);
BatchResult batch_hd_large_alphabet(const DynamicString& pattern, const DynamicString& text);
BatchResult batch_ip(const DynamicString& pattern, const DynamicString& text);
BatchResult batch_em(const DynamicString& pattern, const DynamicString& text);

// Guards shared with the incremental engine: the largest table value a
// solver may produce, as a function of the alphabet. Throws
// std::overflow_error when it cannot fit the supported coefficient range.
void check_ip_bound(const Alphabet& alphabet, size_t m);
void check_em_bound(const Alphabet& alphabet, size_t m);

BatchResult run_plan_to_completion(BatchPlan& plan);

}  // namespace dynstr

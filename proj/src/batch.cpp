#include "dynstr/batch.hpp"

#include <cmath>
#include <stdexcept>

namespace dynstr {

namespace {

void check_pair(const DynamicString& p, const DynamicString& t) {
  if (p.role() != Target::pattern || t.role() != Target::text)
    throw std::invalid_argument("expected a pattern string and a text string");
  if (!(p.alphabet() == t.alphabet()))
    throw std::invalid_argument("pattern and text must share an alphabet");
  if (p.size() > t.size()) throw std::invalid_argument("pattern longer than text");
}

void require_no_wildcard(const Alphabet& a, const char* solver) {
  if (a.wildcard_enabled())
    throw std::invalid_argument(std::string(solver) + " does not accept wildcard alphabets");
}

}  // namespace

BatchPlan::BatchPlan(size_t n, size_t m) : n_(n), m_(m), out_len_(n - m + 1) {
  acc_.assign(out_len_, 0);
}

AlignmentTable BatchPlan::take_table() {
  if (!finished()) throw std::logic_error("plan not finished");
  if (taken_) throw std::logic_error("table already taken");
  taken_ = true;
  AlignmentTable t;
  t.pattern_len = m_;
  t.values = std::move(acc_);
  return t;
}

// ---------------------------------------------------------------- HdSmallPlan

HdSmallPlan::HdSmallPlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
                         std::span<const Symbol> text)
    : BatchPlan(text.size(), pattern.size()), alphabet_(alphabet), p_(pattern), t_(text) {
  if (!alphabet_.small_tier())
    throw std::invalid_argument("alphabet too large for the per-letter solver");
  require_no_wildcard(alphabet_, "per-letter distance solver");
  if (alphabet_.size() == 2) {
    // binary: always the two fixed passes (ones-matches + zeros-matches)
    letters_ = {0, 1};
    phase_ = Phase::corr;
  } else {
    cnt_p_.assign(alphabet_.size(), 0);
    cnt_t_.assign(alphabet_.size(), 0);
    phase_ = Phase::hist;
  }
}

void HdSmallPlan::start_letter_corr() {
  const Symbol a = letters_[letter_idx_];
  CorrelationSpec spec;
  spec.a_len = n_;
  spec.b_len = m_;
  spec.a_at = [t = t_, a](size_t i) -> uint64_t { return t[i] == a ? 1 : 0; };
  spec.b_at = [p = p_, a](size_t j) -> uint64_t { return p[j] == a ? 1 : 0; };
  spec.coef = 1;
  corr_ = std::make_unique<ResumableCorrelation>(std::move(spec), m_, &acc_);
}

uint64_t HdSmallPlan::advance(uint64_t budget) {
  uint64_t used = 0;
  while (used < budget && phase_ != Phase::done) {
    switch (phase_) {
      case Phase::hist: {
        while (cursor_ < m_ + n_ && used < budget) {
          if (cursor_ < m_)
            ++cnt_p_[p_[cursor_]];
          else
            ++cnt_t_[t_[cursor_ - m_]];
          ++cursor_;
          ++used;
        }
        if (cursor_ == m_ + n_) {
          for (Symbol a = 0; a < alphabet_.size(); ++a)
            if (cnt_p_[a] > 0 && cnt_t_[a] > 0) letters_.push_back(a);
          phase_ = Phase::corr;
        }
        break;
      }
      case Phase::corr: {
        if (letter_idx_ == letters_.size()) {
          phase_ = Phase::finalize;
          cursor_ = 0;
          break;
        }
        if (!corr_) start_letter_corr();
        used += corr_->advance(budget - used);
        if (corr_->finished()) {
          corr_.reset();
          ++letter_idx_;
        }
        break;
      }
      case Phase::finalize: {
        // acc currently holds match counts; the table stores mismatches
        while (cursor_ < out_len_ && used < budget) {
          acc_[cursor_] = static_cast<int64_t>(m_) - acc_[cursor_];
          ++cursor_;
          ++used;
        }
        if (cursor_ == out_len_) phase_ = Phase::done;
        break;
      }
      case Phase::done:
        break;
    }
  }
  return used;
}

// ---------------------------------------------------------------- HdLargePlan

HdLargePlan::HdLargePlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
                         std::span<const Symbol> text)
    : BatchPlan(text.size(), pattern.size()), p_(pattern), t_(text) {
  require_no_wildcard(alphabet, "frequency-split distance solver");
  const double n = static_cast<double>(n_);
  const double lg = std::max(1.0, std::log2(n));
  theta_ = static_cast<size_t>(std::ceil(std::sqrt(n / lg)));
  if (theta_ == 0) theta_ = 1;
  phase_ = Phase::hist_p;
}

void HdLargePlan::start_heavy_corr() {
  const Symbol a = heavy_[heavy_idx_];
  CorrelationSpec spec;
  spec.a_len = n_;
  spec.b_len = m_;
  spec.a_at = [t = t_, a](size_t i) -> uint64_t { return t[i] == a ? 1 : 0; };
  spec.b_at = [p = p_, a](size_t j) -> uint64_t { return p[j] == a ? 1 : 0; };
  spec.coef = 1;
  corr_ = std::make_unique<ResumableCorrelation>(std::move(spec), m_, &acc_);
}

uint64_t HdLargePlan::advance(uint64_t budget) {
  uint64_t used = 0;
  while (used < budget && phase_ != Phase::done) {
    switch (phase_) {
      case Phase::hist_p: {
        while (cursor_ < m_ && used < budget) {
          ++cnt_p_[p_[cursor_]];
          ++cursor_;
          ++used;
        }
        if (cursor_ == m_) {
          phase_ = Phase::hist_t;
          cursor_ = 0;
        }
        break;
      }
      case Phase::hist_t: {
        while (cursor_ < n_ && used < budget) {
          ++cnt_t_[t_[cursor_]];
          ++cursor_;
          ++used;
        }
        if (cursor_ == n_) {
          phase_ = Phase::classify;
          classify_it_ = cnt_p_.cbegin();
        }
        break;
      }
      case Phase::classify: {
        while (classify_it_ != cnt_p_.cend() && used < budget) {
          if (classify_it_->second >= theta_) {
            auto it = cnt_t_.find(classify_it_->first);
            if (it != cnt_t_.cend() && it->second > 0) heavy_.push_back(classify_it_->first);
          }
          ++classify_it_;
          ++used;
        }
        if (classify_it_ == cnt_p_.cend()) {
          phase_ = Phase::occ;
          cursor_ = 0;
        }
        break;
      }
      case Phase::occ: {
        while (cursor_ < m_ && used < budget) {
          const Symbol a = p_[cursor_];
          if (cnt_p_[a] < theta_) light_occ_[a].push_back(static_cast<uint32_t>(cursor_));
          ++cursor_;
          ++used;
        }
        if (cursor_ == m_) {
          phase_ = Phase::walk;
          cursor_ = 0;
        }
        break;
      }
      case Phase::walk: {
        // per text position, visit the pattern occurrences of its (rare) letter
        while (cursor_ < n_ && used < budget) {
          const size_t t_pos = cursor_;
          ++used;
          auto it = light_occ_.find(t_[t_pos]);
          if (it != light_occ_.cend()) {
            for (uint32_t j : it->second) {
              ++used;
              if (t_pos >= j) {
                const size_t i0 = t_pos - j;
                if (i0 < out_len_) ++acc_[i0];
              }
            }
          }
          ++cursor_;
        }
        if (cursor_ == n_) phase_ = Phase::corr;
        break;
      }
      case Phase::corr: {
        if (heavy_idx_ == heavy_.size()) {
          phase_ = Phase::finalize;
          cursor_ = 0;
          break;
        }
        if (!corr_) start_heavy_corr();
        used += corr_->advance(budget - used);
        if (corr_->finished()) {
          corr_.reset();
          ++heavy_idx_;
        }
        break;
      }
      case Phase::finalize: {
        while (cursor_ < out_len_ && used < budget) {
          acc_[cursor_] = static_cast<int64_t>(m_) - acc_[cursor_];
          ++cursor_;
          ++used;
        }
        if (cursor_ == out_len_) phase_ = Phase::done;
        break;
      }
      case Phase::done:
        break;
    }
  }
  return used;
}

// --------------------------------------------------------------------- IpPlan

void check_ip_bound(const Alphabet& alphabet, size_t m) {
  if (!coefficient_fits(alphabet.max_symbol(), 2, m))
    throw std::overflow_error("inner-product values would exceed the supported range");
}

IpPlan::IpPlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
               std::span<const Symbol> text)
    : BatchPlan(text.size(), pattern.size()) {
  require_no_wildcard(alphabet, "inner-product solver");
  check_ip_bound(alphabet, m_);
  const unsigned __int128 mx = alphabet.max_symbol();
  CorrelationSpec spec;
  spec.a_len = n_;
  spec.b_len = m_;
  spec.a_at = [t = text](size_t i) -> uint64_t { return t[i]; };
  spec.b_at = [p = pattern](size_t j) -> uint64_t { return p[j]; };
  spec.coef = 1;
  corr_ = std::make_unique<ResumableCorrelation>(
      std::move(spec), mx * mx * static_cast<unsigned __int128>(m_), &acc_);
}

uint64_t IpPlan::advance(uint64_t budget) { return corr_->advance(budget); }

// --------------------------------------------------------------------- EmPlan

void check_em_bound(const Alphabet& alphabet, size_t m) {
  if (!coefficient_fits(alphabet.max_symbol(), 4, m))
    throw std::overflow_error(
        "weighted match scores would exceed the supported range; "
        "remap symbols to ranks first");
}

EmPlan::EmPlan(const Alphabet& alphabet, std::span<const Symbol> pattern,
               std::span<const Symbol> text)
    : BatchPlan(text.size(), pattern.size()), p_(pattern), t_(text) {
  if (!alphabet.wildcard_enabled())
    throw std::invalid_argument("weighted match solver requires a wildcard alphabet");
  check_em_bound(alphabet, m_);
  const unsigned __int128 mx = alphabet.max_symbol();
  bound_ = mx * mx * mx * mx * static_cast<unsigned __int128>(m_);
  start_stage(0);
}

void EmPlan::start_stage(int s) {
  stage_ = s;
  auto cube = [](uint64_t v) { return v * v * v; };
  auto square = [](uint64_t v) { return v * v; };
  CorrelationSpec spec;
  spec.a_len = n_;
  spec.b_len = m_;
  switch (s) {
    case 0:  // + sum p^3 t
      spec.a_at = [t = t_](size_t i) -> uint64_t { return t[i]; };
      spec.b_at = [p = p_, cube](size_t j) -> uint64_t { return cube(p[j]); };
      spec.coef = 1;
      break;
    case 1:  // - 2 sum p^2 t^2
      spec.a_at = [t = t_, square](size_t i) -> uint64_t { return square(t[i]); };
      spec.b_at = [p = p_, square](size_t j) -> uint64_t { return square(p[j]); };
      spec.coef = -2;
      break;
    default:  // + sum p t^3
      spec.a_at = [t = t_, cube](size_t i) -> uint64_t { return cube(t[i]); };
      spec.b_at = [p = p_](size_t j) -> uint64_t { return p[j]; };
      spec.coef = 1;
      break;
  }
  corr_ = std::make_unique<ResumableCorrelation>(std::move(spec), bound_, &acc_);
}

uint64_t EmPlan::advance(uint64_t budget) {
  uint64_t used = 0;
  while (used < budget && !finished()) {
    used += corr_->advance(budget - used);
    if (corr_->finished() && stage_ < 2) start_stage(stage_ + 1);
  }
  return used;
}

// ------------------------------------------------------------------ selection

std::unique_ptr<BatchPlan> make_batch_plan(LocalFn fn, const Alphabet& alphabet,
                                           std::span<const Symbol> pattern,
                                           std::span<const Symbol> text) {
  switch (fn) {
    case LocalFn::hamming:
      if (alphabet.small_tier())
        return std::make_unique<HdSmallPlan>(alphabet, pattern, text);
      return std::make_unique<HdLargePlan>(alphabet, pattern, text);
    case LocalFn::inner_product:
      return std::make_unique<IpPlan>(alphabet, pattern, text);
    case LocalFn::em_weighted:
      return std::make_unique<EmPlan>(alphabet, pattern, text);
  }
  throw std::logic_error("unknown local function");
}

BatchResult run_plan_to_completion(BatchPlan& plan) {
  BatchResult r;
  while (!plan.finished()) r.work_units += plan.advance(UINT64_MAX);
  r.table = plan.take_table();
  return r;
}

BatchResult batch_hd_small_alphabet(const DynamicString& pattern, const DynamicString& text) {
  check_pair(pattern, text);
  HdSmallPlan plan(pattern.alphabet(), pattern.data(), text.data());
  return run_plan_to_completion(plan);
}

BatchResult batch_hd_large_alphabet(const DynamicString& pattern, const DynamicString& text) {
  check_pair(pattern, text);
  HdLargePlan plan(pattern.alphabet(), pattern.data(), text.data());
  return run_plan_to_completion(plan);
}

BatchResult batch_ip(const DynamicString& pattern, const DynamicString& text) {
  check_pair(pattern, text);
  IpPlan plan(pattern.alphabet(), pattern.data(), text.data());
  return run_plan_to_completion(plan);
}

BatchResult batch_em(const DynamicString& pattern, const DynamicString& text) {
  check_pair(pattern, text);
  EmPlan plan(pattern.alphabet(), pattern.data(), text.data());
  return run_plan_to_completion(plan);
}

}  // namespace dynstr

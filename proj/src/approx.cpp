#include "dynstr/approx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dynstr {

namespace {

// splitmix64: the per-column and per-table randomness; cheap to seed, so a
// fresh deterministic stream per (seed, key) costs nothing.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t s) : state(s) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

uint64_t mix(uint64_t x) { return SplitMix64(x).next(); }
uint64_t mix2(uint64_t a, uint64_t b) { return mix(a ^ (mix(b) + 0x517cc1b727220a95ULL)); }

constexpr size_t kMaxNnz = 1024;

void check_approx_pair(const DynamicString& pattern, const DynamicString& text,
                       double epsilon) {
  if (pattern.role() != Target::pattern || text.role() != Target::text)
    throw std::invalid_argument("arguments must be a pattern and a text, in that order");
  if (!(pattern.alphabet() == text.alphabet()))
    throw std::invalid_argument("pattern and text must share an alphabet");
  if (pattern.size() > text.size())
    throw std::invalid_argument("pattern must not be longer than the text");
  if (pattern.alphabet().wildcard_enabled())
    throw std::invalid_argument("Hamming distance is over plain alphabets, no wildcard");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1]");
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1]");
}

size_t sketch_rows_for(double epsilon, const ApproxConfig& cfg) {
  check_epsilon(epsilon);
  return static_cast<size_t>(std::ceil(cfg.c_d / (epsilon * epsilon)));
}

size_t column_nnz_for(double epsilon, const ApproxConfig& cfg) {
  check_epsilon(epsilon);
  return static_cast<size_t>(std::ceil(cfg.c_s / epsilon));
}

double median_of(std::vector<double>& v) {
  std::nth_element(v.begin(), v.begin() + static_cast<ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

SparseProjection::SparseProjection(size_t rows, size_t nnz_per_column, uint64_t seed)
    : d_(rows), s_(nnz_per_column), seed_(seed) {
  if (d_ == 0 || s_ == 0) throw std::invalid_argument("projection dimensions must be positive");
  if (s_ > d_)
    throw std::invalid_argument("per-column sparsity cannot exceed the row count");
  if (s_ > kMaxNnz)
    throw std::invalid_argument("per-column sparsity too large; increase epsilon");
}

size_t SparseProjection::accumulate(std::span<int64_t> sketch, uint64_t key,
                                    int64_t delta) const {
  SplitMix64 rng(mix2(seed_, key));
  uint32_t rows[kMaxNnz];
  for (size_t j = 0; j < s_; ++j) {
    uint32_t row;
    bool dup;
    do {
      row = static_cast<uint32_t>(rng.next() % d_);
      dup = false;
      for (size_t q = 0; q < j; ++q)
        if (rows[q] == row) {
          dup = true;
          break;
        }
    } while (dup);
    rows[j] = row;
    int64_t sign = (rng.next() & 1u) ? 1 : -1;
    sketch[row] += delta * sign;
  }
  return s_;
}

int64_t sketch_sq_diff(std::span<const int64_t> a, std::span<const int64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sketch dimensions differ");
  int64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

ApproxHdPatternUpdates::ApproxHdPatternUpdates(const DynamicString& pattern,
                                               const DynamicString& text, double epsilon,
                                               uint64_t seed, const ApproxConfig& cfg,
                                               bool eager_windows)
    : pattern_(pattern),
      text_(text),
      eps_(epsilon),
      unary_(pattern.alphabet().max_symbol() > 1),
      proj_(sketch_rows_for(epsilon, cfg), column_nnz_for(epsilon, cfg), mix2(seed, 1)) {
  check_approx_pair(pattern, text, epsilon);
  if (!pattern.alphabet().small_tier())
    throw std::invalid_argument(
        "sketching needs a small alphabet; reduce a large one to binary first");
  psketch_.assign(proj_.rows(), 0);
  uint64_t work = 0;
  for (size_t j = 1; j <= pattern_.size(); ++j)
    add_symbol(psketch_, j, pattern_.at(j), +1, work);
  if (eager_windows)
    for (size_t i = 1; i <= alignments(); ++i) window_sketch(i, work);
  counters_.work_units_total += work;
}

uint64_t ApproxHdPatternUpdates::column_key(size_t rel_pos, Symbol s) const {
  return unary_ ? (static_cast<uint64_t>(rel_pos) << 32) | s : static_cast<uint64_t>(rel_pos);
}

void ApproxHdPatternUpdates::add_symbol(std::span<int64_t> sketch, size_t rel_pos, Symbol sym,
                                        int64_t sign, uint64_t& work) const {
  if (unary_) {
    work += proj_.accumulate(sketch, column_key(rel_pos, sym), sign);
  } else if (sym != 0) {
    work += proj_.accumulate(sketch, column_key(rel_pos, sym), sign * static_cast<int64_t>(sym));
  }
}

void ApproxHdPatternUpdates::update_pattern(size_t position, Symbol s) {
  Update u = pattern_.apply_update(position, s);
  uint64_t work = 0;
  if (u.old_symbol != u.new_symbol) {
    if (unary_) {
      work += proj_.accumulate(psketch_, column_key(position, u.old_symbol), -1);
      work += proj_.accumulate(psketch_, column_key(position, u.new_symbol), +1);
    } else {
      work += proj_.accumulate(psketch_, column_key(position, 1),
                               static_cast<int64_t>(u.new_symbol) -
                                   static_cast<int64_t>(u.old_symbol));
    }
  }
  ++counters_.updates;
  note_op(work);
}

void ApproxHdPatternUpdates::update_text(size_t, Symbol) {
  throw std::logic_error("the text is immutable in the pattern-updates model");
}

const std::vector<int64_t>& ApproxHdPatternUpdates::window_sketch(size_t i,
                                                                  uint64_t& work) const {
  auto it = windows_.find(i);
  if (it != windows_.end()) return it->second;
  std::vector<int64_t> ws(proj_.rows(), 0);
  for (size_t j = 1; j <= pattern_.size(); ++j)
    add_symbol(ws, j, text_.at(i + j - 1), +1, work);
  return windows_.emplace(i, std::move(ws)).first->second;
}

double ApproxHdPatternUpdates::query(size_t i) const {
  if (i == 0 || i > alignments())
    throw std::out_of_range("alignment " + std::to_string(i) + " out of range 1.." +
                            std::to_string(alignments()));
  uint64_t work = 0;
  const std::vector<int64_t>& ws = window_sketch(i, work);
  int64_t sq = sketch_sq_diff(psketch_, ws);
  work += proj_.rows();
  double est = static_cast<double>(sq) / static_cast<double>(proj_.nnz_per_column());
  if (unary_) est /= 2.0;
  ++counters_.queries;
  note_op(work);
  return est;
}

std::vector<int64_t> ApproxHdPatternUpdates::pattern_sketch_from_scratch() const {
  std::vector<int64_t> fresh(proj_.rows(), 0);
  uint64_t work = 0;
  for (size_t j = 1; j <= pattern_.size(); ++j)
    add_symbol(fresh, j, pattern_.at(j), +1, work);
  return fresh;
}

void ApproxHdPatternUpdates::note_op(uint64_t work) const {
  counters_.work_units_last_op = work;
  counters_.work_units_total += work;
}

namespace {

// Key layout for memoized block/piece sketches: level in the top byte,
// repetition next, block index or piece start in the low bits.
uint64_t bank_key(size_t level, size_t rho, size_t index) {
  return (static_cast<uint64_t>(level) << 56) | (static_cast<uint64_t>(rho) << 44) |
         static_cast<uint64_t>(index);
}

}  // namespace

ApproxHdTextUpdates::ApproxHdTextUpdates(const DynamicString& pattern,
                                         const DynamicString& text, double epsilon,
                                         uint64_t seed, const ApproxConfig& cfg, Prep prep)
    : pattern_(pattern),
      text_(text),
      eps_(epsilon),
      unary_(pattern.alphabet().max_symbol() > 1),
      d_(sketch_rows_for(epsilon, cfg)),
      s_(column_nnz_for(epsilon, cfg)) {
  check_approx_pair(pattern, text, epsilon);
  if (!pattern.alphabet().small_tier())
    throw std::invalid_argument(
        "sketching needs a small alphabet; reduce a large one to binary first");
  size_t m = pattern_.size();
  levels_ = m > 1 ? static_cast<size_t>(std::ceil(std::log2(static_cast<double>(m)))) : 0;
  double ll = m > 4 ? std::log2(std::log2(static_cast<double>(m))) : 1.0;
  r_ = static_cast<size_t>(std::ceil(cfg.c_r * std::max(1.0, ll)));
  if (r_ == 0) r_ = 1;
  if (r_ % 2 == 0) ++r_;  // odd count keeps the median a single sample
  families_.reserve(levels_ * r_);
  for (size_t k = 1; k <= levels_; ++k)
    for (size_t rho = 0; rho < r_; ++rho)
      families_.emplace_back(d_, s_, mix2(seed, bank_key(k, rho, 0)));
  if (prep == Prep::eager) {
    uint64_t work = 0;
    for (size_t k = 1; k <= levels_; ++k) {
      size_t len = size_t{1} << k;
      if (len > m) continue;
      for (size_t rho = 0; rho < r_; ++rho) {
        for (size_t start = 1; start + len - 1 <= m; ++start) piece_sketch(k, start, rho, work);
        for (size_t b = 0; (b + 1) * len <= text_.size(); ++b) block_sketch(k, b, rho, work);
      }
    }
    counters_.work_units_total += work;
  }
}

const SparseProjection& ApproxHdTextUpdates::family(size_t level, size_t rho) const {
  return families_[(level - 1) * r_ + rho];
}

uint64_t ApproxHdTextUpdates::column_key(size_t offset, Symbol s) const {
  return unary_ ? (static_cast<uint64_t>(offset) << 32) | s : static_cast<uint64_t>(offset);
}

std::vector<int64_t> ApproxHdTextUpdates::build_block(size_t level, size_t block, size_t rho,
                                                      uint64_t& work) const {
  size_t len = size_t{1} << level;
  std::vector<int64_t> sk(d_, 0);
  const SparseProjection& proj = family(level, rho);
  for (size_t off = 1; off <= len; ++off) {
    Symbol sym = text_.at(block * len + off);
    if (unary_)
      work += proj.accumulate(sk, column_key(off, sym), +1);
    else if (sym != 0)
      work += proj.accumulate(sk, column_key(off, sym), static_cast<int64_t>(sym));
  }
  return sk;
}

std::vector<int64_t> ApproxHdTextUpdates::build_piece(size_t level, size_t start, size_t rho,
                                                      uint64_t& work) const {
  size_t len = size_t{1} << level;
  std::vector<int64_t> sk(d_, 0);
  const SparseProjection& proj = family(level, rho);
  for (size_t off = 1; off <= len; ++off) {
    Symbol sym = pattern_.at(start + off - 1);
    if (unary_)
      work += proj.accumulate(sk, column_key(off, sym), +1);
    else if (sym != 0)
      work += proj.accumulate(sk, column_key(off, sym), static_cast<int64_t>(sym));
  }
  return sk;
}

const std::vector<int64_t>& ApproxHdTextUpdates::block_sketch(size_t level, size_t block,
                                                              size_t rho,
                                                              uint64_t& work) const {
  uint64_t key = bank_key(level, rho, block);
  auto it = blocks_.find(key);
  if (it != blocks_.end()) return it->second;
  return blocks_.emplace(key, build_block(level, block, rho, work)).first->second;
}

const std::vector<int64_t>& ApproxHdTextUpdates::piece_sketch(size_t level, size_t start,
                                                              size_t rho,
                                                              uint64_t& work) const {
  uint64_t key = bank_key(level, rho, start);
  auto it = pieces_.find(key);
  if (it != pieces_.end()) return it->second;
  return pieces_.emplace(key, build_piece(level, start, rho, work)).first->second;
}

void ApproxHdTextUpdates::update_pattern(size_t, Symbol) {
  throw std::logic_error("the pattern is immutable in the text-updates model");
}

void ApproxHdTextUpdates::update_text(size_t position, Symbol s) {
  Update u = text_.apply_update(position, s);
  uint64_t work = 0;
  if (u.old_symbol != u.new_symbol) {
    size_t m = pattern_.size();
    for (size_t k = 1; k <= levels_; ++k) {
      size_t len = size_t{1} << k;
      if (len > m) continue;
      size_t b = (position - 1) >> k;
      if ((b + 1) * len > text_.size()) continue;  // truncated tail, never sketched
      for (size_t rho = 0; rho < r_; ++rho) {
        auto it = blocks_.find(bank_key(k, rho, b));
        if (it == blocks_.end()) continue;  // deferred and untouched: built later, live
        const SparseProjection& proj = family(k, rho);
        size_t off = position - b * len;
        if (unary_) {
          work += proj.accumulate(it->second, column_key(off, u.old_symbol), -1);
          work += proj.accumulate(it->second, column_key(off, u.new_symbol), +1);
        } else {
          work += proj.accumulate(it->second, column_key(off, 1),
                                  static_cast<int64_t>(u.new_symbol) -
                                      static_cast<int64_t>(u.old_symbol));
        }
      }
    }
  }
  ++counters_.updates;
  note_op(work);
}

double ApproxHdTextUpdates::query(size_t i) const {
  if (i == 0 || i > alignments())
    throw std::out_of_range("alignment " + std::to_string(i) + " out of range 1.." +
                            std::to_string(alignments()));
  uint64_t work = 0;
  size_t m = pattern_.size();
  size_t end = i + m - 1;
  double total = 0.0;
  std::vector<double> ests;
  ests.reserve(r_);
  size_t pos = i;
  while (pos <= end) {
    size_t remaining = end - pos + 1;
    size_t align = pos == 1 ? 64 : static_cast<size_t>(std::countr_zero(pos - 1));
    size_t k = std::min({align, static_cast<size_t>(std::bit_width(remaining)) - 1, levels_});
    if (k == 0) {
      total += pattern_.at(pos - i + 1) != text_.at(pos) ? 1.0 : 0.0;
      work += 1;
      pos += 1;
      continue;
    }
    size_t len = size_t{1} << k;
    size_t block = (pos - 1) >> k;
    size_t start = pos - i + 1;
    ests.clear();
    for (size_t rho = 0; rho < r_; ++rho) {
      int64_t sq = sketch_sq_diff(block_sketch(k, block, rho, work),
                                  piece_sketch(k, start, rho, work));
      work += d_;
      double e = static_cast<double>(sq) / static_cast<double>(s_);
      if (unary_) e /= 2.0;
      ests.push_back(e);
    }
    total += median_of(ests);
    pos += len;
  }
  ++counters_.queries;
  note_op(work);
  return total;
}

std::span<const int64_t> ApproxHdTextUpdates::text_block_sketch(size_t level, size_t block,
                                                                size_t rho) const {
  uint64_t work = 0;
  return block_sketch(level, block, rho, work);
}

std::vector<int64_t> ApproxHdTextUpdates::text_block_sketch_from_scratch(size_t level,
                                                                         size_t block,
                                                                         size_t rho) const {
  uint64_t work = 0;
  return build_block(level, block, rho, work);
}

void ApproxHdTextUpdates::note_op(uint64_t work) const {
  counters_.work_units_last_op = work;
  counters_.work_units_total += work;
}

MappingBank::MappingBank(size_t map_count, uint32_t table_size, uint64_t seed) {
  if (map_count == 0) throw std::invalid_argument("bank needs at least one map");
  if (table_size == 0) throw std::invalid_argument("map tables must cover the alphabet");
  tables_.resize(map_count);
  for (size_t j = 0; j < map_count; ++j) {
    SplitMix64 rng(mix2(seed, j));
    tables_[j].resize(table_size);
    for (uint32_t s = 0; s < table_size; ++s)
      tables_[j][s] = static_cast<uint8_t>(rng.next() & 1u);
  }
}

MappingBank::MappingBank(std::vector<std::vector<uint8_t>> tables)
    : tables_(std::move(tables)) {
  if (tables_.empty()) throw std::invalid_argument("bank needs at least one map");
  for (const auto& t : tables_) {
    if (t.size() != tables_.front().size())
      throw std::invalid_argument("all map tables must cover the same alphabet");
    for (uint8_t b : t)
      if (b > 1) throw std::invalid_argument("map tables must be 0/1 valued");
  }
}

size_t MappingBank::recommended_size(double epsilon, size_t n, double c_map) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  double L = std::max(1.0, std::log2(static_cast<double>(n)));
  return std::max<size_t>(1, static_cast<size_t>(std::ceil(c_map * L * L / (epsilon * epsilon))));
}

ApproxHdPolyAlphabet::ApproxHdPolyAlphabet(const DynamicString& pattern,
                                           const DynamicString& text, double epsilon,
                                           ApproxModel model, uint64_t seed,
                                           const ApproxConfig& cfg)
    : ApproxHdPolyAlphabet(pattern, text, epsilon, model, seed,
                           MappingBank(MappingBank::recommended_size(epsilon, text.size(),
                                                                     cfg.c_map),
                                       pattern.alphabet().max_symbol() + 1, mix2(seed, 2)),
                           cfg) {}

ApproxHdPolyAlphabet::ApproxHdPolyAlphabet(const DynamicString& pattern,
                                           const DynamicString& text, double epsilon,
                                           ApproxModel model, uint64_t seed, MappingBank bank,
                                           const ApproxConfig& cfg)
    : pattern_(pattern), text_(text), eps_(epsilon), model_(model), bank_(std::move(bank)) {
  check_approx_pair(pattern, text, epsilon);
  if (bank_.table_size() < pattern.alphabet().max_symbol() + 1)
    throw std::invalid_argument("map tables must cover the alphabet");
  build_substructures(seed, cfg);
}

void ApproxHdPolyAlphabet::build_substructures(uint64_t seed, const ApproxConfig& cfg) {
  Alphabet bin = binary_alphabet();
  size_t k = bank_.size();
  for (size_t j = 0; j < k; ++j) {
    std::vector<Symbol> mp(pattern_.size()), mt(text_.size());
    for (size_t x = 1; x <= pattern_.size(); ++x) mp[x - 1] = bank_.map(j, pattern_.at(x));
    for (size_t x = 1; x <= text_.size(); ++x) mt[x - 1] = bank_.map(j, text_.at(x));
    DynamicString p(Target::pattern, bin, std::move(mp));
    DynamicString t(Target::text, bin, std::move(mt));
    switch (model_) {
      case ApproxModel::both_updates:
        exact_.push_back(std::make_unique<DynHd>(p, t, UpdateModel::pattern_and_text,
                                                 LazyMode::amortized));
        break;
      case ApproxModel::pattern_updates:
        sketch_p_.push_back(std::make_unique<ApproxHdPatternUpdates>(
            p, t, eps_, mix2(seed, 3 + j), cfg, /*eager_windows=*/false));
        break;
      case ApproxModel::text_updates:
        sketch_t_.push_back(std::make_unique<ApproxHdTextUpdates>(
            p, t, eps_, mix2(seed, 3 + j), cfg, ApproxHdTextUpdates::Prep::deferred));
        break;
    }
  }
}

double ApproxHdPolyAlphabet::effective_epsilon() const {
  return model_ == ApproxModel::both_updates ? eps_ : 2.0 * eps_ + eps_ * eps_;
}

void ApproxHdPolyAlphabet::update_pattern(size_t position, Symbol s) {
  if (model_ == ApproxModel::text_updates)
    throw std::logic_error("pattern updates are disabled in the text-updates model");
  Update u = pattern_.apply_update(position, s);
  uint64_t work = 0;
  for (size_t j = 0; j < bank_.size(); ++j) {
    uint8_t ob = bank_.map(j, u.old_symbol), nb = bank_.map(j, u.new_symbol);
    if (ob == nb) continue;  // the mapped string did not change
    if (model_ == ApproxModel::both_updates) {
      exact_[j]->update_pattern(position, nb);
      work += exact_[j]->core().counters().work_units_last_op;
    } else {
      sketch_p_[j]->update_pattern(position, nb);
      work += sketch_p_[j]->counters().work_units_last_op;
    }
  }
  ++counters_.updates;
  note_op(work);
}

void ApproxHdPolyAlphabet::update_text(size_t position, Symbol s) {
  if (model_ == ApproxModel::pattern_updates)
    throw std::logic_error("text updates are disabled in the pattern-updates model");
  Update u = text_.apply_update(position, s);
  uint64_t work = 0;
  for (size_t j = 0; j < bank_.size(); ++j) {
    uint8_t ob = bank_.map(j, u.old_symbol), nb = bank_.map(j, u.new_symbol);
    if (ob == nb) continue;
    if (model_ == ApproxModel::both_updates) {
      exact_[j]->update_text(position, nb);
      work += exact_[j]->core().counters().work_units_last_op;
    } else {
      sketch_t_[j]->update_text(position, nb);
      work += sketch_t_[j]->counters().work_units_last_op;
    }
  }
  ++counters_.updates;
  note_op(work);
}

double ApproxHdPolyAlphabet::query(size_t i) const {
  if (i == 0 || i > alignments())
    throw std::out_of_range("alignment " + std::to_string(i) + " out of range 1.." +
                            std::to_string(alignments()));
  uint64_t work = 0;
  double sum = 0.0;
  for (size_t j = 0; j < bank_.size(); ++j) {
    switch (model_) {
      case ApproxModel::both_updates:
        sum += static_cast<double>(exact_[j]->query(i));
        work += exact_[j]->core().counters().work_units_last_op;
        break;
      case ApproxModel::pattern_updates:
        sum += sketch_p_[j]->query(i);
        work += sketch_p_[j]->counters().work_units_last_op;
        break;
      case ApproxModel::text_updates:
        sum += sketch_t_[j]->query(i);
        work += sketch_t_[j]->counters().work_units_last_op;
        break;
    }
  }
  ++counters_.queries;
  note_op(work);
  return MappingBank::normalization * sum / static_cast<double>(bank_.size());
}

void ApproxHdPolyAlphabet::note_op(uint64_t work) const {
  counters_.work_units_last_op = work;
  counters_.work_units_total += work;
}

}  // namespace dynstr

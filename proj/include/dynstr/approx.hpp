#pragma once

// (1+eps)-approximate dynamic Hamming distance.
//
// Three structures, one per update model:
//  - pattern updates only: one sparse random projection; the pattern sketch
//    is maintained incrementally (s rows per update) and text-window
//    sketches are formed on demand and memoized, so a query is one squared
//    L2 difference of d-dimensional integer vectors.
//  - text updates only: every aligned dyadic text block of length 2^k
//    (k = 1..ceil(log2 m)) carries r independent sketches; the query window
//    decomposes into at most two such blocks per level plus at most two
//    single positions (compared exactly on the live strings), each block is
//    estimated by the median of its r sketch comparisons against the aligned
//    pattern piece, and the estimates sum.
//  - polynomial alphabets: a bank of random symbol->bit maps turns the
//    instance into k binary ones; twice the average of the per-map binary
//    distances estimates the true distance. The binary instances are exact
//    structures when both sides update, and sketch structures (with deferred
//    preprocessing) under the restricted models, which widens the error to
//    eps' = 2*eps + eps^2.
//
// Sketches store integer M*x and defer the 1/sqrt(s) column scale to query
// time, so incremental maintenance is exact: the maintained sketch equals
// the from-scratch sketch of the live string bit for bit. Alphabets with
// more than two letters are expanded in unary -- columns are keyed by
// (position, symbol) and an estimate halves, since a mismatch contributes 2.
// All randomness derives from the build seed; equal seeds give equal
// estimates. Every path returns exactly 0 when the distance is 0.

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "dynstr/blocked.hpp"
#include "dynstr/dynamic_string.hpp"

namespace dynstr {

struct ApproxConfig {
  double c_map = 4.0;  // map count multiplier: k = ceil(c_map * log2^2(n) / eps^2)
  double c_d = 8.0;    // sketch rows: d = ceil(c_d / eps^2)
  double c_s = 2.0;    // nonzeros per column: s = ceil(c_s / eps)
  double c_r = 3.0;    // repetitions: r = ceil(c_r * log2 log2 m), forced odd
};

struct ApproxCounters {
  uint64_t updates = 0;
  uint64_t queries = 0;
  uint64_t work_units_total = 0;  // sketch cells touched + exact compares
  uint64_t work_units_last_op = 0;
};

// d-row projection whose columns have s signed nonzero entries in distinct
// rows, derived deterministically from (seed, column key).
class SparseProjection {
 public:
  SparseProjection(size_t rows, size_t nnz_per_column, uint64_t seed);

  size_t rows() const { return d_; }
  size_t nnz_per_column() const { return s_; }

  // sketch += delta * column(key); returns the number of rows touched (= s).
  size_t accumulate(std::span<int64_t> sketch, uint64_t key, int64_t delta) const;

 private:
  size_t d_, s_;
  uint64_t seed_;
};

int64_t sketch_sq_diff(std::span<const int64_t> a, std::span<const int64_t> b);

class ApproxHdPatternUpdates {
 public:
  ApproxHdPatternUpdates(const DynamicString& pattern, const DynamicString& text,
                         double epsilon, uint64_t seed, const ApproxConfig& cfg = {},
                         bool eager_windows = false);

  size_t pattern_len() const { return pattern_.size(); }
  size_t text_len() const { return text_.size(); }
  size_t alignments() const { return text_.size() - pattern_.size() + 1; }
  double epsilon() const { return eps_; }
  size_t sketch_rows() const { return proj_.rows(); }
  size_t column_nnz() const { return proj_.nnz_per_column(); }
  const DynamicString& pattern() const { return pattern_; }
  const DynamicString& text() const { return text_; }
  const ApproxCounters& counters() const { return counters_; }

  void update_pattern(size_t position, Symbol s);
  // The text is immutable in this model.
  [[noreturn]] void update_text(size_t position, Symbol s);

  double query(size_t i) const;

  // Test hooks: the incrementally maintained sketch and a fresh rebuild of
  // it from the live pattern; they must agree exactly.
  const std::vector<int64_t>& pattern_sketch() const { return psketch_; }
  std::vector<int64_t> pattern_sketch_from_scratch() const;

 private:
  uint64_t column_key(size_t rel_pos, Symbol s) const;
  void add_symbol(std::span<int64_t> sketch, size_t rel_pos, Symbol sym, int64_t sign,
                  uint64_t& work) const;
  const std::vector<int64_t>& window_sketch(size_t i, uint64_t& work) const;
  void note_op(uint64_t work) const;

  DynamicString pattern_, text_;
  double eps_;
  bool unary_;  // alphabet larger than binary: (position, symbol) columns
  SparseProjection proj_;
  std::vector<int64_t> psketch_;
  mutable std::unordered_map<size_t, std::vector<int64_t>> windows_;
  mutable ApproxCounters counters_;
};

class ApproxHdTextUpdates {
 public:
  enum class Prep { eager, deferred };

  ApproxHdTextUpdates(const DynamicString& pattern, const DynamicString& text,
                      double epsilon, uint64_t seed, const ApproxConfig& cfg = {},
                      Prep prep = Prep::eager);

  size_t pattern_len() const { return pattern_.size(); }
  size_t text_len() const { return text_.size(); }
  size_t alignments() const { return text_.size() - pattern_.size() + 1; }
  double epsilon() const { return eps_; }
  size_t levels() const { return levels_; }
  size_t repetitions() const { return r_; }
  size_t sketch_rows() const { return d_; }
  const DynamicString& pattern() const { return pattern_; }
  const DynamicString& text() const { return text_; }
  const ApproxCounters& counters() const { return counters_; }

  // The pattern is immutable in this model.
  [[noreturn]] void update_pattern(size_t position, Symbol s);
  void update_text(size_t position, Symbol s);

  double query(size_t i) const;

  // Test hooks: the maintained sketch of an aligned text block (level k,
  // 0-based block index, repetition rho) and its from-scratch rebuild.
  std::span<const int64_t> text_block_sketch(size_t level, size_t block, size_t rho) const;
  std::vector<int64_t> text_block_sketch_from_scratch(size_t level, size_t block,
                                                      size_t rho) const;

 private:
  const SparseProjection& family(size_t level, size_t rho) const;
  uint64_t column_key(size_t offset, Symbol s) const;
  std::vector<int64_t> build_block(size_t level, size_t block, size_t rho,
                                   uint64_t& work) const;
  std::vector<int64_t> build_piece(size_t level, size_t start, size_t rho,
                                   uint64_t& work) const;
  const std::vector<int64_t>& block_sketch(size_t level, size_t block, size_t rho,
                                           uint64_t& work) const;
  const std::vector<int64_t>& piece_sketch(size_t level, size_t start, size_t rho,
                                           uint64_t& work) const;
  void note_op(uint64_t work) const;

  DynamicString pattern_, text_;
  double eps_;
  bool unary_;
  size_t d_, s_, r_, levels_;
  std::vector<SparseProjection> families_;  // (level-1)*r_ + rho
  // Keys pack (level, 0-based block index or 1-based piece start, rho).
  mutable std::unordered_map<uint64_t, std::vector<int64_t>> blocks_, pieces_;
  mutable ApproxCounters counters_;
};

// Bank of symbol->bit lookup tables. Twice the average over the bank of the
// binary Hamming distances of the mapped strings is an unbiased estimate of
// the true distance: a uniformly random map separates a fixed unequal pair
// with probability exactly 1/2 and never separates an equal pair.
class MappingBank {
 public:
  MappingBank(size_t map_count, uint32_t table_size, uint64_t seed);
  explicit MappingBank(std::vector<std::vector<uint8_t>> tables);  // test injection

  size_t size() const { return tables_.size(); }
  uint32_t table_size() const { return static_cast<uint32_t>(tables_.front().size()); }
  uint8_t map(size_t j, Symbol s) const { return tables_[j][s]; }

  static size_t recommended_size(double epsilon, size_t n, double c_map);
  static constexpr double normalization = 2.0;

 private:
  std::vector<std::vector<uint8_t>> tables_;
};

enum class ApproxModel { pattern_updates, text_updates, both_updates };

class ApproxHdPolyAlphabet {
 public:
  ApproxHdPolyAlphabet(const DynamicString& pattern, const DynamicString& text,
                       double epsilon, ApproxModel model, uint64_t seed,
                       const ApproxConfig& cfg = {});
  // Test constructor with an explicit bank.
  ApproxHdPolyAlphabet(const DynamicString& pattern, const DynamicString& text,
                       double epsilon, ApproxModel model, uint64_t seed, MappingBank bank,
                       const ApproxConfig& cfg = {});

  size_t pattern_len() const { return pattern_.size(); }
  size_t text_len() const { return text_.size(); }
  size_t alignments() const { return text_.size() - pattern_.size() + 1; }
  ApproxModel model() const { return model_; }
  double epsilon() const { return eps_; }
  // eps for the exact-substructure path, 2*eps + eps^2 for composed paths.
  double effective_epsilon() const;
  size_t map_count() const { return bank_.size(); }
  const MappingBank& bank() const { return bank_; }
  const DynamicString& pattern() const { return pattern_; }
  const DynamicString& text() const { return text_; }
  const ApproxCounters& counters() const { return counters_; }

  void update_pattern(size_t position, Symbol s);
  void update_text(size_t position, Symbol s);

  double query(size_t i) const;

 private:
  void build_substructures(uint64_t seed, const ApproxConfig& cfg);
  void note_op(uint64_t work) const;

  DynamicString pattern_, text_;
  double eps_;
  ApproxModel model_;
  MappingBank bank_;
  std::vector<std::unique_ptr<DynHd>> exact_;
  std::vector<std::unique_ptr<ApproxHdPatternUpdates>> sketch_p_;
  std::vector<std::unique_ptr<ApproxHdTextUpdates>> sketch_t_;
  mutable ApproxCounters counters_;
};

}  // namespace dynstr

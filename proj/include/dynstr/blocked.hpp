#pragma once

// Text-block decomposition lifting the core structure (which needs
// m <= n <= 2m) to arbitrary n >= m: overlapping blocks of length 2m stride
// m apart, alignment i is served by block floor((i-1)/m) (clamped to the
// last block), a text update touches at most two blocks, and a pattern
// update fans out to all of them. Problem-facing wrappers (Hamming distance,
// inner product, wildcard matching) sit on top.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dynstr/lazy.hpp"

namespace dynstr {

enum class UpdateModel { text_only, pattern_and_text };

struct BlockedCounters {
  uint64_t updates = 0;
  uint64_t queries = 0;
  uint64_t work_units_total = 0;
  uint64_t work_units_last_op = 0;
  uint64_t rebuilds_total = 0;  // summed over blocks
  size_t blocks_touched_last = 0;
};

class BlockedStructure {
 public:
  BlockedStructure(const DynamicString& pattern, const DynamicString& text, LocalFn fn,
                   UpdateModel model, LazyMode mode);

  size_t pattern_len() const { return pattern_.size(); }
  size_t text_len() const { return text_.size(); }
  size_t alignments() const { return text_.size() - pattern_.size() + 1; }
  size_t block_count() const { return blocks_.size(); }
  UpdateModel model() const { return model_; }
  const DynamicString& pattern() const { return pattern_; }
  const DynamicString& text() const { return text_; }
  const BlockedCounters& counters() const { return counters_; }

  void update_pattern(size_t position, Symbol s);
  void update_text(size_t position, Symbol s);
  int64_t query(size_t i) const;
  int64_t query_mod(size_t i, uint32_t modulus) const;

 private:
  size_t block_of_alignment(size_t i) const;
  void note_op(uint64_t work, size_t blocks) const;

  LocalFn fn_;
  UpdateModel model_;
  DynamicString pattern_, text_;  // live master copies
  size_t m_;
  std::vector<LazyStructure> blocks_;
  std::vector<size_t> block_start_;  // 1-based text position of each block
  mutable BlockedCounters counters_;
};

// Dynamic Hamming distance. Solver tier follows the alphabet: small-tier
// alphabets use the per-letter solver, polynomial ones the frequency split.
class DynHd {
 public:
  DynHd(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
        LazyMode mode = LazyMode::amortized);
  void update_pattern(size_t position, Symbol s) { core_.update_pattern(position, s); }
  void update_text(size_t position, Symbol s) { core_.update_text(position, s); }
  int64_t query(size_t i) const { return core_.query(i); }
  int64_t query_mod(size_t i, uint32_t modulus) const { return core_.query_mod(i, modulus); }
  const BlockedStructure& core() const { return core_; }

 private:
  BlockedStructure core_;
};

class DynIp {
 public:
  DynIp(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
        LazyMode mode = LazyMode::amortized);
  void update_pattern(size_t position, Symbol s) { core_.update_pattern(position, s); }
  void update_text(size_t position, Symbol s) { core_.update_text(position, s); }
  int64_t query(size_t i) const { return core_.query(i); }
  int64_t query_mod(size_t i, uint32_t modulus) const { return core_.query_mod(i, modulus); }
  const BlockedStructure& core() const { return core_; }

 private:
  BlockedStructure core_;
};

// Dynamic wildcard matching. The public answer is the match flag; the
// weighted score is exposed for diagnostics and is expressed over remapped
// ranks whenever the declared alphabet is too large for exact scoring.
class DynEm {
 public:
  DynEm(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
        LazyMode mode = LazyMode::amortized);
  void update_pattern(size_t position, Symbol s);
  void update_text(size_t position, Symbol s);
  bool matches(size_t i) const { return core_->query(i) == 0; }
  int64_t score(size_t i) const { return core_->query(i); }
  bool remapped() const { return codec_.has_value(); }
  const BlockedStructure& core() const { return *core_; }
  const DynamicString& pattern() const;  // original symbol space
  const DynamicString& text() const;

 private:
  struct Codec {
    std::unordered_map<Symbol, Symbol> to_rank;
    Symbol next_rank = 1;
    uint32_t rank_cap;
    Symbol encode(Symbol s);
  };

  std::optional<Codec> codec_;
  std::optional<DynamicString> raw_p_, raw_t_;  // kept when remapping is on
  std::optional<BlockedStructure> core_;
};

}  // namespace dynstr

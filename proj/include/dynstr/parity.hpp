#pragma once

// Hamming distance mod 2 for binary strings, answered without alignment
// tables: the mismatch parity at alignment i equals the pattern's bit parity
// xor the parity of the text window, and window parities reduce to prefix
// parities over the text. Prefixes live in a binary-indexed xor tree, so
// every traversal (one prefix read or one point flip) touches at most
// floor(log2 n) + 1 nodes; a window query performs two prefix traversals.
// Counters record the nodes of the last traversal, the per-traversal
// maximum, and the per-operation aggregate.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynstr/dynamic_string.hpp"

namespace dynstr {

struct ParityCounters {
  uint64_t updates = 0;
  uint64_t queries = 0;
  uint64_t nodes_last_traversal = 0;
  uint64_t max_nodes_per_traversal = 0;
  uint64_t nodes_last_op = 0;
  uint64_t max_nodes_per_op = 0;
};

class ParityHdMod2 {
 public:
  ParityHdMod2(const DynamicString& pattern, const DynamicString& text)
      : pattern_(pattern), text_(text) {
    if (pattern.role() != Target::pattern || text.role() != Target::text)
      throw std::invalid_argument("arguments must be a pattern and a text, in that order");
    if (pattern.alphabet().kind() != AlphabetKind::binary ||
        text.alphabet().kind() != AlphabetKind::binary)
      throw std::invalid_argument("the parity fast path requires binary strings");
    if (pattern.size() > text.size())
      throw std::invalid_argument("pattern must not be longer than the text");
    for (Symbol s : pattern.data()) pattern_parity_ ^= s;
    tree_.assign(text.size() + 1, 0);
    // Linear-time build: fold each node's value into its parent range.
    for (size_t i = 1; i <= text.size(); ++i) {
      tree_[i] ^= text.at(i);
      size_t parent = i + (i & (0 - i));
      if (parent <= text.size()) tree_[parent] ^= tree_[i];
    }
  }

  size_t pattern_len() const { return pattern_.size(); }
  size_t text_len() const { return text_.size(); }
  size_t alignments() const { return text_.size() - pattern_.size() + 1; }
  const DynamicString& pattern() const { return pattern_; }
  const DynamicString& text() const { return text_; }
  const ParityCounters& counters() const { return counters_; }

  void update_pattern(size_t position, Symbol s) {
    Update u = pattern_.apply_update(position, s);
    pattern_parity_ ^= u.old_symbol ^ u.new_symbol;
    ++counters_.updates;
    note_op(0);
  }

  void update_text(size_t position, Symbol s) {
    Update u = text_.apply_update(position, s);
    uint64_t nodes = 0;
    if (u.old_symbol != u.new_symbol) nodes = tree_toggle(position);
    ++counters_.updates;
    note_op(nodes);
  }

  // Hamming distance mod 2 at alignment i. `window_len` must equal the
  // pattern length; it is explicit so call sites state what they compare.
  uint32_t query(size_t i, size_t window_len) const {
    if (window_len != pattern_.size())
      throw std::invalid_argument("window length must equal the pattern length");
    if (i == 0 || i > alignments())
      throw std::out_of_range("alignment " + std::to_string(i) + " out of range 1.." +
                              std::to_string(alignments()));
    ++counters_.queries;
    uint64_t nodes = 0;
    uint32_t w = prefix_parity(i + window_len - 1, nodes) ^ prefix_parity(i - 1, nodes);
    note_op(nodes);
    return pattern_parity_ ^ w;
  }

  uint32_t query(size_t i) const { return query(i, pattern_.size()); }

 private:
  // Xor of text bits 1..i; touches popcount(i) tree nodes.
  uint32_t prefix_parity(size_t i, uint64_t& op_nodes) const {
    uint32_t acc = 0;
    uint64_t nodes = 0;
    for (size_t k = i; k > 0; k -= k & (0 - k)) {
      acc ^= tree_[k];
      ++nodes;
    }
    note_traversal(nodes);
    op_nodes += nodes;
    return acc;
  }

  uint64_t tree_toggle(size_t i) {
    uint64_t nodes = 0;
    for (size_t k = i; k < tree_.size(); k += k & (0 - k)) {
      tree_[k] ^= 1u;
      ++nodes;
    }
    note_traversal(nodes);
    return nodes;
  }

  void note_traversal(uint64_t nodes) const {
    counters_.nodes_last_traversal = nodes;
    if (nodes > counters_.max_nodes_per_traversal) counters_.max_nodes_per_traversal = nodes;
  }

  void note_op(uint64_t nodes) const {
    counters_.nodes_last_op = nodes;
    if (nodes > counters_.max_nodes_per_op) counters_.max_nodes_per_op = nodes;
  }

  DynamicString pattern_, text_;
  uint32_t pattern_parity_ = 0;
  std::vector<uint32_t> tree_;  // 1-based binary-indexed array over text bits
  mutable ParityCounters counters_;
};

}  // namespace dynstr

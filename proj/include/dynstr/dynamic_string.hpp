#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dynstr/alphabet.hpp"

namespace dynstr {

enum class Target { pattern, text };

// One applied substitution. Positions are 1-based throughout the public API.
struct Update {
  Target target;
  size_t position;
  Symbol old_symbol;
  Symbol new_symbol;
};

// Fixed-length string under single-character substitutions.
class DynamicString {
 public:
  DynamicString(Target role, Alphabet alphabet, std::vector<Symbol> symbols)
      : role_(role), alphabet_(alphabet), symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("string must be non-empty");
    for (Symbol s : symbols_) alphabet_.check_symbol(s);
  }

  Target role() const { return role_; }
  const Alphabet& alphabet() const { return alphabet_; }
  size_t size() const { return symbols_.size(); }

  Symbol at(size_t position) const {
    check_position(position);
    return symbols_[position - 1];
  }

  std::span<const Symbol> data() const { return symbols_; }

  // Contiguous window starting at `position` (1-based), length `len`.
  std::span<const Symbol> window(size_t position, size_t len) const {
    check_position(position);
    if (len == 0 || position + len - 1 > symbols_.size())
      throw std::out_of_range("window [" + std::to_string(position) + ", +" +
                              std::to_string(len) + ") exceeds string length " +
                              std::to_string(symbols_.size()));
    return std::span<const Symbol>(symbols_.data() + (position - 1), len);
  }

  // Substitutes and reports what changed. Validation happens before any
  // mutation, so a failed call leaves the string untouched.
  Update apply_update(size_t position, Symbol new_symbol) {
    check_position(position);
    alphabet_.check_symbol(new_symbol);
    Symbol old = symbols_[position - 1];
    symbols_[position - 1] = new_symbol;
    return Update{role_, position, old, new_symbol};
  }

 private:
  void check_position(size_t position) const {
    if (position == 0 || position > symbols_.size())
      throw std::out_of_range("position " + std::to_string(position) +
                              " out of range 1.." + std::to_string(symbols_.size()));
  }

  Target role_;
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

// Append-only record of updates since the last snapshot refresh.
class UpdateLog {
 public:
  explicit UpdateLog(size_t capacity) : capacity_(capacity) {}

  size_t capacity() const { return capacity_; }
  size_t size() const { return entries_.size(); }
  bool full() const { return entries_.size() >= capacity_; }
  std::span<const Update> entries() const { return entries_; }
  const Update& operator[](size_t idx) const { return entries_[idx]; }

  void push(const Update& u) {
    if (entries_.size() >= capacity_)
      throw std::logic_error("update log exceeded its capacity");
    entries_.push_back(u);
  }

  void clear() { entries_.clear(); }

  // Drops the oldest `count` entries (after a snapshot refresh absorbed them).
  void drop_front(size_t count) {
    if (count > entries_.size())
      throw std::logic_error("cannot drop more log entries than stored");
    entries_.erase(entries_.begin(), entries_.begin() + static_cast<ptrdiff_t>(count));
  }

  void set_capacity(size_t capacity) { capacity_ = capacity; }

 private:
  size_t capacity_;
  std::vector<Update> entries_;
};

}  // namespace dynstr

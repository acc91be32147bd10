#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynstr {

// Symbols are unsigned integers. When an alphabet enables the wildcard,
// value 0 is reserved for it and ordinary symbols occupy 1..size; otherwise
// ordinary symbols occupy 0..size-1.
using Symbol = uint32_t;

enum class AlphabetKind { binary, ternary, constant, polynomial };

class Alphabet {
 public:
  Alphabet(AlphabetKind kind, uint32_t size, bool wildcard_enabled)
      : kind_(kind), size_(size), wildcard_(wildcard_enabled) {
    if (size_ == 0) throw std::invalid_argument("alphabet size must be positive");
    switch (kind_) {
      case AlphabetKind::binary:
        if (size_ != 2) throw std::invalid_argument("binary alphabet must have size 2");
        break;
      case AlphabetKind::ternary:
        if (size_ != 3) throw std::invalid_argument("ternary alphabet must have size 3");
        break;
      case AlphabetKind::constant:
        if (size_ > 64) throw std::invalid_argument("constant-tier alphabet limited to size 64");
        break;
      case AlphabetKind::polynomial:
        // any positive 32-bit size
        break;
    }
  }

  AlphabetKind kind() const { return kind_; }
  uint32_t size() const { return size_; }
  bool wildcard_enabled() const { return wildcard_; }
  static constexpr Symbol wildcard = 0;

  // Largest symbol value that can appear in a string over this alphabet.
  Symbol max_symbol() const { return wildcard_ ? size_ : size_ - 1; }

  bool valid_symbol(Symbol s) const {
    return wildcard_ ? s <= size_ : s < size_;
  }

  void check_symbol(Symbol s) const {
    if (!valid_symbol(s))
      throw std::invalid_argument("symbol " + std::to_string(s) +
                                  " not valid for this alphabet");
  }

  // Small-tier alphabets admit the per-letter correlation solver.
  bool small_tier() const { return kind_ != AlphabetKind::polynomial && size_ <= 64; }

  bool operator==(const Alphabet& o) const {
    return kind_ == o.kind_ && size_ == o.size_ && wildcard_ == o.wildcard_;
  }

 private:
  AlphabetKind kind_;
  uint32_t size_;
  bool wildcard_;
};

inline Alphabet binary_alphabet() { return Alphabet(AlphabetKind::binary, 2, false); }
inline Alphabet ternary_alphabet() { return Alphabet(AlphabetKind::ternary, 3, false); }

}  // namespace dynstr

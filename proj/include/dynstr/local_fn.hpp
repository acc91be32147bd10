#pragma once

#include <cstdint>

#include "dynstr/alphabet.hpp"

namespace dynstr {

// Per-position scores whose alignment-wise sums the engine maintains:
//   hamming        -> 1 if the symbols differ, else 0
//   inner_product  -> a * b
//   em_weighted    -> a * b * (a-b)^2, zero exactly when the pair matches
//                     under wildcard semantics (wildcard encoded as 0)
enum class LocalFn { hamming, inner_product, em_weighted };

inline int64_t local_eval(LocalFn f, Symbol a, Symbol b) {
  switch (f) {
    case LocalFn::hamming:
      return a == b ? 0 : 1;
    case LocalFn::inner_product:
      return static_cast<int64_t>(static_cast<uint64_t>(a) * b);
    case LocalFn::em_weighted: {
      int64_t d = static_cast<int64_t>(a) - static_cast<int64_t>(b);
      return static_cast<int64_t>(a) * static_cast<int64_t>(b) * d * d;
    }
  }
  return 0;  // unreachable
}

}  // namespace dynstr

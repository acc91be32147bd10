#pragma once

// Quadratic reference implementations, written directly from the problem
// definitions and sharing no code with the fast paths. Every fast answer in
// the test suite is checked against these.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynstr/alphabet.hpp"
#include "dynstr/instances.hpp"

namespace dynstr {

namespace oracle_detail {
inline void check(std::span<const Symbol> p, std::span<const Symbol> t, size_t i) {
  if (p.empty() || i == 0 || i - 1 + p.size() > t.size())
    throw std::out_of_range("oracle alignment out of range");
}
}  // namespace oracle_detail

// Mismatch count of P against T[i..i+m-1] (1-based i).
inline int64_t naive_hd(std::span<const Symbol> p, std::span<const Symbol> t, size_t i) {
  oracle_detail::check(p, t, i);
  int64_t mismatches = 0;
  for (size_t j = 0; j < p.size(); ++j)
    if (p[j] != t[i - 1 + j]) ++mismatches;
  return mismatches;
}

inline int64_t naive_ip(std::span<const Symbol> p, std::span<const Symbol> t, size_t i) {
  oracle_detail::check(p, t, i);
  int64_t sum = 0;
  for (size_t j = 0; j < p.size(); ++j)
    sum += static_cast<int64_t>(p[j]) * static_cast<int64_t>(t[i - 1 + j]);
  return sum;
}

struct NaiveEmResult {
  bool match = true;        // every position equal or wildcard-paired
  int64_t mismatches = 0;   // positions violating the wildcard match
  int64_t weighted = 0;     // sum of a*b*(a-b)^2 over the window
};

// Wildcard match of P against the window; symbol 0 is the wildcard.
inline NaiveEmResult naive_em(std::span<const Symbol> p, std::span<const Symbol> t, size_t i) {
  oracle_detail::check(p, t, i);
  NaiveEmResult r;
  for (size_t j = 0; j < p.size(); ++j) {
    const Symbol a = p[j], b = t[i - 1 + j];
    if (a != 0 && b != 0 && a != b) {
      r.match = false;
      ++r.mismatches;
    }
    const int64_t d = static_cast<int64_t>(a) - static_cast<int64_t>(b);
    r.weighted += static_cast<int64_t>(a) * static_cast<int64_t>(b) * d * d;
  }
  return r;
}

inline std::vector<std::vector<uint8_t>> naive_omv(const OmvInstance& inst) {
  std::vector<std::vector<uint8_t>> out;
  out.reserve(inst.vectors.size());
  for (const auto& v : inst.vectors) {
    std::vector<uint8_t> row(inst.r, 0);
    for (size_t j = 0; j < inst.r; ++j)
      for (size_t k = 0; k < inst.r; ++k)
        if (inst.bit(j, k) && v[k]) {
          row[j] = 1;
          break;
        }
    out.push_back(std::move(row));
  }
  return out;
}

// Total weight of grid points dominated by (x, y).
inline int64_t naive_dominance(const GridInstance& g, uint32_t x, uint32_t y) {
  int64_t sum = 0;
  for (size_t i = 0; i < g.coords.size(); ++i)
    if (g.coords[i].first <= x && g.coords[i].second <= y) sum += g.weights[i];
  return sum;
}

}  // namespace dynstr

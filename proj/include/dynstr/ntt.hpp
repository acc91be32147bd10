#pragma once

// Exact integer cross-correlation via number-theoretic transforms over a
// fixed family of word-sized primes, recombined with the Chinese remainder
// theorem. Every pass (fills, butterflies, pointwise products, extraction)
// is resumable: advance(budget) performs at most budget+O(1) unit steps and
// can be called again later, which lets a caller spread one long transform
// across many small time slices. Running any sequence of advance() calls to
// completion produces bit-identical results regardless of slicing.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dynstr {

// Montgomery arithmetic modulo a fixed odd prime below 2^31.
class MontgomeryField {
 public:
  explicit MontgomeryField(uint32_t mod);

  uint32_t mod() const { return mod_; }
  uint32_t one() const { return one_; }

  uint32_t to_rep(uint64_t x) const { return mul(static_cast<uint32_t>(x % mod_), r2_); }
  uint32_t from_rep(uint32_t a) const { return reduce(a); }

  uint32_t mul(uint32_t a, uint32_t b) const { return reduce(static_cast<uint64_t>(a) * b); }
  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + mod_ - b; }

  uint32_t pow(uint32_t base_rep, uint64_t e) const {
    uint32_t acc = one_;
    while (e) {
      if (e & 1) acc = mul(acc, base_rep);
      base_rep = mul(base_rep, base_rep);
      e >>= 1;
    }
    return acc;
  }

 private:
  uint32_t reduce(uint64_t t) const {
    uint32_t q = static_cast<uint32_t>(t) * neg_inv_;
    uint64_t r = (t + static_cast<uint64_t>(q) * mod_) >> 32;
    return r >= mod_ ? static_cast<uint32_t>(r - mod_) : static_cast<uint32_t>(r);
  }

  uint32_t mod_, neg_inv_, r2_, one_;
};

// Per-prime transform constants: for every k up to the prime's two-adicity,
// root[k] is a primitive 2^k-th root of unity (Montgomery form) and iroot[k]
// its inverse.
struct NttTables {
  NttTables(uint32_t prime, uint32_t generator);

  MontgomeryField field;
  uint32_t prime;
  int two_adicity;
  std::array<uint32_t, 28> root{};
  std::array<uint32_t, 28> iroot{};
};

// The supported primes, largest two-adicity last. Their product (~2^86)
// bounds the coefficients this engine can reconstruct exactly.
const std::vector<const NttTables*>& ntt_primes();

// Largest coefficient magnitude any solver may request. Chosen so that a
// handful of signed accumulations still fits int64_t.
constexpr unsigned __int128 kMaxCoefficient = static_cast<unsigned __int128>(1) << 60;

// Whether base^exp * scale stays within kMaxCoefficient. The straight product
// wraps even in 128 bits for huge declared alphabets, so divide instead.
constexpr bool coefficient_fits(unsigned __int128 base, int exp, unsigned __int128 scale) {
  if (base == 0) return true;
  unsigned __int128 acc = scale;
  for (int k = 0; k < exp; ++k) {
    if (acc > kMaxCoefficient / base) return false;
    acc *= base;
  }
  return acc <= kMaxCoefficient;
}

// In-place radix-2 transform over a power-of-two-sized buffer, resumable one
// butterfly at a time. Forward is decimation-in-frequency (natural order in,
// bit-reversed out); inverse is decimation-in-time (bit-reversed in, natural
// out, final 1/n scale left to the caller).
class ResumableNtt {
 public:
  enum class Dir { forward, inverse };

  void reset(std::vector<uint32_t>* data, const NttTables* tables, Dir dir);
  bool finished() const { return done_; }
  uint64_t advance(uint64_t budget);  // returns butterflies performed

 private:
  std::vector<uint32_t>* data_ = nullptr;
  const NttTables* tables_ = nullptr;
  Dir dir_ = Dir::forward;
  size_t n_ = 0, t_ = 0;
  int log_n_ = 0, stage_ = 0;
  bool done_ = true;
};

// One exact correlation job:
//   acc[i] += coef * sum_j b_at(j) * a_at(i + j)   for i = 0 .. out_len-1
// where out_len = a_len - b_len + 1. Inputs are non-negative; coeff_bound
// must dominate every output magnitude and decides how many primes run.
struct CorrelationSpec {
  size_t a_len = 0;
  size_t b_len = 0;
  std::function<uint64_t(size_t)> a_at;
  std::function<uint64_t(size_t)> b_at;
  int64_t coef = 1;
};

class ResumableCorrelation {
 public:
  ResumableCorrelation(CorrelationSpec spec, unsigned __int128 coeff_bound,
                       std::vector<int64_t>* acc);

  bool finished() const { return phase_ == Phase::done; }
  uint64_t advance(uint64_t budget);
  uint64_t planned_work() const { return planned_; }

 private:
  enum class Phase { fill_a, fwd_a, fill_b, fwd_b, pointwise, inv, extract, combine, done };

  void enter_prime(size_t p);

  CorrelationSpec spec_;
  std::vector<int64_t>* acc_;
  std::vector<const NttTables*> primes_;
  size_t out_len_, size_;  // size_ = padded transform length
  uint64_t planned_ = 0;

  Phase phase_ = Phase::fill_a;
  size_t prime_idx_ = 0;
  size_t cursor_ = 0;
  std::vector<uint32_t> fa_, fb_;
  std::vector<uint32_t> n_inv_rep_;                // per prime
  std::vector<std::vector<uint32_t>> residues_;    // per prime, out_len each
  ResumableNtt ntt_;
};

// Convenience single-shot correlation of plain integer sequences:
// out[i] = sum_j b[j] * a[i+j], i = 0..|a|-|b|. Throws std::invalid_argument
// on empty/oversized b and std::overflow_error when exact reconstruction
// cannot be guaranteed.
std::vector<int64_t> cross_correlate(std::span<const uint64_t> a, std::span<const uint64_t> b);

}  // namespace dynstr

#pragma once

// Executable reductions: encoders that realize one problem inside another
// and decode the backend's answers. They double as integration tests (the
// decoded answers must match direct computation) and as a harness for
// observing how update and query costs transfer. Every randomized gadget is
// driven by a seeded generator and reports how many backend operations it
// issued.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "dynstr/blocked.hpp"
#include "dynstr/dynamic_string.hpp"
#include "dynstr/instances.hpp"

namespace dynstr {

using GadgetRng = std::mt19937_64;

struct GadgetReport {
  uint64_t backend_updates = 0;
  uint64_t backend_queries = 0;
  uint64_t trials = 0;  // randomized repetitions executed (0 for deterministic)
};

struct OmvRun {
  std::vector<std::vector<uint8_t>> product;  // product[v][j] = (M v)[j]
  GadgetReport report;
};

// --- matrix-vector product via wildcard matching -------------------------
// Text: the r^2 matrix bits shifted up one (bit b -> symbol b+1, keeping 0
// free for the wildcard), then r^2 copies of symbol 2. Pattern per vector:
// bit 1 -> symbol 1, bit 0 -> wildcard, wildcard tail. The window at
// (j-1)r+1 lays the vector over matrix row j, where symbol 1 collides with
// exactly the shifted 1-bits, so the window matches iff row j and the
// vector share no set bit, i.e. iff (Mv)[j] = 0. Deterministic.
OmvRun omv_via_dynem(const OmvInstance& inst, LazyMode mode = LazyMode::amortized);

// --- matrix-vector product via inner product mod 2 -----------------------
// Same layout over the plain binary alphabet with a zero tail: the window
// inner product at (j-1)r+1 is row_j . v. A zero product entry stays zero in
// every trial; a nonzero entry survives a random half-keep of the vector's
// set bits with odd parity exactly half the time, so `repetitions`
// one-sided trials miss it with probability 2^-repetitions.
size_t recommended_omv_repetitions(size_t m, double c_amp = 3.0);
OmvRun omv_via_dynip_mod2(const OmvInstance& inst, size_t repetitions, uint64_t seed,
                          LazyMode mode = LazyMode::amortized);

// Same scheme reading residues mod `modulus` and concluding "set" from any
// nonzero residue. A product of exactly 1 leaves a single surviving bit,
// which is nonzero mod any modulus, so its per-trial detection rate is 1/2
// regardless of the modulus; larger products approach (modulus-1)/modulus.
OmvRun omv_via_dynip_modc(const OmvInstance& inst, uint32_t modulus, size_t repetitions,
                          uint64_t seed, LazyMode mode = LazyMode::amortized);

// --- matrix-vector product via approximate inner product -----------------
// Zero-preserving (1+eps) estimators of the window inner product.
class IpEstimator {
 public:
  virtual ~IpEstimator() = default;
  virtual void update_pattern(size_t position, Symbol s) = 0;
  virtual void update_text(size_t position, Symbol s) = 0;
  virtual double estimate(size_t i) = 0;
  virtual uint64_t updates_issued() const = 0;
  virtual uint64_t queries_issued() const = 0;
};

class ExactIpEstimator final : public IpEstimator {
 public:
  ExactIpEstimator(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
                   LazyMode mode);
  void update_pattern(size_t position, Symbol s) override;
  void update_text(size_t position, Symbol s) override;
  double estimate(size_t i) override;
  uint64_t updates_issued() const override { return updates_; }
  uint64_t queries_issued() const override { return queries_; }

 private:
  DynIp ip_;
  uint64_t updates_ = 0, queries_ = 0;
};

// Exact value scaled by a seeded multiplicative wobble drawn per query from
// [1/(1+eps), 1+eps]; zero stays exactly zero. Exercises the decision
// threshold against the worst estimates the guarantee permits.
class NoisyIpEstimator final : public IpEstimator {
 public:
  NoisyIpEstimator(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
                   LazyMode mode, double epsilon, uint64_t seed);
  void update_pattern(size_t position, Symbol s) override;
  void update_text(size_t position, Symbol s) override;
  double estimate(size_t i) override;
  uint64_t updates_issued() const override { return updates_; }
  uint64_t queries_issued() const override { return queries_; }

 private:
  DynIp ip_;
  double eps_;
  GadgetRng rng_;
  uint64_t updates_ = 0, queries_ = 0;
};

enum class ApproxIpBackend { exact, noisy };

// Deterministic detection through any zero-preserving (1+eps) estimator:
// entry j is set iff the estimate at its alignment exceeds 1/2, since a zero
// product estimates to exactly 0 and a product >= 1 to >= 1/(1+eps) > 1/2
// for eps < 1.
OmvRun omv_via_approx_dynip(const OmvInstance& inst, double epsilon, ApproxIpBackend backend,
                            uint64_t seed, LazyMode mode = LazyMode::amortized);

// --- text-only model ------------------------------------------------------
// The matrix lives in the (static) pattern, each vector is written into text
// positions r^2-r+1..r^2, and entry j is read at alignment (r-j)r+1, which
// overlays pattern row j on the vector. The randomized mod-2 half-keep is
// applied to the vector bits in the text.
OmvRun omv_via_dynip_mod2_text_only(const OmvInstance& inst, size_t repetitions,
                                    uint64_t seed, LazyMode mode = LazyMode::amortized);

// --- inner product as Hamming distance ------------------------------------
// Pattern bits map 1 -> 111, 0 -> 010; text bits map 1 -> 111, 0 -> 100.
// Each aligned original pair contributes distance 0 when both bits are 1
// and distance 2 otherwise, so at lifted alignment 3(i-1)+1:
// IP = m - HD/2.
DynamicString lift_ip_pattern(const DynamicString& p);
DynamicString lift_ip_text(const DynamicString& t);
size_t lift_ip_alignment(size_t i);
// The <= 3 lifted substitutions realizing one original substitution.
std::vector<std::pair<size_t, Symbol>> lift_ip_pattern_update(size_t position, Symbol bit);
std::vector<std::pair<size_t, Symbol>> lift_ip_text_update(size_t position, Symbol bit);
int64_t decode_ip_from_hd(int64_t hd, size_t m);

// Parity variant over the ternary alphabet: pattern 1 -> 22, 0 -> 01; text
// 1 -> 11, 0 -> 02. A (1,1) pair contributes distance 2 and every other
// pair distance 1, so HD = m + #(1,1) and IP mod 2 = (m - HD) mod 2, read
// at lifted alignment 2(i-1)+1.
DynamicString lift_ipmod2_pattern(const DynamicString& p);
DynamicString lift_ipmod2_text(const DynamicString& t);
size_t lift_ipmod2_alignment(size_t i);
std::vector<std::pair<size_t, Symbol>> lift_ipmod2_pattern_update(size_t position, Symbol bit);
std::vector<std::pair<size_t, Symbol>> lift_ipmod2_text_update(size_t position, Symbol bit);
uint32_t decode_ipmod2_from_hdmod2(uint32_t hd_mod2, size_t m);

// --- 2D dominance sums via inner product ----------------------------------
// The pattern pre-registers the indicator row of every dominance shape
// (x, y): shape q = (x-1)r + y occupies pattern positions (q-1)r+1..qr, one
// bit per point slot, m = r^3 in total. The text carries the point weights
// in positions m-r+1..m (zeros elsewhere), so the query for shape q is one
// inner product at alignment m-r+2 - ((q-1)r+1), where the indicator row
// overlays the weights. A weight change is one text update.
class RangeCountViaDynIp {
 public:
  explicit RangeCountViaDynIp(const GridInstance& grid, LazyMode mode = LazyMode::amortized);

  size_t r() const { return grid_.r; }
  const GridInstance& grid() const { return grid_; }
  void set_weight(size_t point, uint32_t weight);  // 0-based point slot
  int64_t count(uint32_t x, uint32_t y);
  const GadgetReport& report() const { return report_; }

 private:
  GridInstance grid_;
  std::optional<DynIp> backend_;
  GadgetReport report_;
};

// Emptiness variant via wildcard matching: an included point carries the
// shifted-zero probe (symbol 1), excluded positions are wildcards, and text
// weight w becomes symbol w+1, so the window matches iff every dominated
// point has weight zero.
class RangeEmptyViaDynEm {
 public:
  explicit RangeEmptyViaDynEm(const GridInstance& grid, LazyMode mode = LazyMode::amortized);

  size_t r() const { return grid_.r; }
  const GridInstance& grid() const { return grid_; }
  void set_weight(size_t point, uint32_t weight);
  bool empty(uint32_t x, uint32_t y);
  const GadgetReport& report() const { return report_; }

 private:
  GridInstance grid_;
  std::optional<DynEm> backend_;
  GadgetReport report_;
};

}  // namespace dynstr

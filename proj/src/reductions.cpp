#include "dynstr/reductions.hpp"

#include <stdexcept>
#include <string>

namespace dynstr {

namespace {

void check_omv(const OmvInstance& inst) {
  if (inst.r == 0) throw std::invalid_argument("matrix must be non-empty");
  if (inst.matrix.size() != inst.r * inst.r)
    throw std::invalid_argument("matrix storage does not match its declared dimension");
  for (uint8_t b : inst.matrix)
    if (b > 1) throw std::invalid_argument("matrix entries must be bits");
  for (const auto& v : inst.vectors) {
    if (v.size() != inst.r)
      throw std::invalid_argument("vector length does not match the matrix dimension");
    for (uint8_t b : v)
      if (b > 1) throw std::invalid_argument("vector entries must be bits");
  }
}

void check_grid(const GridInstance& g) {
  if (g.r == 0) throw std::invalid_argument("grid must be non-empty");
  if (g.coords.size() > g.r)
    throw std::invalid_argument("the grid holds at most r weighted points");
  if (g.weights.size() != g.coords.size())
    throw std::invalid_argument("every point slot needs a weight");
  for (const auto& [x, y] : g.coords)
    if (x == 0 || y == 0 || x > g.r || y > g.r)
      throw std::invalid_argument("point coordinates must lie in 1..r");
  for (uint32_t w : g.weights)
    if (w > g.max_weight) throw std::invalid_argument("weight exceeds the declared bound");
}

size_t shape_index(size_t r, uint32_t x, uint32_t y) {
  if (x == 0 || y == 0 || x > r || y > r)
    throw std::invalid_argument("query corner must lie in 1..r");
  return (static_cast<size_t>(x) - 1) * r + y;  // 1..r^2
}

// Shared randomized OMv-over-inner-product runner; detection is any nonzero
// residue mod `modulus`.
OmvRun omv_modc_impl(const OmvInstance& inst, uint32_t modulus, size_t repetitions,
                     uint64_t seed, LazyMode mode) {
  check_omv(inst);
  if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
  if (repetitions == 0) throw std::invalid_argument("at least one repetition is required");
  size_t r = inst.r, m = r * r;
  Alphabet bin = binary_alphabet();
  std::vector<Symbol> txt(2 * m, 0);
  for (size_t p = 0; p < m; ++p) txt[p] = inst.matrix[p];
  DynIp ip(DynamicString(Target::pattern, bin, std::vector<Symbol>(m, 0)),
           DynamicString(Target::text, bin, std::move(txt)), UpdateModel::pattern_and_text,
           mode);
  GadgetRng rng(seed);
  std::bernoulli_distribution keep(0.5);
  OmvRun run;
  std::vector<Symbol> cur(r, 0);
  for (const auto& v : inst.vectors) {
    std::vector<uint8_t> row(r, 0);
    for (size_t trial = 0; trial < repetitions; ++trial) {
      for (size_t i = 0; i < r; ++i) {
        Symbol want = (v[i] != 0 && keep(rng)) ? 1u : 0u;
        if (cur[i] != want) {
          ip.update_pattern(i + 1, want);
          cur[i] = want;
          ++run.report.backend_updates;
        }
      }
      for (size_t j = 1; j <= r; ++j) {
        ++run.report.backend_queries;
        if (ip.query_mod((j - 1) * r + 1, modulus) != 0) row[j - 1] = 1;
      }
      ++run.report.trials;
    }
    run.product.push_back(std::move(row));
  }
  return run;
}

}  // namespace

OmvRun omv_via_dynem(const OmvInstance& inst, LazyMode mode) {
  check_omv(inst);
  size_t r = inst.r, m = r * r;
  Alphabet a(AlphabetKind::constant, 2, true);  // 0 = wildcard, symbols 1, 2
  std::vector<Symbol> txt(2 * m);
  for (size_t p = 0; p < m; ++p) txt[p] = inst.matrix[p] + 1;
  for (size_t p = m; p < 2 * m; ++p) txt[p] = 2;
  DynEm em(DynamicString(Target::pattern, a, std::vector<Symbol>(m, Alphabet::wildcard)),
           DynamicString(Target::text, a, std::move(txt)), UpdateModel::pattern_and_text,
           mode);
  OmvRun run;
  std::vector<Symbol> cur(r, Alphabet::wildcard);
  for (const auto& v : inst.vectors) {
    for (size_t i = 0; i < r; ++i) {
      Symbol want = v[i] != 0 ? 1u : Alphabet::wildcard;
      if (cur[i] != want) {
        em.update_pattern(i + 1, want);
        cur[i] = want;
        ++run.report.backend_updates;
      }
    }
    std::vector<uint8_t> row(r, 0);
    for (size_t j = 1; j <= r; ++j) {
      ++run.report.backend_queries;
      row[j - 1] = em.matches((j - 1) * r + 1) ? 0 : 1;
    }
    run.product.push_back(std::move(row));
  }
  return run;
}

size_t recommended_omv_repetitions(size_t m, double c_amp) {
  double bits = std::log2(static_cast<double>(m < 2 ? 2 : m));
  return static_cast<size_t>(std::ceil(c_amp * bits));
}

OmvRun omv_via_dynip_mod2(const OmvInstance& inst, size_t repetitions, uint64_t seed,
                          LazyMode mode) {
  return omv_modc_impl(inst, 2, repetitions, seed, mode);
}

OmvRun omv_via_dynip_modc(const OmvInstance& inst, uint32_t modulus, size_t repetitions,
                          uint64_t seed, LazyMode mode) {
  return omv_modc_impl(inst, modulus, repetitions, seed, mode);
}

ExactIpEstimator::ExactIpEstimator(const DynamicString& pattern, const DynamicString& text,
                                   UpdateModel model, LazyMode mode)
    : ip_(pattern, text, model, mode) {}

void ExactIpEstimator::update_pattern(size_t position, Symbol s) {
  ip_.update_pattern(position, s);
  ++updates_;
}

void ExactIpEstimator::update_text(size_t position, Symbol s) {
  ip_.update_text(position, s);
  ++updates_;
}

double ExactIpEstimator::estimate(size_t i) {
  ++queries_;
  return static_cast<double>(ip_.query(i));
}

NoisyIpEstimator::NoisyIpEstimator(const DynamicString& pattern, const DynamicString& text,
                                   UpdateModel model, LazyMode mode, double epsilon,
                                   uint64_t seed)
    : ip_(pattern, text, model, mode), eps_(epsilon), rng_(seed) {
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1)");
}

void NoisyIpEstimator::update_pattern(size_t position, Symbol s) {
  ip_.update_pattern(position, s);
  ++updates_;
}

void NoisyIpEstimator::update_text(size_t position, Symbol s) {
  ip_.update_text(position, s);
  ++updates_;
}

double NoisyIpEstimator::estimate(size_t i) {
  ++queries_;
  int64_t exact = ip_.query(i);
  if (exact == 0) return 0.0;  // zero-preservation
  std::uniform_real_distribution<double> wobble(1.0 / (1.0 + eps_), 1.0 + eps_);
  return static_cast<double>(exact) * wobble(rng_);
}

OmvRun omv_via_approx_dynip(const OmvInstance& inst, double epsilon, ApproxIpBackend backend,
                            uint64_t seed, LazyMode mode) {
  check_omv(inst);
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1) for the 1/2 threshold");
  size_t r = inst.r, m = r * r;
  Alphabet bin = binary_alphabet();
  std::vector<Symbol> txt(2 * m, 0);
  for (size_t p = 0; p < m; ++p) txt[p] = inst.matrix[p];
  DynamicString pat(Target::pattern, bin, std::vector<Symbol>(m, 0));
  DynamicString text(Target::text, bin, std::move(txt));
  std::unique_ptr<IpEstimator> est;
  if (backend == ApproxIpBackend::exact)
    est = std::make_unique<ExactIpEstimator>(pat, text, UpdateModel::pattern_and_text, mode);
  else
    est = std::make_unique<NoisyIpEstimator>(pat, text, UpdateModel::pattern_and_text, mode,
                                             epsilon, seed);
  OmvRun run;
  std::vector<Symbol> cur(r, 0);
  for (const auto& v : inst.vectors) {
    for (size_t i = 0; i < r; ++i) {
      Symbol want = v[i] != 0 ? 1u : 0u;
      if (cur[i] != want) {
        est->update_pattern(i + 1, want);
        cur[i] = want;
      }
    }
    std::vector<uint8_t> row(r, 0);
    for (size_t j = 1; j <= r; ++j)
      row[j - 1] = est->estimate((j - 1) * r + 1) > 0.5 ? 1 : 0;
    run.product.push_back(std::move(row));
  }
  run.report.backend_updates = est->updates_issued();
  run.report.backend_queries = est->queries_issued();
  return run;
}

OmvRun omv_via_dynip_mod2_text_only(const OmvInstance& inst, size_t repetitions,
                                    uint64_t seed, LazyMode mode) {
  check_omv(inst);
  if (repetitions == 0) throw std::invalid_argument("at least one repetition is required");
  size_t r = inst.r, m = r * r;
  Alphabet bin = binary_alphabet();
  std::vector<Symbol> pat(m);
  for (size_t p = 0; p < m; ++p) pat[p] = inst.matrix[p];
  DynIp ip(DynamicString(Target::pattern, bin, std::move(pat)),
           DynamicString(Target::text, bin, std::vector<Symbol>(2 * m, 0)),
           UpdateModel::text_only, mode);
  GadgetRng rng(seed);
  std::bernoulli_distribution keep(0.5);
  OmvRun run;
  std::vector<Symbol> cur(r, 0);
  for (const auto& v : inst.vectors) {
    std::vector<uint8_t> row(r, 0);
    for (size_t trial = 0; trial < repetitions; ++trial) {
      for (size_t i = 0; i < r; ++i) {
        Symbol want = (v[i] != 0 && keep(rng)) ? 1u : 0u;
        if (cur[i] != want) {
          ip.update_text(m - r + 1 + i, want);
          cur[i] = want;
          ++run.report.backend_updates;
        }
      }
      for (size_t j = 1; j <= r; ++j) {
        ++run.report.backend_queries;
        if (ip.query_mod((r - j) * r + 1, 2) != 0) row[j - 1] = 1;
      }
      ++run.report.trials;
    }
    run.product.push_back(std::move(row));
  }
  return run;
}

namespace {

constexpr Symbol kIpLiftPattern[2][3] = {{0, 1, 0}, {1, 1, 1}};
constexpr Symbol kIpLiftText[2][3] = {{1, 0, 0}, {1, 1, 1}};
constexpr Symbol kParLiftPattern[2][2] = {{0, 1}, {2, 2}};
constexpr Symbol kParLiftText[2][2] = {{0, 2}, {1, 1}};

void check_binary_string(const DynamicString& s) {
  if (s.alphabet().kind() != AlphabetKind::binary)
    throw std::invalid_argument("lift inputs must be binary strings");
}

void check_bit(Symbol bit) {
  if (bit > 1) throw std::invalid_argument("lift updates take a bit");
}

template <size_t W>
DynamicString lift_string(const DynamicString& s, const Symbol (&enc)[2][W],
                          const Alphabet& out_alphabet) {
  check_binary_string(s);
  std::vector<Symbol> out;
  out.reserve(W * s.size());
  for (Symbol b : s.data())
    for (size_t k = 0; k < W; ++k) out.push_back(enc[b][k]);
  return DynamicString(s.role(), out_alphabet, std::move(out));
}

template <size_t W>
std::vector<std::pair<size_t, Symbol>> lift_update(size_t position, Symbol bit,
                                                   const Symbol (&enc)[2][W]) {
  if (position == 0) throw std::out_of_range("positions are 1-based");
  check_bit(bit);
  std::vector<std::pair<size_t, Symbol>> out;
  out.reserve(W);
  for (size_t k = 0; k < W; ++k) out.emplace_back(W * (position - 1) + k + 1, enc[bit][k]);
  return out;
}

}  // namespace

DynamicString lift_ip_pattern(const DynamicString& p) {
  return lift_string(p, kIpLiftPattern, binary_alphabet());
}

DynamicString lift_ip_text(const DynamicString& t) {
  return lift_string(t, kIpLiftText, binary_alphabet());
}

size_t lift_ip_alignment(size_t i) {
  if (i == 0) throw std::out_of_range("alignments are 1-based");
  return 3 * (i - 1) + 1;
}

std::vector<std::pair<size_t, Symbol>> lift_ip_pattern_update(size_t position, Symbol bit) {
  return lift_update(position, bit, kIpLiftPattern);
}

std::vector<std::pair<size_t, Symbol>> lift_ip_text_update(size_t position, Symbol bit) {
  return lift_update(position, bit, kIpLiftText);
}

int64_t decode_ip_from_hd(int64_t hd, size_t m) {
  if (hd < 0 || hd % 2 != 0)
    throw std::logic_error("a lifted window always has an even, non-negative distance");
  return static_cast<int64_t>(m) - hd / 2;
}

DynamicString lift_ipmod2_pattern(const DynamicString& p) {
  return lift_string(p, kParLiftPattern, ternary_alphabet());
}

DynamicString lift_ipmod2_text(const DynamicString& t) {
  return lift_string(t, kParLiftText, ternary_alphabet());
}

size_t lift_ipmod2_alignment(size_t i) {
  if (i == 0) throw std::out_of_range("alignments are 1-based");
  return 2 * (i - 1) + 1;
}

std::vector<std::pair<size_t, Symbol>> lift_ipmod2_pattern_update(size_t position,
                                                                  Symbol bit) {
  return lift_update(position, bit, kParLiftPattern);
}

std::vector<std::pair<size_t, Symbol>> lift_ipmod2_text_update(size_t position, Symbol bit) {
  return lift_update(position, bit, kParLiftText);
}

uint32_t decode_ipmod2_from_hdmod2(uint32_t hd_mod2, size_t m) {
  return static_cast<uint32_t>(m & 1) ^ (hd_mod2 & 1u);
}

RangeCountViaDynIp::RangeCountViaDynIp(const GridInstance& grid, LazyMode mode)
    : grid_(grid) {
  check_grid(grid_);
  size_t r = grid_.r, m = r * r * r;
  uint32_t size = std::max<uint32_t>(2, grid_.max_weight + 1);
  Alphabet a(size <= 64 ? AlphabetKind::constant : AlphabetKind::polynomial, size, false);
  std::vector<Symbol> pat(m, 0);
  for (uint32_t x = 1; x <= r; ++x)
    for (uint32_t y = 1; y <= r; ++y) {
      size_t s = (shape_index(r, x, y) - 1) * r + 1;
      for (size_t i = 0; i < grid_.coords.size(); ++i)
        if (grid_.coords[i].first <= x && grid_.coords[i].second <= y) pat[s + i - 1] = 1;
    }
  std::vector<Symbol> txt(2 * m, 0);
  for (size_t i = 0; i < grid_.weights.size(); ++i) txt[m - r + i] = grid_.weights[i];
  backend_.emplace(DynamicString(Target::pattern, a, std::move(pat)),
                   DynamicString(Target::text, a, std::move(txt)), UpdateModel::text_only,
                   mode);
}

void RangeCountViaDynIp::set_weight(size_t point, uint32_t weight) {
  if (point >= grid_.weights.size()) throw std::out_of_range("point slot out of range");
  if (weight > grid_.max_weight)
    throw std::invalid_argument("weight exceeds the declared bound");
  grid_.weights[point] = weight;
  size_t m = grid_.r * grid_.r * grid_.r;
  backend_->update_text(m - grid_.r + 1 + point, weight);
  ++report_.backend_updates;
}

int64_t RangeCountViaDynIp::count(uint32_t x, uint32_t y) {
  size_t r = grid_.r, m = r * r * r;
  size_t s = (shape_index(r, x, y) - 1) * r + 1;
  ++report_.backend_queries;
  return backend_->query(m - r + 2 - s);
}

RangeEmptyViaDynEm::RangeEmptyViaDynEm(const GridInstance& grid, LazyMode mode)
    : grid_(grid) {
  check_grid(grid_);
  size_t r = grid_.r, m = r * r * r;
  uint32_t size = grid_.max_weight + 1;
  Alphabet a(size <= 64 ? AlphabetKind::constant : AlphabetKind::polynomial, size, true);
  std::vector<Symbol> pat(m, Alphabet::wildcard);
  for (uint32_t x = 1; x <= r; ++x)
    for (uint32_t y = 1; y <= r; ++y) {
      size_t s = (shape_index(r, x, y) - 1) * r + 1;
      for (size_t i = 0; i < grid_.coords.size(); ++i)
        if (grid_.coords[i].first <= x && grid_.coords[i].second <= y) pat[s + i - 1] = 1;
    }
  std::vector<Symbol> txt(2 * m, 1);
  for (size_t i = 0; i < grid_.weights.size(); ++i) txt[m - r + i] = grid_.weights[i] + 1;
  backend_.emplace(DynamicString(Target::pattern, a, std::move(pat)),
                   DynamicString(Target::text, a, std::move(txt)), UpdateModel::text_only,
                   mode);
}

void RangeEmptyViaDynEm::set_weight(size_t point, uint32_t weight) {
  if (point >= grid_.weights.size()) throw std::out_of_range("point slot out of range");
  if (weight > grid_.max_weight)
    throw std::invalid_argument("weight exceeds the declared bound");
  grid_.weights[point] = weight;
  size_t m = grid_.r * grid_.r * grid_.r;
  backend_->update_text(m - grid_.r + 1 + point, weight + 1);
  ++report_.backend_updates;
}

bool RangeEmptyViaDynEm::empty(uint32_t x, uint32_t y) {
  size_t r = grid_.r, m = r * r * r;
  size_t s = (shape_index(r, x, y) - 1) * r + 1;
  ++report_.backend_queries;
  return backend_->matches(m - r + 2 - s);
}

}  // namespace dynstr

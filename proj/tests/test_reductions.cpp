#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "dynstr/oracle.hpp"
#include "dynstr/reductions.hpp"

using namespace dynstr;

namespace {

std::vector<Symbol> random_bits(size_t len, std::mt19937_64& rng) {
  std::uniform_int_distribution<Symbol> d(0, 1);
  std::vector<Symbol> out(len);
  for (auto& s : out) s = d(rng);
  return out;
}

// A matrix-vector pair whose product has exactly one entry, of value
// exactly 1: row 1 contains a single set bit that the vector shares.
OmvInstance unit_product_instance() {
  OmvInstance inst;
  inst.r = 2;
  inst.matrix = {1, 0, 0, 0};
  inst.vectors = {{1, 0}};
  return inst;
}

}  // namespace

TEST_CASE("matrix-vector products through the wildcard matcher") {
  for (size_t r : {1, 2, 3, 5, 8}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      const OmvInstance inst = random_omv_instance(r, 6, 0.4, seed);
      const auto want = naive_omv(inst);
      for (LazyMode mode : {LazyMode::amortized, LazyMode::deamortized}) {
        const OmvRun run = omv_via_dynem(inst, mode);
        REQUIRE(run.product.size() == want.size());
        for (size_t v = 0; v < want.size(); ++v) CHECK(run.product[v] == want[v]);
      }
    }
  }
}

TEST_CASE("randomized parity gadget is one-sided and amplifies") {
  size_t wrong_runs = 0, runs = 0;
  for (size_t r : {2, 4, 8}) {
    const size_t reps = recommended_omv_repetitions(r * r);
    for (uint64_t seed = 1; seed <= 12; ++seed) {
      const OmvInstance inst = random_omv_instance(r, 5, 0.5, seed * 17);
      const auto want = naive_omv(inst);
      const OmvRun run = omv_via_dynip_mod2(inst, reps, seed);
      ++runs;
      bool ok = true;
      for (size_t v = 0; v < want.size(); ++v)
        for (size_t j = 0; j < r; ++j) {
          // Zero entries may never be reported set.
          if (want[v][j] == 0) CHECK(run.product[v][j] == 0);
          if (run.product[v][j] != want[v][j]) ok = false;
        }
      if (!ok) ++wrong_runs;
      CHECK(run.report.trials == inst.vectors.size() * reps);
    }
  }
  // With ~3 log2(m) repetitions a miss is a once-in-2^18 event per entry.
  CHECK(wrong_runs <= 1);
  (void)runs;
}

TEST_CASE("single-trial detection of a unit product entry is a fair coin") {
  const OmvInstance inst = unit_product_instance();
  for (uint32_t c : {2u, 3u, 5u}) {
    size_t detected = 0;
    const size_t trials = 1000;
    for (uint64_t seed = 0; seed < trials; ++seed) {
      const OmvRun run = c == 2 ? omv_via_dynip_mod2(inst, 1, seed)
                                : omv_via_dynip_modc(inst, c, 1, seed);
      if (run.product[0][0] == 1) ++detected;
      CHECK(run.product[0][1] == 0);  // the zero entry stays zero
    }
    const double freq = static_cast<double>(detected) / static_cast<double>(trials);
    CHECK(freq >= 0.45);
    CHECK(freq <= 0.55);
  }
}

TEST_CASE("larger residues detect heavier rows at rate (c-1)/c") {
  // One row of twelve shared bits: the surviving-bit count is Binomial(12, 1/2)
  // and detection mod 3 happens unless the count is 0, 3, 6, 9, or 12 mod 3 = 0;
  // that works out to 2730/4096.
  OmvInstance inst;
  inst.r = 12;
  inst.matrix.assign(144, 0);
  for (size_t k = 0; k < 12; ++k) inst.matrix[k] = 1;  // row 1 all ones
  inst.vectors = {std::vector<uint8_t>(12, 1)};
  size_t detected = 0;
  const size_t trials = 2000;
  for (uint64_t seed = 0; seed < trials; ++seed) {
    const OmvRun run = omv_via_dynip_modc(inst, 3, 1, seed);
    if (run.product[0][0] == 1) ++detected;
  }
  const double freq = static_cast<double>(detected) / static_cast<double>(trials);
  const double expect = 2730.0 / 4096.0;
  CHECK(freq > expect - 0.05);
  CHECK(freq < expect + 0.05);
}

TEST_CASE("text-only parity gadget matches the oracle") {
  for (size_t r : {2, 4, 6}) {
    const size_t reps = recommended_omv_repetitions(r * r) + 4;
    size_t wrong = 0;
    for (uint64_t seed = 1; seed <= 8; ++seed) {
      const OmvInstance inst = random_omv_instance(r, 4, 0.5, seed * 29);
      const auto want = naive_omv(inst);
      const OmvRun run = omv_via_dynip_mod2_text_only(inst, reps, seed);
      for (size_t v = 0; v < want.size(); ++v)
        for (size_t j = 0; j < r; ++j) {
          if (want[v][j] == 0) CHECK(run.product[v][j] == 0);
          if (run.product[v][j] != want[v][j]) ++wrong;
        }
    }
    CHECK(wrong <= 1);
  }
}

TEST_CASE("approximate-backend gadget decides through the threshold") {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    const OmvInstance inst = random_omv_instance(5, 4, 0.5, seed);
    const auto want = naive_omv(inst);
    for (double eps : {0.25, 0.9}) {
      const OmvRun exact = omv_via_approx_dynip(inst, eps, ApproxIpBackend::exact, seed);
      const OmvRun noisy = omv_via_approx_dynip(inst, eps, ApproxIpBackend::noisy, seed);
      for (size_t v = 0; v < want.size(); ++v) {
        CHECK(exact.product[v] == want[v]);
        CHECK(noisy.product[v] == want[v]);
      }
    }
  }
  CHECK_THROWS_AS(omv_via_approx_dynip(unit_product_instance(), 1.0,
                                       ApproxIpBackend::exact, 1),
                  std::invalid_argument);
}

TEST_CASE("inner product reads off the lifted Hamming distance") {
  // Exhaustive over short equal-length pairs.
  for (size_t len = 1; len <= 6; ++len) {
    for (uint32_t pm = 0; pm < (1u << len); ++pm)
      for (uint32_t tm = 0; tm < (1u << len); ++tm) {
        std::vector<Symbol> ps(len), ts(len);
        for (size_t k = 0; k < len; ++k) {
          ps[k] = (pm >> k) & 1;
          ts[k] = (tm >> k) & 1;
        }
        DynamicString p(Target::pattern, binary_alphabet(), ps);
        DynamicString t(Target::text, binary_alphabet(), ts);
        const DynamicString lp = lift_ip_pattern(p), lt = lift_ip_text(t);
        const int64_t hd = naive_hd(lp.data(), lt.data(), lift_ip_alignment(1));
        CHECK(decode_ip_from_hd(hd, len) == naive_ip(ps, ts, 1));
        const DynamicString qp = lift_ipmod2_pattern(p), qt = lift_ipmod2_text(t);
        const int64_t hd2 = naive_hd(qp.data(), qt.data(), lift_ipmod2_alignment(1));
        CHECK(decode_ipmod2_from_hdmod2(static_cast<uint32_t>(hd2 % 2), len) ==
              static_cast<uint32_t>(naive_ip(ps, ts, 1) % 2));
      }
  }
}

TEST_CASE("lifted instances stay decodable under dynamic updates") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    std::mt19937_64 rng(seed * 43);
    const size_t m = 10, n = 26;
    DynamicString p(Target::pattern, binary_alphabet(), random_bits(m, rng));
    DynamicString t(Target::text, binary_alphabet(), random_bits(n, rng));
    DynHd backend(lift_ip_pattern(p), lift_ip_text(t), UpdateModel::pattern_and_text,
                  LazyMode::amortized);
    DynHd parity_backend(lift_ipmod2_pattern(p), lift_ipmod2_text(t),
                         UpdateModel::pattern_and_text, LazyMode::amortized);
    std::uniform_int_distribution<size_t> ppos(1, m), tpos(1, n), qpos(1, n - m + 1);
    std::uniform_int_distribution<Symbol> bit(0, 1);
    std::bernoulli_distribution upd(0.5), side(0.5);
    for (int op = 0; op < 200; ++op) {
      if (upd(rng)) {
        const Symbol b = bit(rng);
        if (side(rng)) {
          const size_t pos = ppos(rng);
          p.apply_update(pos, b);
          for (const auto& [q, s] : lift_ip_pattern_update(pos, b))
            backend.update_pattern(q, s);
          for (const auto& [q, s] : lift_ipmod2_pattern_update(pos, b))
            parity_backend.update_pattern(q, s);
        } else {
          const size_t pos = tpos(rng);
          t.apply_update(pos, b);
          for (const auto& [q, s] : lift_ip_text_update(pos, b))
            backend.update_text(q, s);
          for (const auto& [q, s] : lift_ipmod2_text_update(pos, b))
            parity_backend.update_text(q, s);
        }
      } else {
        const size_t i = qpos(rng);
        const int64_t want = naive_ip(p.data(), t.data(), i);
        CHECK(decode_ip_from_hd(backend.query(lift_ip_alignment(i)), m) == want);
        const uint32_t hd2 = static_cast<uint32_t>(
            parity_backend.query_mod(lift_ipmod2_alignment(i), 2));
        CHECK(decode_ipmod2_from_hdmod2(hd2, m) == static_cast<uint32_t>(want % 2));
      }
    }
  }
  CHECK_THROWS_AS(decode_ip_from_hd(3, 4), std::logic_error);
  CHECK_THROWS_AS(lift_ip_pattern_update(0, 1), std::out_of_range);
  CHECK_THROWS_AS(lift_ip_pattern_update(1, 2), std::invalid_argument);
}

TEST_CASE("dominance counting and emptiness on the grid") {
  for (size_t r : {1, 2, 3, 5, 8}) {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
      const GridInstance g = random_grid_instance(r, 9, seed * 3);
      RangeCountViaDynIp counts(g);
      RangeEmptyViaDynEm empties(g);
      GridInstance live = g;
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<size_t> slot(0, r - 1);
      std::uniform_int_distribution<uint32_t> weight(0, 9);
      for (int round = 0; round < 3; ++round) {
        for (uint32_t x = 1; x <= r; ++x)
          for (uint32_t y = 1; y <= r; ++y) {
            const int64_t want = naive_dominance(live, x, y);
            CHECK(counts.count(x, y) == want);
            CHECK(empties.empty(x, y) == (want == 0));
          }
        const size_t pslot = slot(rng);
        const uint32_t w = weight(rng);
        counts.set_weight(pslot, w);
        empties.set_weight(pslot, w);
        live.weights[pslot] = w;
      }
      CHECK(counts.report().backend_queries == 3 * r * r);
      CHECK(counts.report().backend_updates == 3);
    }
  }
}

TEST_CASE("grid gadget guardrails") {
  const GridInstance g = random_grid_instance(3, 5, 11);
  RangeCountViaDynIp counts(g);
  CHECK_THROWS_AS(counts.count(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(counts.count(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(counts.set_weight(3, 1), std::out_of_range);
  CHECK_THROWS_AS(counts.set_weight(0, 6), std::invalid_argument);
  RangeEmptyViaDynEm empties(g);
  CHECK_THROWS_AS(empties.empty(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(empties.set_weight(0, 6), std::invalid_argument);
}

TEST_CASE("gadget reports count backend traffic") {
  const OmvInstance inst = random_omv_instance(4, 3, 0.5, 5);
  const OmvRun em = omv_via_dynem(inst);
  CHECK(em.report.backend_queries == inst.vectors.size() * inst.r);
  CHECK(em.report.trials == 0);
  const OmvRun par = omv_via_dynip_mod2(inst, 5, 1);
  CHECK(par.report.trials == inst.vectors.size() * 5);
  CHECK(par.report.backend_queries == par.report.trials * inst.r);
}

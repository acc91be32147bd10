#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "dynstr/blocked.hpp"
#include "dynstr/oracle.hpp"
#include "dynstr/parity.hpp"

using namespace dynstr;

namespace {

std::vector<Symbol> random_symbols(size_t len, Symbol lo, Symbol hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<Symbol> d(lo, hi);
  std::vector<Symbol> out(len);
  for (auto& s : out) s = d(rng);
  return out;
}

}  // namespace

TEST_CASE("blocked structures match the oracles on long texts") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    std::mt19937_64 rng(seed * 31);
    for (size_t m : {5, 23}) {
      for (size_t n : {m, 2 * m, 5 * m + 3, 9 * m + 1}) {
        for (UpdateModel model : {UpdateModel::pattern_and_text, UpdateModel::text_only}) {
          const LazyMode mode = seed % 2 ? LazyMode::amortized : LazyMode::deamortized;
          const Alphabet a(AlphabetKind::constant, 5, false);
          const Alphabet wild(AlphabetKind::constant, 4, true);
          DynHd hd(DynamicString(Target::pattern, a, random_symbols(m, 0, 4, rng)),
                   DynamicString(Target::text, a, random_symbols(n, 0, 4, rng)), model,
                   mode);
          DynIp ip(DynamicString(Target::pattern, a, random_symbols(m, 0, 4, rng)),
                   DynamicString(Target::text, a, random_symbols(n, 0, 4, rng)), model,
                   mode);
          DynEm em(DynamicString(Target::pattern, wild, random_symbols(m, 0, 4, rng)),
                   DynamicString(Target::text, wild, random_symbols(n, 0, 4, rng)), model,
                   mode);
          std::uniform_int_distribution<size_t> ppos(1, m), tpos(1, n), qpos(1, n - m + 1);
          std::uniform_int_distribution<Symbol> sym(0, 4);
          std::bernoulli_distribution upd(0.55), side(0.5);
          for (int op = 0; op < 250; ++op) {
            if (upd(rng)) {
              const bool pat = model == UpdateModel::pattern_and_text && side(rng);
              const size_t pp = ppos(rng), tp = tpos(rng);
              const Symbol v = sym(rng);
              if (pat) {
                hd.update_pattern(pp, v);
                ip.update_pattern(pp, v);
                em.update_pattern(pp, v);
              } else {
                hd.update_text(tp, v);
                ip.update_text(tp, v);
                em.update_text(tp, v);
              }
            } else {
              const size_t i = qpos(rng);
              CHECK(hd.query(i) ==
                    naive_hd(hd.core().pattern().data(), hd.core().text().data(), i));
              CHECK(ip.query(i) ==
                    naive_ip(ip.core().pattern().data(), ip.core().text().data(), i));
              const NaiveEmResult want =
                  naive_em(em.pattern().data(), em.text().data(), i);
              CHECK(em.matches(i) == want.match);
              CHECK(em.score(i) == want.weighted);
              // Residue queries agree with the plain answers.
              for (uint32_t c : {2u, 3u, 5u}) {
                CHECK(hd.query_mod(i, c) ==
                      naive_hd(hd.core().pattern().data(), hd.core().text().data(), i) %
                          c);
                CHECK(ip.query_mod(i, c) ==
                      naive_ip(ip.core().pattern().data(), ip.core().text().data(), i) %
                          c);
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("block decomposition shape and touch counts") {
  std::mt19937_64 rng(9);
  const Alphabet a = binary_alphabet();
  const size_t m = 16;
  for (size_t n : {16, 32, 33, 47, 48, 49, 160}) {
    DynHd hd(DynamicString(Target::pattern, a, random_symbols(m, 0, 1, rng)),
             DynamicString(Target::text, a, random_symbols(n, 0, 1, rng)),
             UpdateModel::pattern_and_text, LazyMode::amortized);
    const size_t blocks = hd.core().block_count();
    const size_t expect = n <= 2 * m ? 1 : (n + m - 1) / m - 1;
    CHECK(blocks == expect);
    std::uniform_int_distribution<size_t> tpos(1, n);
    for (int k = 0; k < 40; ++k) {
      hd.update_text(tpos(rng), k % 2);
      CHECK(hd.core().counters().blocks_touched_last <= 2);
      CHECK(hd.core().counters().blocks_touched_last >= 1);
    }
    hd.update_pattern(3, 1);
    CHECK(hd.core().counters().blocks_touched_last == blocks);
  }
}

TEST_CASE("single-block instances answer like the raw engine") {
  std::mt19937_64 rng(21);
  const Alphabet a(AlphabetKind::constant, 4, false);
  const size_t m = 20, n = 40;
  const auto ps = random_symbols(m, 0, 3, rng);
  const auto ts = random_symbols(n, 0, 3, rng);
  DynHd blocked(DynamicString(Target::pattern, a, ps), DynamicString(Target::text, a, ts),
                UpdateModel::pattern_and_text, LazyMode::amortized);
  LazyStructure raw(DynamicString(Target::pattern, a, ps),
                    DynamicString(Target::text, a, ts), LocalFn::hamming,
                    LazyMode::amortized);
  CHECK(blocked.core().block_count() == 1);
  std::uniform_int_distribution<size_t> ppos(1, m), tpos(1, n), qpos(1, n - m + 1);
  std::uniform_int_distribution<Symbol> sym(0, 3);
  std::bernoulli_distribution upd(0.5), side(0.5);
  for (int op = 0; op < 300; ++op) {
    if (upd(rng)) {
      const bool pat = side(rng);
      const size_t pos = pat ? ppos(rng) : tpos(rng);
      const Symbol v = sym(rng);
      if (pat) {
        blocked.update_pattern(pos, v);
        raw.update(Target::pattern, pos, v);
      } else {
        blocked.update_text(pos, v);
        raw.update(Target::text, pos, v);
      }
    } else {
      const size_t i = qpos(rng);
      CHECK(blocked.query(i) == raw.query(i));
    }
  }
}

TEST_CASE("text-only model rejects pattern updates") {
  std::mt19937_64 rng(2);
  const Alphabet a = binary_alphabet();
  DynHd hd(DynamicString(Target::pattern, a, random_symbols(8, 0, 1, rng)),
           DynamicString(Target::text, a, random_symbols(40, 0, 1, rng)),
           UpdateModel::text_only, LazyMode::amortized);
  CHECK_THROWS_AS(hd.update_pattern(1, 1), std::logic_error);
  CHECK_NOTHROW(hd.update_text(1, 1));
}

TEST_CASE("parity fast path agrees with the exact path and stays logarithmic") {
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    std::mt19937_64 rng(seed * 13);
    const size_t m = 48;
    const size_t n = 48 + 211 * (seed % 3);
    const Alphabet a = binary_alphabet();
    const auto ps = random_symbols(m, 0, 1, rng);
    const auto ts = random_symbols(n, 0, 1, rng);
    ParityHdMod2 fast(DynamicString(Target::pattern, a, ps),
                      DynamicString(Target::text, a, ts));
    DynHd exact(DynamicString(Target::pattern, a, ps), DynamicString(Target::text, a, ts),
                UpdateModel::pattern_and_text, LazyMode::amortized);
    std::uniform_int_distribution<size_t> ppos(1, m), tpos(1, n), qpos(1, n - m + 1);
    std::uniform_int_distribution<Symbol> sym(0, 1);
    std::bernoulli_distribution upd(0.5), side(0.5);
    for (int op = 0; op < 500; ++op) {
      if (upd(rng)) {
        const bool pat = side(rng);
        const size_t pos = pat ? ppos(rng) : tpos(rng);
        const Symbol v = sym(rng);
        if (pat) {
          fast.update_pattern(pos, v);
          exact.update_pattern(pos, v);
        } else {
          fast.update_text(pos, v);
          exact.update_text(pos, v);
        }
      } else {
        const size_t i = qpos(rng);
        const uint32_t want =
            static_cast<uint32_t>(naive_hd(fast.pattern().data(), fast.text().data(), i) % 2);
        CHECK(fast.query(i, m) == want);
        CHECK(static_cast<uint32_t>(exact.query_mod(i, 2)) == want);
      }
    }
    uint64_t budget = 0;
    for (size_t x = n; x > 0; x >>= 1) ++budget;  // floor(log2 n) + 1
    CHECK(fast.counters().max_nodes_per_traversal <= budget);
    CHECK(fast.counters().max_nodes_per_op <= 2 * budget);
    CHECK_THROWS_AS(fast.query(1, m - 1), std::invalid_argument);
    CHECK_THROWS_AS(fast.query(n, m), std::out_of_range);
  }
}

TEST_CASE("wildcard matcher remaps oversized alphabets transparently") {
  std::mt19937_64 rng(4);
  const Alphabet declared(AlphabetKind::polynomial, 1u << 20, true);
  const size_t m = 12, n = 40;
  // Symbols drawn from a huge range, but few distinct values.
  std::vector<Symbol> pool;
  for (int k = 0; k < 9; ++k) pool.push_back(1 + (static_cast<Symbol>(k) * 104729u));
  auto draw = [&](size_t len) {
    std::uniform_int_distribution<size_t> pick(0, pool.size());  // == size -> wildcard
    std::vector<Symbol> out(len);
    for (auto& s : out) {
      const size_t j = pick(rng);
      s = j == pool.size() ? Alphabet::wildcard : pool[j];
    }
    return out;
  };
  DynEm em(DynamicString(Target::pattern, declared, draw(m)),
           DynamicString(Target::text, declared, draw(n)), UpdateModel::pattern_and_text,
           LazyMode::amortized);
  CHECK(em.remapped());
  std::uniform_int_distribution<size_t> ppos(1, m), tpos(1, n), qpos(1, n - m + 1);
  std::bernoulli_distribution upd(0.5), side(0.5);
  for (int op = 0; op < 300; ++op) {
    if (upd(rng)) {
      const size_t j = std::uniform_int_distribution<size_t>(0, pool.size())(rng);
      const Symbol v = j == pool.size() ? Alphabet::wildcard : pool[j];
      if (side(rng))
        em.update_pattern(ppos(rng), v);
      else
        em.update_text(tpos(rng), v);
    } else {
      const size_t i = qpos(rng);
      const NaiveEmResult want = naive_em(em.pattern().data(), em.text().data(), i);
      CHECK(em.matches(i) == want.match);
    }
  }
}

TEST_CASE("wildcard matcher rejects exhausting the distinct-symbol budget") {
  const Alphabet declared(AlphabetKind::polynomial, 1u << 30, true);
  const size_t m = 1 << 12;
  // All-distinct strings need more ranks than the representable budget.
  std::vector<Symbol> ps(m), ts(2 * m);
  for (size_t i = 0; i < ps.size(); ++i) ps[i] = static_cast<Symbol>(i + 1);
  for (size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<Symbol>(m + i + 1);
  CHECK_THROWS_AS(DynEm(DynamicString(Target::pattern, declared, ps),
                        DynamicString(Target::text, declared, ts),
                        UpdateModel::pattern_and_text, LazyMode::amortized),
                  std::overflow_error);
}

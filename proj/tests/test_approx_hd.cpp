#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dynstr/approx.hpp"
#include "dynstr/oracle.hpp"

using namespace dynstr;

namespace {

std::vector<Symbol> random_symbols(size_t len, Symbol lo, Symbol hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<Symbol> d(lo, hi);
  std::vector<Symbol> out(len);
  for (auto& s : out) s = d(rng);
  return out;
}

bool within(double estimate, double exact, double eps) {
  return estimate >= exact * (1.0 - eps) - 1e-9 && estimate <= exact * (1.0 + eps) + 1e-9;
}

}  // namespace

TEST_CASE("pattern-updates sketch: coverage, zero preservation, exact maintenance") {
  for (Symbol hi : {Symbol{1}, Symbol{4}}) {  // binary and unary-expanded paths
    const Alphabet a = hi == 1 ? binary_alphabet()
                               : Alphabet(AlphabetKind::constant, hi + 1, false);
    size_t covered = 0, total = 0;
    for (uint64_t seed = 1; seed <= 30; ++seed) {
      std::mt19937_64 rng(seed * 101 + hi);
      const size_t m = 48, n = 128;
      const double eps = 0.5;
      ApproxHdPatternUpdates s(
          DynamicString(Target::pattern, a, random_symbols(m, 0, hi, rng)),
          DynamicString(Target::text, a, random_symbols(n, 0, hi, rng)), eps, seed);
      std::uniform_int_distribution<size_t> ppos(1, m), qpos(1, n - m + 1);
      std::uniform_int_distribution<Symbol> sym(0, hi);
      for (int round = 0; round < 10; ++round) {
        for (int u = 0; u < 8; ++u) s.update_pattern(ppos(rng), sym(rng));
        const size_t i = qpos(rng);
        const double exact =
            static_cast<double>(naive_hd(s.pattern().data(), s.text().data(), i));
        ++total;
        if (within(s.query(i), exact, eps)) ++covered;
      }
      // The maintained sketch equals a from-scratch rebuild bit for bit.
      CHECK(s.pattern_sketch() == s.pattern_sketch_from_scratch());
      // Forcing the window equal must produce exactly zero.
      const size_t zi = qpos(rng);
      for (size_t j = 1; j <= m; ++j) s.update_pattern(j, s.text().at(zi + j - 1));
      CHECK(s.query(zi) == 0.0);
      CHECK_THROWS_AS(s.update_text(1, 0), std::logic_error);
    }
    CHECK(static_cast<double>(covered) / static_cast<double>(total) >= 2.0 / 3.0);
  }
}

TEST_CASE("text-updates sketch: coverage, zero preservation, exact maintenance") {
  size_t covered = 0, total = 0;
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    std::mt19937_64 rng(seed * 313);
    const size_t m = 32, n = 96;
    const double eps = 0.5;
    const Alphabet a = binary_alphabet();
    ApproxHdTextUpdates s(DynamicString(Target::pattern, a, random_symbols(m, 0, 1, rng)),
                          DynamicString(Target::text, a, random_symbols(n, 0, 1, rng)),
                          eps, seed);
    std::uniform_int_distribution<size_t> tpos(1, n), qpos(1, n - m + 1);
    std::uniform_int_distribution<Symbol> sym(0, 1);
    for (int round = 0; round < 10; ++round) {
      for (int u = 0; u < 8; ++u) s.update_text(tpos(rng), sym(rng));
      const size_t i = qpos(rng);
      const double exact =
          static_cast<double>(naive_hd(s.pattern().data(), s.text().data(), i));
      ++total;
      if (within(s.query(i), exact, eps)) ++covered;
    }
    // Sampled block sketches equal their from-scratch rebuilds exactly.
    for (size_t level = 1; level <= s.levels(); ++level) {
      const size_t len = size_t{1} << level;
      const size_t blocks = n / len;
      for (size_t b = 0; b < std::min<size_t>(blocks, 3); ++b)
        for (size_t rho = 0; rho < s.repetitions(); ++rho)
          CHECK(std::vector<int64_t>(s.text_block_sketch(level, b, rho).begin(),
                                     s.text_block_sketch(level, b, rho).end()) ==
                s.text_block_sketch_from_scratch(level, b, rho));
    }
    // Equalize a window through text updates: the estimate must be exactly 0.
    const size_t zi = qpos(rng);
    for (size_t j = 1; j <= m; ++j) s.update_text(zi + j - 1, s.pattern().at(j));
    CHECK(s.query(zi) == 0.0);
    CHECK_THROWS_AS(s.update_pattern(1, 0), std::logic_error);
  }
  CHECK(static_cast<double>(covered) / static_cast<double>(total) >= 2.0 / 3.0);
}

TEST_CASE("text-updates sketch: eager and deferred preparation answer identically") {
  std::mt19937_64 rng(5);
  const size_t m = 16, n = 48;
  const Alphabet a = binary_alphabet();
  const auto ps = random_symbols(m, 0, 1, rng);
  const auto ts = random_symbols(n, 0, 1, rng);
  ApproxHdTextUpdates eager(DynamicString(Target::pattern, a, ps),
                            DynamicString(Target::text, a, ts), 0.5, 9, {},
                            ApproxHdTextUpdates::Prep::eager);
  ApproxHdTextUpdates lazy(DynamicString(Target::pattern, a, ps),
                           DynamicString(Target::text, a, ts), 0.5, 9, {},
                           ApproxHdTextUpdates::Prep::deferred);
  std::uniform_int_distribution<size_t> tpos(1, n), qpos(1, n - m + 1);
  std::uniform_int_distribution<Symbol> sym(0, 1);
  for (int op = 0; op < 200; ++op) {
    if (op % 3 != 0) {
      const size_t pos = tpos(rng);
      const Symbol v = sym(rng);
      eager.update_text(pos, v);
      lazy.update_text(pos, v);
    } else {
      const size_t i = qpos(rng);
      CHECK(eager.query(i) == lazy.query(i));
    }
  }
}

TEST_CASE("equal seeds give equal estimates") {
  std::mt19937_64 rng(17);
  const size_t m = 24, n = 60;
  const Alphabet a = binary_alphabet();
  const auto ps = random_symbols(m, 0, 1, rng);
  const auto ts = random_symbols(n, 0, 1, rng);
  ApproxHdPatternUpdates s1(DynamicString(Target::pattern, a, ps),
                            DynamicString(Target::text, a, ts), 0.25, 4242);
  ApproxHdPatternUpdates s2(DynamicString(Target::pattern, a, ps),
                            DynamicString(Target::text, a, ts), 0.25, 4242);
  for (size_t i = 1; i <= n - m + 1; ++i) CHECK(s1.query(i) == s2.query(i));
}

TEST_CASE("mapping bank separates unequal symbol pairs half the time") {
  MappingBank bank(1000, 10, 99);
  size_t separated = 0;
  for (size_t j = 0; j < bank.size(); ++j)
    if (bank.map(j, 3) != bank.map(j, 7)) ++separated;
  const double freq = static_cast<double>(separated) / 1000.0;
  CHECK(freq > 0.45);
  CHECK(freq < 0.55);
  // Equal pairs are never separated.
  for (size_t j = 0; j < bank.size(); ++j) CHECK(bank.map(j, 4) == bank.map(j, 4));
}

TEST_CASE("an identity bank reduces the estimator to twice the binary distance") {
  std::mt19937_64 rng(8);
  const size_t m = 16, n = 40;
  const Alphabet a = binary_alphabet();
  const auto ps = random_symbols(m, 0, 1, rng);
  const auto ts = random_symbols(n, 0, 1, rng);
  MappingBank identity(std::vector<std::vector<uint8_t>>{{0, 1}});
  ApproxHdPolyAlphabet s(DynamicString(Target::pattern, a, ps),
                         DynamicString(Target::text, a, ts), 0.5,
                         ApproxModel::both_updates, 1, identity);
  for (size_t i = 1; i <= n - m + 1; ++i) {
    const double exact = static_cast<double>(naive_hd(ps, ts, i));
    CHECK(s.query(i) == MappingBank::normalization * exact);
  }
}

TEST_CASE("polynomial-alphabet estimator covers all three update models") {
  const Alphabet a(AlphabetKind::polynomial, 100000, false);
  const double eps = 0.5;
  for (ApproxModel model : {ApproxModel::both_updates, ApproxModel::pattern_updates,
                            ApproxModel::text_updates}) {
    size_t covered = 0, total = 0;
    for (uint64_t seed = 1; seed <= 8; ++seed) {
      std::mt19937_64 rng(seed * 7 + static_cast<uint64_t>(model));
      const size_t m = 16, n = 40;
      ApproxHdPolyAlphabet s(
          DynamicString(Target::pattern, a, random_symbols(m, 0, 99999, rng)),
          DynamicString(Target::text, a, random_symbols(n, 0, 99999, rng)), eps, model,
          seed);
      const double tol = s.effective_epsilon();
      if (model == ApproxModel::both_updates)
        CHECK(tol == eps);
      else
        CHECK(tol == 2.0 * eps + eps * eps);
      std::uniform_int_distribution<size_t> ppos(1, m), tpos(1, n), qpos(1, n - m + 1);
      std::uniform_int_distribution<Symbol> sym(0, 99999);
      for (int round = 0; round < 6; ++round) {
        for (int u = 0; u < 4; ++u) {
          if (model != ApproxModel::text_updates) s.update_pattern(ppos(rng), sym(rng));
          if (model != ApproxModel::pattern_updates) s.update_text(tpos(rng), sym(rng));
        }
        const size_t i = qpos(rng);
        const double exact =
            static_cast<double>(naive_hd(s.pattern().data(), s.text().data(), i));
        ++total;
        if (within(s.query(i), exact, tol)) ++covered;
      }
      // Equal window -> exactly zero, in every model.
      if (model != ApproxModel::text_updates) {
        const size_t zi = qpos(rng);
        for (size_t j = 1; j <= m; ++j) s.update_pattern(j, s.text().at(zi + j - 1));
        CHECK(s.query(zi) == 0.0);
      } else {
        const size_t zi = qpos(rng);
        for (size_t j = 1; j <= m; ++j) s.update_text(zi + j - 1, s.pattern().at(j));
        CHECK(s.query(zi) == 0.0);
      }
    }
    CHECK(static_cast<double>(covered) / static_cast<double>(total) >= 2.0 / 3.0);
  }
}

TEST_CASE("approximation parameter validation") {
  std::mt19937_64 rng(3);
  const Alphabet a = binary_alphabet();
  DynamicString p(Target::pattern, a, random_symbols(8, 0, 1, rng));
  DynamicString t(Target::text, a, random_symbols(20, 0, 1, rng));
  CHECK_THROWS_AS(ApproxHdPatternUpdates(p, t, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ApproxHdPatternUpdates(p, t, -0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(ApproxHdPatternUpdates(p, t, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(ApproxHdTextUpdates(p, t, 0.0, 1), std::invalid_argument);
  // Wildcard alphabets are not approximable here.
  const Alphabet wild(AlphabetKind::constant, 3, true);
  DynamicString wp(Target::pattern, wild, {0, 1, 2});
  DynamicString wt(Target::text, wild, {1, 2, 3, 0, 1, 2});
  CHECK_THROWS_AS(ApproxHdPatternUpdates(wp, wt, 0.5, 1), std::invalid_argument);
}

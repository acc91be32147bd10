#include "dynstr/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dynstr/approx.hpp"
#include "dynstr/blocked.hpp"
#include "dynstr/oracle.hpp"
#include "dynstr/parity.hpp"
#include "dynstr/reductions.hpp"

namespace dynstr {

namespace {

using Clock = std::chrono::steady_clock;

int64_t ns_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
}

double percentile(std::vector<int64_t>& xs, double q) {
  if (xs.empty()) return 0.0;
  size_t idx = static_cast<size_t>(q * static_cast<double>(xs.size() - 1) + 0.5);
  if (idx >= xs.size()) idx = xs.size() - 1;
  std::nth_element(xs.begin(), xs.begin() + static_cast<ptrdiff_t>(idx), xs.end());
  return static_cast<double>(xs[idx]);
}

void check_spec(const WorkloadSpec& s) {
  if (s.m == 0) throw std::invalid_argument("m: must be at least 1");
  if (s.n < s.m) throw std::invalid_argument("n: must be at least m");
  uint32_t min_sigma = s.problem == Problem::em ? 1 : 2;
  if (s.sigma < min_sigma)
    throw std::invalid_argument("sigma: must be at least " + std::to_string(min_sigma));
  if (s.update_ratio + s.query_ratio == 0)
    throw std::invalid_argument("ratio: update and query parts must not both be zero");
  if (s.problem == Problem::hd_mod2 && s.sigma != 2)
    throw std::invalid_argument("sigma: the parity fast path is binary only");
  if (s.problem == Problem::approx_hd && (!(s.epsilon > 0.0) || s.epsilon > 1.0))
    throw std::invalid_argument("epsilon: must lie in (0, 1]");
}

Alphabet spec_alphabet(const WorkloadSpec& s) {
  if (s.problem == Problem::em)
    return Alphabet(s.sigma <= 64 ? AlphabetKind::constant : AlphabetKind::polynomial,
                    s.sigma, true);
  if (s.sigma == 2) return binary_alphabet();
  if (s.sigma == 3) return ternary_alphabet();
  return Alphabet(s.sigma <= 64 ? AlphabetKind::constant : AlphabetKind::polynomial,
                  s.sigma, false);
}

std::string alphabet_name(const Alphabet& a) {
  if (a.kind() == AlphabetKind::binary) return "binary";
  if (a.kind() == AlphabetKind::ternary) return "ternary";
  std::string s = "sigma=" + std::to_string(a.size());
  if (a.wildcard_enabled()) s += "+wild";
  return s;
}

std::vector<Symbol> random_string(size_t len, const Alphabet& a, std::mt19937_64& rng) {
  std::uniform_int_distribution<Symbol> sym(0, a.max_symbol());
  std::vector<Symbol> out(len);
  for (auto& s : out) s = sym(rng);
  return out;
}

struct OpsResult {
  std::vector<int64_t> update_ns, query_ns;
  std::vector<int64_t> update_work, query_work;
  uint64_t rebuilds = 0;
  size_t covered = 0, coverage_total = 0;
};

// Drives one structure through the seeded operation stream. The driver
// exposes update_pattern/update_text/query/last_work/rebuilds, and an
// optional coverage hook for approximate answers.
template <class Driver>
OpsResult drive(const WorkloadSpec& spec, Driver& d) {
  std::mt19937_64 rng(spec.seed);
  const double p_update =
      static_cast<double>(spec.update_ratio) /
      static_cast<double>(spec.update_ratio + spec.query_ratio);
  std::bernoulli_distribution is_update(p_update);
  std::bernoulli_distribution to_pattern(0.5);
  std::uniform_int_distribution<size_t> ppos(1, spec.m), tpos(1, spec.n),
      qpos(1, spec.n - spec.m + 1);
  Alphabet a = spec_alphabet(spec);
  std::uniform_int_distribution<Symbol> sym(0, a.max_symbol());

  OpsResult out;
  for (size_t op = 0; op < spec.count; ++op) {
    const bool upd = spec.update_ratio > 0 && (spec.query_ratio == 0 || is_update(rng));
    if (upd) {
      const bool pat = spec.model == WorkloadModel::pattern ||
                       (spec.model == WorkloadModel::both && to_pattern(rng));
      const size_t pos = pat ? ppos(rng) : tpos(rng);
      const Symbol s = sym(rng);
      const auto t0 = Clock::now();
      if (pat)
        d.update_pattern(pos, s);
      else
        d.update_text(pos, s);
      out.update_ns.push_back(ns_since(t0));
      out.update_work.push_back(static_cast<int64_t>(d.last_work()));
    } else {
      const size_t i = qpos(rng);
      const auto t0 = Clock::now();
      const double v = d.query(i);
      out.query_ns.push_back(ns_since(t0));
      out.query_work.push_back(static_cast<int64_t>(d.last_work()));
      d.note_answer(i, v, out);
    }
  }
  out.rebuilds = d.rebuilds();
  return out;
}

template <class S>
struct BlockedDriver {
  S& s;
  uint32_t mod = 0;  // 0 = plain value query
  void update_pattern(size_t p, Symbol v) { s.update_pattern(p, v); }
  void update_text(size_t p, Symbol v) { s.update_text(p, v); }
  double query(size_t i) {
    return mod != 0 ? static_cast<double>(s.query_mod(i, mod))
                    : static_cast<double>(s.query(i));
  }
  uint64_t last_work() const { return s.core().counters().work_units_last_op; }
  uint64_t rebuilds() const { return s.core().counters().rebuilds_total; }
  void note_answer(size_t, double, OpsResult&) const {}
};

struct ParityDriver {
  ParityHdMod2& s;
  size_t m;
  void update_pattern(size_t p, Symbol v) { s.update_pattern(p, v); }
  void update_text(size_t p, Symbol v) { s.update_text(p, v); }
  double query(size_t i) { return static_cast<double>(s.query(i, m)); }
  uint64_t last_work() const { return s.counters().nodes_last_op; }
  uint64_t rebuilds() const { return 0; }
  void note_answer(size_t, double, OpsResult&) const {}
};

template <class S>
struct ApproxDriver {
  S& s;
  double tolerance;  // effective epsilon of the structure
  void update_pattern(size_t p, Symbol v) { s.update_pattern(p, v); }
  void update_text(size_t p, Symbol v) { s.update_text(p, v); }
  double query(size_t i) { return s.query(i); }
  uint64_t last_work() const { return s.counters().work_units_last_op; }
  uint64_t rebuilds() const { return 0; }
  void note_answer(size_t i, double v, OpsResult& out) const {
    const double exact = static_cast<double>(
        naive_hd(s.pattern().data(), s.text().data(), i));
    ++out.coverage_total;
    if (v >= exact / (1.0 + tolerance) - 1e-9 && v <= exact * (1.0 + tolerance) + 1e-9)
      ++out.covered;
  }
};

BenchRow base_row(const WorkloadSpec& spec) {
  BenchRow row;
  row.problem = problem_name(spec.problem);
  row.alphabet = alphabet_name(spec_alphabet(spec));
  row.n = spec.n;
  row.m = spec.m;
  row.model = model_name(spec.model);
  if (spec.problem == Problem::approx_hd) row.epsilon = spec.epsilon;
  return row;
}

std::vector<BenchRow> rows_from(const WorkloadSpec& spec, OpsResult& res) {
  std::vector<BenchRow> rows;
  auto emit = [&](const char* kind, std::vector<int64_t>& ns, std::vector<int64_t>& work,
                  bool with_coverage) {
    if (ns.empty()) return;
    BenchRow row = base_row(spec);
    row.op_kind = kind;
    row.median_ns = percentile(ns, 0.5);
    row.p99_ns = percentile(ns, 0.99);
    row.work_units_median = percentile(work, 0.5);
    row.rebuilds = res.rebuilds;
    // Coverage is a property of the query answers alone.
    if (with_coverage && res.coverage_total > 0)
      row.coverage =
          static_cast<double>(res.covered) / static_cast<double>(res.coverage_total);
    rows.push_back(std::move(row));
  };
  emit("update", res.update_ns, res.update_work, false);
  emit("query", res.query_ns, res.query_work, true);
  return rows;
}

}  // namespace

std::vector<BenchRow> run_workload(const WorkloadSpec& spec) {
  check_spec(spec);
  if (spec.count == 0) return {};

  std::mt19937_64 init_rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  const Alphabet a = spec_alphabet(spec);
  DynamicString pattern(Target::pattern, a, random_string(spec.m, a, init_rng));
  DynamicString text(Target::text, a, random_string(spec.n, a, init_rng));
  const UpdateModel um = spec.model == WorkloadModel::text
                             ? UpdateModel::text_only
                             : UpdateModel::pattern_and_text;

  OpsResult res;
  switch (spec.problem) {
    case Problem::hd: {
      DynHd s(pattern, text, um, spec.mode);
      BlockedDriver<DynHd> d{s, 0};
      res = drive(spec, d);
      break;
    }
    case Problem::ip: {
      DynIp s(pattern, text, um, spec.mode);
      BlockedDriver<DynIp> d{s, 0};
      res = drive(spec, d);
      break;
    }
    case Problem::ip_mod2: {
      DynIp s(pattern, text, um, spec.mode);
      BlockedDriver<DynIp> d{s, 2};
      res = drive(spec, d);
      break;
    }
    case Problem::em: {
      DynEm s(pattern, text, um, spec.mode);
      struct EmDriver {
        DynEm& s;
        void update_pattern(size_t p, Symbol v) { s.update_pattern(p, v); }
        void update_text(size_t p, Symbol v) { s.update_text(p, v); }
        double query(size_t i) { return static_cast<double>(s.score(i)); }
        uint64_t last_work() const { return s.core().counters().work_units_last_op; }
        uint64_t rebuilds() const { return s.core().counters().rebuilds_total; }
        void note_answer(size_t, double, OpsResult&) const {}
      } d{s};
      res = drive(spec, d);
      break;
    }
    case Problem::hd_mod2: {
      ParityHdMod2 s(pattern, text);
      ParityDriver d{s, spec.m};
      res = drive(spec, d);
      break;
    }
    case Problem::approx_hd: {
      if (spec.sigma <= 64 && spec.model == WorkloadModel::pattern) {
        ApproxHdPatternUpdates s(pattern, text, spec.epsilon, spec.seed);
        ApproxDriver<ApproxHdPatternUpdates> d{s, s.epsilon()};
        res = drive(spec, d);
      } else if (spec.sigma <= 64 && spec.model == WorkloadModel::text) {
        ApproxHdTextUpdates s(pattern, text, spec.epsilon, spec.seed);
        ApproxDriver<ApproxHdTextUpdates> d{s, s.epsilon()};
        res = drive(spec, d);
      } else {
        const ApproxModel am = spec.model == WorkloadModel::pattern
                                   ? ApproxModel::pattern_updates
                                   : spec.model == WorkloadModel::text
                                         ? ApproxModel::text_updates
                                         : ApproxModel::both_updates;
        ApproxHdPolyAlphabet s(pattern, text, spec.epsilon, am, spec.seed);
        ApproxDriver<ApproxHdPolyAlphabet> d{s, s.effective_epsilon()};
        res = drive(spec, d);
      }
      break;
    }
  }
  return rows_from(spec, res);
}

namespace {

struct GadgetRunStats {
  int64_t total_ns = 0;
  uint64_t ops = 0;
  size_t matched = 0, entries = 0;
  bool correct = false;
};

GadgetRunStats score_omv(const OmvInstance& inst, const OmvRun& run, int64_t ns) {
  GadgetRunStats st;
  st.total_ns = ns;
  st.ops = run.report.backend_updates + run.report.backend_queries;
  const auto expect = naive_omv(inst);
  st.correct = true;
  for (size_t v = 0; v < expect.size(); ++v)
    for (size_t j = 0; j < expect[v].size(); ++j) {
      ++st.entries;
      if (run.product[v][j] == expect[v][j])
        ++st.matched;
      else
        st.correct = false;
    }
  if (st.entries == 0) st.correct = true;  // vacuously
  return st;
}

}  // namespace

GadgetOutcome run_gadget(const GadgetSpec& spec) {
  check_gadget_name(spec.gadget);
  if (spec.r == 0) throw std::invalid_argument("r: must be at least 1");
  if (spec.runs == 0) throw std::invalid_argument("runs: must be at least 1");

  GadgetOutcome out;
  std::vector<int64_t> per_op_ns;
  std::vector<int64_t> op_counts;
  size_t matched = 0, entries = 0;
  const bool grid = spec.gadget == "range_count" || spec.gadget == "range_empty";
  const size_t reps = spec.repetitions != 0
                          ? spec.repetitions
                          : recommended_omv_repetitions(spec.r * spec.r);

  for (size_t k = 0; k < spec.runs; ++k) {
    const uint64_t seed = spec.seed + k;
    GadgetRunStats st;
    if (grid) {
      GridInstance g = random_grid_instance(spec.r, spec.max_weight, seed);
      const auto t0 = Clock::now();
      std::mt19937_64 rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
      std::uniform_int_distribution<size_t> slot(0, g.coords.size() - 1);
      std::uniform_int_distribution<uint32_t> weight(0, spec.max_weight);
      st.correct = true;
      auto check_all = [&](auto& gadget, const GridInstance& live) {
        for (uint32_t x = 1; x <= spec.r; ++x)
          for (uint32_t y = 1; y <= spec.r; ++y) {
            ++st.entries;
            const int64_t want = naive_dominance(live, x, y);
            bool ok;
            if constexpr (requires { gadget.count(x, y); })
              ok = gadget.count(x, y) == want;
            else
              ok = gadget.empty(x, y) == (want == 0);
            if (ok)
              ++st.matched;
            else
              st.correct = false;
          }
      };
      auto exercise = [&](auto& gadget) {
        GridInstance live = g;
        check_all(gadget, live);
        for (size_t u = 0; u < spec.r; ++u) {
          const size_t p = slot(rng);
          const uint32_t w = weight(rng);
          gadget.set_weight(p, w);
          live.weights[p] = w;
        }
        check_all(gadget, live);
        st.ops = gadget.report().backend_updates + gadget.report().backend_queries;
      };
      if (spec.gadget == "range_count") {
        RangeCountViaDynIp gadget(g, spec.mode);
        exercise(gadget);
      } else {
        RangeEmptyViaDynEm gadget(g, spec.mode);
        exercise(gadget);
      }
      st.total_ns = ns_since(t0);
    } else {
      OmvInstance inst =
          random_omv_instance(spec.r, spec.vector_count, 0.5, seed);
      const auto t0 = Clock::now();
      OmvRun run;
      if (spec.gadget == "omv_em")
        run = omv_via_dynem(inst, spec.mode);
      else if (spec.gadget == "omv_ip_mod2")
        run = omv_via_dynip_mod2(inst, reps, seed, spec.mode);
      else if (spec.gadget == "omv_ip_modc")
        run = omv_via_dynip_modc(inst, spec.modulus, reps, seed, spec.mode);
      else if (spec.gadget == "omv_ip_text_only")
        run = omv_via_dynip_mod2_text_only(inst, reps, seed, spec.mode);
      else if (spec.gadget == "omv_approx_ip")
        run = omv_via_approx_dynip(inst, spec.epsilon, ApproxIpBackend::noisy, seed,
                                   spec.mode);
      else
        run = omv_via_approx_dynip(inst, spec.epsilon, ApproxIpBackend::exact, seed,
                                   spec.mode);
      st = score_omv(inst, run, ns_since(t0));
    }
    out.verdicts.push_back(st.correct);
    matched += st.matched;
    entries += st.entries;
    per_op_ns.push_back(st.ops > 0 ? st.total_ns / static_cast<int64_t>(st.ops)
                                   : st.total_ns);
    op_counts.push_back(static_cast<int64_t>(st.ops));
  }

  BenchRow row;
  row.problem = spec.gadget;
  row.alphabet = grid ? "sigma=" + std::to_string(spec.max_weight + 1) : "binary";
  row.m = grid ? spec.r * spec.r * spec.r : spec.r * spec.r;
  row.n = 2 * row.m;
  row.model = "gadget";
  if (spec.gadget == "omv_approx_ip" || spec.gadget == "omv_approx_ip_exact")
    row.epsilon = spec.epsilon;
  row.op_kind = "gadget";
  row.median_ns = percentile(per_op_ns, 0.5);
  row.p99_ns = percentile(per_op_ns, 0.99);
  row.work_units_median = percentile(op_counts, 0.5);
  row.rebuilds = 0;
  if (entries > 0)
    row.coverage = static_cast<double>(matched) / static_cast<double>(entries);
  out.rows.push_back(std::move(row));
  return out;
}

namespace {

std::string fmt_double(double v, int precision) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  std::string s = os.str();
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace

void write_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "schema_version,problem,alphabet,n,m,model,epsilon,op_kind,median_ns,p99_ns,"
         "work_units_median,rebuilds,coverage\n";
  for (const BenchRow& r : rows) {
    out << kCsvSchemaVersion << ',' << r.problem << ',' << r.alphabet << ',' << r.n << ','
        << r.m << ',' << r.model << ',';
    if (r.epsilon) out << fmt_double(*r.epsilon, 4);
    out << ',' << r.op_kind << ',' << fmt_double(r.median_ns, 1) << ','
        << fmt_double(r.p99_ns, 1) << ',' << fmt_double(r.work_units_median, 1) << ','
        << r.rebuilds << ',';
    if (r.coverage) out << fmt_double(*r.coverage, 4);
    out << '\n';
  }
}

std::string problem_name(Problem p) {
  switch (p) {
    case Problem::hd: return "hd";
    case Problem::ip: return "ip";
    case Problem::em: return "em";
    case Problem::hd_mod2: return "hd_mod2";
    case Problem::ip_mod2: return "ip_mod2";
    case Problem::approx_hd: return "approx_hd";
  }
  return "?";
}

std::string model_name(WorkloadModel m) {
  switch (m) {
    case WorkloadModel::pattern: return "pattern";
    case WorkloadModel::text: return "text";
    case WorkloadModel::both: return "both";
  }
  return "?";
}

Problem parse_problem(const std::string& s) {
  if (s == "hd") return Problem::hd;
  if (s == "ip") return Problem::ip;
  if (s == "em") return Problem::em;
  if (s == "hd_mod2") return Problem::hd_mod2;
  if (s == "ip_mod2") return Problem::ip_mod2;
  if (s == "approx_hd") return Problem::approx_hd;
  throw std::invalid_argument(
      "problem: expected one of hd, ip, em, hd_mod2, ip_mod2, approx_hd");
}

WorkloadModel parse_model(const std::string& s) {
  if (s == "pattern") return WorkloadModel::pattern;
  if (s == "text") return WorkloadModel::text;
  if (s == "both") return WorkloadModel::both;
  throw std::invalid_argument("model: expected one of pattern, text, both");
}

LazyMode parse_mode(const std::string& s) {
  if (s == "amortized") return LazyMode::amortized;
  if (s == "deamortized") return LazyMode::deamortized;
  throw std::invalid_argument("mode: expected amortized or deamortized");
}

void check_gadget_name(const std::string& s) {
  static const char* names[] = {"omv_em",          "omv_ip_mod2",
                                "omv_ip_modc",     "omv_ip_text_only",
                                "omv_approx_ip",   "omv_approx_ip_exact",
                                "range_count",     "range_empty"};
  for (const char* n : names)
    if (s == n) return;
  throw std::invalid_argument(
      "gadget: expected one of omv_em, omv_ip_mod2, omv_ip_modc, omv_ip_text_only, "
      "omv_approx_ip, omv_approx_ip_exact, range_count, range_empty");
}

}  // namespace dynstr

#pragma once

// Benchmark harness: seeded workload generation over any of the dynamic
// structures, per-operation timing and work-counter capture, and a stable
// versioned CSV emitter. Gadget runs additionally carry a per-seed
// correctness verdict against the quadratic oracles.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dynstr/lazy.hpp"

namespace dynstr {

inline constexpr const char* kCsvSchemaVersion = "1";

enum class Problem { hd, ip, em, hd_mod2, ip_mod2, approx_hd };

// Which side of the instance receives updates.
enum class WorkloadModel { pattern, text, both };

struct WorkloadSpec {
  Problem problem = Problem::hd;
  uint32_t sigma = 2;  // ordinary symbols; em adds the wildcard on top
  size_t n = 2048;
  size_t m = 1024;
  WorkloadModel model = WorkloadModel::both;
  size_t update_ratio = 1;  // U in U:Q
  size_t query_ratio = 1;   // Q in U:Q
  size_t count = 1000;      // total operations; 0 gives a header-only CSV
  uint64_t seed = 1;
  double epsilon = 0.25;  // approx_hd only
  LazyMode mode = LazyMode::amortized;
};

struct BenchRow {
  std::string problem;
  std::string alphabet;
  size_t n = 0;
  size_t m = 0;
  std::string model;
  std::optional<double> epsilon;  // blank unless approximate
  std::string op_kind;            // "update", "query", or "gadget"
  double median_ns = 0.0;
  double p99_ns = 0.0;
  double work_units_median = 0.0;
  uint64_t rebuilds = 0;
  std::optional<double> coverage;  // blank unless approximate or gadget
};

struct GadgetSpec {
  std::string gadget = "omv_em";  // see parse_gadget for the full list
  size_t r = 8;
  size_t vector_count = 8;  // omv gadgets
  size_t runs = 10;         // seeded runs; seeds are seed, seed+1, ...
  uint64_t seed = 1;
  size_t repetitions = 0;  // randomized omv gadgets; 0 = recommended
  uint32_t modulus = 2;    // omv_ip_modc
  double epsilon = 0.25;   // omv_approx_ip
  uint32_t max_weight = 8;  // grid gadgets
  LazyMode mode = LazyMode::amortized;
};

struct GadgetOutcome {
  std::vector<BenchRow> rows;
  std::vector<bool> verdicts;  // one per seeded run
  bool all_correct() const {
    for (bool v : verdicts)
      if (!v) return false;
    return !verdicts.empty();
  }
};

// Drives one configuration; returns one row per op kind that occurred.
// Identical specs (including seed) produce identical operation and answer
// streams; only the timing columns vary.
std::vector<BenchRow> run_workload(const WorkloadSpec& spec);

GadgetOutcome run_gadget(const GadgetSpec& spec);

// Header (leading schema row) plus one line per row.
void write_csv(std::ostream& out, std::span<const BenchRow> rows);

std::string problem_name(Problem p);
std::string model_name(WorkloadModel m);
Problem parse_problem(const std::string& s);
WorkloadModel parse_model(const std::string& s);
LazyMode parse_mode(const std::string& s);
// Valid names: omv_em, omv_ip_mod2, omv_ip_modc, omv_ip_text_only,
// omv_approx_ip, omv_approx_ip_exact, range_count, range_empty.
void check_gadget_name(const std::string& s);

}  // namespace dynstr

// Benchmark CLI: seeded workloads over the dynamic structures, or reduction
// gadgets with per-seed correctness verdicts. CSV goes to stdout or --out;
// the exit code is 0 only when every verdict passes (workloads carry none).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "dynstr/workload.hpp"

namespace {

void parse_ratio(const std::string& s, size_t& updates, size_t& queries) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
    throw std::invalid_argument("ratio: expected U:Q, e.g. 3:1");
  try {
    updates = std::stoull(s.substr(0, colon));
    queries = std::stoull(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("ratio: expected U:Q with numeric parts");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic string structures: workload and gadget benchmarks"};

  std::string problem = "hd", model = "both", mode = "amortized", ratio = "1:1";
  std::string out_path, gadget;
  size_t n = 2048, m = 1024, ops = 1000, r = 8, vectors = 8, runs = 10, repetitions = 0;
  uint32_t sigma = 2, modulus = 2, max_weight = 8;
  uint64_t seed = 1;
  double epsilon = 0.25;

  app.add_option("--problem", problem, "hd|ip|em|hd_mod2|ip_mod2|approx_hd");
  app.add_option("--n", n, "text length");
  app.add_option("--m", m, "pattern length");
  app.add_option("--sigma", sigma, "ordinary alphabet size");
  app.add_option("--model", model, "updated side: pattern|text|both");
  app.add_option("--ops", ops, "total operations");
  app.add_option("--ratio", ratio, "update:query mix, e.g. 3:1");
  app.add_option("--seed", seed, "workload seed");
  app.add_option("--epsilon", epsilon, "approximation parameter");
  app.add_option("--out", out_path, "CSV file (default stdout)");
  app.add_option("--mode", mode, "rebuild mode: amortized|deamortized");
  app.add_option("--gadget", gadget,
                 "run a reduction gadget instead: omv_em|omv_ip_mod2|omv_ip_modc|"
                 "omv_ip_text_only|omv_approx_ip|omv_approx_ip_exact|range_count|"
                 "range_empty");
  app.add_option("--r", r, "gadget dimension");
  app.add_option("--vectors", vectors, "omv vectors per run");
  app.add_option("--runs", runs, "seeded gadget runs");
  app.add_option("--repetitions", repetitions, "randomized gadget trials (0 = recommended)");
  app.add_option("--modulus", modulus, "residue modulus for omv_ip_modc");
  app.add_option("--max-weight", max_weight, "grid gadget weight bound");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw std::invalid_argument("out: cannot open " + out_path);
    }
    std::ostream& os = out_path.empty() ? std::cout : file;

    if (!gadget.empty()) {
      dynstr::GadgetSpec gs;
      gs.gadget = gadget;
      gs.r = r;
      gs.vector_count = vectors;
      gs.runs = runs;
      gs.seed = seed;
      gs.repetitions = repetitions;
      gs.modulus = modulus;
      gs.epsilon = epsilon;
      gs.max_weight = max_weight;
      gs.mode = dynstr::parse_mode(mode);
      const dynstr::GadgetOutcome outcome = dynstr::run_gadget(gs);
      dynstr::write_csv(os, outcome.rows);
      for (size_t k = 0; k < outcome.verdicts.size(); ++k)
        std::cerr << "gadget " << gadget << " seed " << seed + k << ": "
                  << (outcome.verdicts[k] ? "correct" : "incorrect") << "\n";
      return outcome.all_correct() ? 0 : 1;
    }

    dynstr::WorkloadSpec ws;
    ws.problem = dynstr::parse_problem(problem);
    ws.sigma = sigma;
    ws.n = n;
    ws.m = m;
    ws.model = dynstr::parse_model(model);
    parse_ratio(ratio, ws.update_ratio, ws.query_ratio);
    ws.count = ops;
    ws.seed = seed;
    ws.epsilon = epsilon;
    ws.mode = dynstr::parse_mode(mode);
    const auto rows = dynstr::run_workload(ws);
    dynstr::write_csv(os, rows);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

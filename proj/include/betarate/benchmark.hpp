#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Benchmark harness comparing the closed form against the Monte Carlo
// oracle on randomly generated parameter sets, plus the stable text/JSON
// report schema the CLI emits.
namespace betarate::app {

struct BenchmarkCase {
    std::int64_t alpha_a, beta_a, alpha_b, beta_b;
    double gamma;
    double closed_form;
    double mc_estimate;
    std::int64_t closed_form_nanos;
    std::int64_t mc_nanos;
};

struct BenchmarkReport {
    std::vector<BenchmarkCase> cases;
    double mean_closed_nanos;
    double mean_mc_nanos;
    double speedup_orders_of_magnitude;  // log10(mean_mc / mean_closed)
    double max_abs_diff;
    std::uint64_t seed;
    std::int64_t mc_samples;
};

// Draws case parameters as int(1/uniform) + 1 (five per attempt), keeping
// only attempts with alpha_A <= beta_A and alpha_B <= beta_B; gamma lands
// in {2, 3, ...} under this scheme. Deterministic for a fixed seed. Each
// case times one closed-form evaluation (after a warm-up) and one
// mc_samples-draw oracle run around the computation only.
BenchmarkReport run_benchmark(std::int64_t n_cases, std::int64_t mc_samples,
                              std::uint64_t seed);

// Line-oriented text schema:
//   method=bench
//   seed=<u64>
//   mc_samples=<i64>
//   case <i> <alpha_a> <beta_a> <alpha_b> <beta_b> <gamma> <closed_form>
//        <mc_estimate> <closed_ns> <mc_ns>
//   speedup_orders=<real>
//   max_abs_diff=<real>
// Reals are printed with round-trip precision; emit(parse(emit(r))) is
// byte-identical to emit(r).
std::string emit_report(const BenchmarkReport& report);
BenchmarkReport parse_report(const std::string& text);

// Same fields as one JSON document.
std::string emit_report_json(const BenchmarkReport& report);

}  // namespace betarate::app

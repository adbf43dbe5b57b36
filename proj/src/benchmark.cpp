#include "betarate/benchmark.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "betarate/bayes.hpp"
#include "betarate/rng.hpp"

namespace betarate::app {

namespace {

constexpr std::int64_t kDrawCap = 1000000;
constexpr std::int64_t kParamGuard = 100000;  // bayes summation guard

std::int64_t reciprocal_draw(SplitMix64& rng) {
    double u;
    do {
        u = rng.next_unit();
    } while (u == 0.0);
    const double v = 1.0 / u;
    if (v >= static_cast<double>(kDrawCap) * 1e6)
        return kDrawCap * 1000000;  // far beyond the guard; attempt is rejected
    return static_cast<std::int64_t>(v) + 1;
}

std::int64_t elapsed_nanos(std::chrono::steady_clock::time_point begin,
                           std::chrono::steady_clock::time_point end) {
    const auto ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(end - begin).count();
    return ns < 1 ? 1 : static_cast<std::int64_t>(ns);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void finalize(BenchmarkReport& report) {
    double closed = 0.0, mc = 0.0, max_diff = 0.0;
    for (const BenchmarkCase& c : report.cases) {
        closed += static_cast<double>(c.closed_form_nanos);
        mc += static_cast<double>(c.mc_nanos);
        max_diff = std::max(max_diff, std::fabs(c.closed_form - c.mc_estimate));
    }
    const double n = static_cast<double>(report.cases.size());
    report.mean_closed_nanos = closed / n;
    report.mean_mc_nanos = mc / n;
    report.speedup_orders_of_magnitude =
        std::log10(report.mean_mc_nanos / report.mean_closed_nanos);
    report.max_abs_diff = max_diff;
}

}  // namespace

BenchmarkReport run_benchmark(std::int64_t n_cases, std::int64_t mc_samples,
                              std::uint64_t seed) {
    if (n_cases < 1)
        throw std::domain_error("run_benchmark: n_cases must be >= 1");
    if (mc_samples < 1000)
        throw std::domain_error("run_benchmark: mc_samples must be >= 1e3");

    BenchmarkReport report;
    report.seed = seed;
    report.mc_samples = mc_samples;
    report.cases.reserve(static_cast<std::size_t>(n_cases));

    SplitMix64 param_stream = SplitMix64::substream(seed, 0);
    std::int64_t draws = 0;
    std::uint64_t case_index = 0;
    while (static_cast<std::int64_t>(report.cases.size()) < n_cases) {
        if (draws >= kDrawCap)
            throw std::runtime_error("run_benchmark: parameter generation "
                                     "exceeded the 1e6-draw cap");
        const std::int64_t alpha_a = reciprocal_draw(param_stream);
        const std::int64_t beta_a = reciprocal_draw(param_stream);
        const std::int64_t alpha_b = reciprocal_draw(param_stream);
        const std::int64_t beta_b = reciprocal_draw(param_stream);
        const std::int64_t gamma_int = reciprocal_draw(param_stream);
        draws += 5;
        if (alpha_a > beta_a || alpha_b > beta_b) continue;
        if (alpha_b > kParamGuard || beta_a > kParamGuard) continue;

        const bayes::BetaPosterior a{alpha_a, beta_a};
        const bayes::BetaPosterior b{alpha_b, beta_b};
        const bayes::PayoutRatio ratio{static_cast<double>(gamma_int)};

        // Warm-up evaluation so lazy table construction and cache misses
        // stay out of the measured closed-form time.
        (void)bayes::pr_scaled_rate_greater(a, b, ratio);

        const auto t0 = std::chrono::steady_clock::now();
        const bayes::ComparisonResult closed = bayes::pr_scaled_rate_greater(a, b, ratio);
        const auto t1 = std::chrono::steady_clock::now();

        const std::uint64_t case_seed =
            SplitMix64::substream(seed, case_index + 1).next();
        const auto t2 = std::chrono::steady_clock::now();
        const bayes::ComparisonResult mc =
            bayes::mc_oracle(a, b, ratio, mc_samples, case_seed);
        const auto t3 = std::chrono::steady_clock::now();

        report.cases.push_back(BenchmarkCase{
            alpha_a, beta_a, alpha_b, beta_b, ratio.gamma, closed.probability,
            mc.probability, elapsed_nanos(t0, t1), elapsed_nanos(t2, t3)});
        ++case_index;
    }
    finalize(report);
    return report;
}

std::string emit_report(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "method=bench\n";
    out << "seed=" << report.seed << "\n";
    out << "mc_samples=" << report.mc_samples << "\n";
    std::size_t i = 1;
    for (const BenchmarkCase& c : report.cases) {
        out << "case " << i++ << ' ' << c.alpha_a << ' ' << c.beta_a << ' '
            << c.alpha_b << ' ' << c.beta_b << ' ' << format_double(c.gamma)
            << ' ' << format_double(c.closed_form) << ' '
            << format_double(c.mc_estimate) << ' ' << c.closed_form_nanos
            << ' ' << c.mc_nanos << "\n";
    }
    out << "speedup_orders=" << format_double(report.speedup_orders_of_magnitude)
        << "\n";
    out << "max_abs_diff=" << format_double(report.max_abs_diff) << "\n";
    return out.str();
}

BenchmarkReport parse_report(const std::string& text) {
    BenchmarkReport report{};
    std::istringstream in(text);
    std::string line;
    bool saw_method = false, saw_seed = false, saw_samples = false;
    bool saw_speedup = false, saw_diff = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("case ", 0) == 0) {
            BenchmarkCase c{};
            std::size_t index = 0;
            if (std::sscanf(line.c_str(),
                            "case %zu %" SCNd64 " %" SCNd64 " %" SCNd64
                            " %" SCNd64 " %lf %lf %lf %" SCNd64 " %" SCNd64,
                            &index, &c.alpha_a, &c.beta_a, &c.alpha_b,
                            &c.beta_b, &c.gamma, &c.closed_form,
                            &c.mc_estimate, &c.closed_form_nanos,
                            &c.mc_nanos) != 10)
                throw std::runtime_error("parse_report: malformed case line: " + line);
            if (index != report.cases.size() + 1)
                throw std::runtime_error("parse_report: case index out of order");
            report.cases.push_back(c);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("parse_report: malformed line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "method") {
            if (value != "bench")
                throw std::runtime_error("parse_report: unexpected method: " + value);
            saw_method = true;
        } else if (key == "seed") {
            report.seed = std::stoull(value);
            saw_seed = true;
        } else if (key == "mc_samples") {
            report.mc_samples = std::stoll(value);
            saw_samples = true;
        } else if (key == "speedup_orders") {
            report.speedup_orders_of_magnitude = std::stod(value);
            saw_speedup = true;
        } else if (key == "max_abs_diff") {
            report.max_abs_diff = std::stod(value);
            saw_diff = true;
        } else {
            throw std::runtime_error("parse_report: unknown key: " + key);
        }
    }
    if (!saw_method || !saw_seed || !saw_samples || !saw_speedup || !saw_diff)
        throw std::runtime_error("parse_report: missing header or footer fields");
    if (report.cases.empty())
        throw std::runtime_error("parse_report: report has no cases");
    double closed = 0.0, mc = 0.0;
    for (const BenchmarkCase& c : report.cases) {
        closed += static_cast<double>(c.closed_form_nanos);
        mc += static_cast<double>(c.mc_nanos);
    }
    report.mean_closed_nanos = closed / static_cast<double>(report.cases.size());
    report.mean_mc_nanos = mc / static_cast<double>(report.cases.size());
    return report;
}

std::string emit_report_json(const BenchmarkReport& report) {
    nlohmann::json doc;
    doc["method"] = "bench";
    doc["seed"] = report.seed;
    doc["mc_samples"] = report.mc_samples;
    doc["cases"] = nlohmann::json::array();
    for (const BenchmarkCase& c : report.cases) {
        doc["cases"].push_back({{"alpha_a", c.alpha_a},
                                {"beta_a", c.beta_a},
                                {"alpha_b", c.alpha_b},
                                {"beta_b", c.beta_b},
                                {"gamma", c.gamma},
                                {"closed_form", c.closed_form},
                                {"mc_estimate", c.mc_estimate},
                                {"closed_ns", c.closed_form_nanos},
                                {"mc_ns", c.mc_nanos}});
    }
    doc["speedup_orders"] = report.speedup_orders_of_magnitude;
    doc["max_abs_diff"] = report.max_abs_diff;
    return doc.dump(2) + "\n";
}

}  // namespace betarate::app

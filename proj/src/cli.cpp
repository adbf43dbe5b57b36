#include "betarate/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "betarate/bayes.hpp"
#include "betarate/benchmark.hpp"
#include "betarate/exact_tests.hpp"
#include "betarate/sequential.hpp"

namespace betarate::app {

namespace {

// insertion order becomes the emission order, for text and JSON alike
using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* method_name(bayes::Method m) {
    switch (m) {
        case bayes::Method::ClosedFormRate: return "closed_form_rate";
        case bayes::Method::ClosedFormScaled: return "closed_form_scaled";
        case bayes::Method::DoubleSum: return "double_sum";
        case bayes::Method::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

const char* status_name(sequential::Status s) {
    switch (s) {
        case sequential::Status::Running: return "running";
        case sequential::Status::TreatmentWins: return "treatment_wins";
        case sequential::Status::NoWinner: return "no_winner";
    }
    return "unknown";
}

// key=value lines in text mode, one document in JSON mode; field names are
// identical in both.
void emit_object(std::ostream& out, bool as_json, const json& doc) {
    if (as_json) {
        out << doc.dump(2) << "\n";
        return;
    }
    for (const auto& [key, value] : doc.items()) {
        out << key << '=';
        if (value.is_string())
            out << value.get<std::string>();
        else if (value.is_boolean())
            out << (value.get<bool>() ? 1 : 0);
        else if (value.is_number_float())
            out << format_double(value.get<double>());
        else
            out << value.dump();
        out << "\n";
    }
}

json comparison_json(const bayes::ComparisonResult& r) {
    return json{{"method", method_name(r.method)},
                {"probability", r.probability},
                {"terms", r.terms_evaluated},
                {"cancellation", r.cancellation_flag}};
}

std::vector<double> read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        values.push_back(std::stod(line.substr(begin, end - begin + 1)));
    }
    return values;
}

std::vector<sequential::Outcome> read_outcome_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open outcome file: " + path);
    std::vector<sequential::Outcome> outcomes;
    std::string token;
    while (in >> token) {
        if (token[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (token == "T" || token == "t" || token == "treatment")
            outcomes.push_back(sequential::Outcome::TreatmentSuccess);
        else if (token == "C" || token == "c" || token == "control")
            outcomes.push_back(sequential::Outcome::ControlSuccess);
        else
            throw std::runtime_error("outcome file: unrecognized token '" +
                                     token + "' (expected T or C)");
    }
    return outcomes;
}

struct CountsFlags {
    std::int64_t a_wins = 0, a_losses = 0, b_wins = 0, b_losses = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a-wins", a_wins, "wins observed for process A")->required();
        cmd->add_option("--a-losses", a_losses, "losses observed for process A")->required();
        cmd->add_option("--b-wins", b_wins, "wins observed for process B")->required();
        cmd->add_option("--b-losses", b_losses, "losses observed for process B")->required();
    }

    bayes::BetaPosterior posterior_a() const {
        return bayes::posterior_from_counts(a_wins, a_losses);
    }
    bayes::BetaPosterior posterior_b() const {
        return bayes::posterior_from_counts(b_wins, b_losses);
    }
};

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
    CLI::App app{"betarate: exact payout comparison of beta-binomial rate "
                 "processes, frequentist baselines, and a closed-form vs "
                 "Monte Carlo benchmark"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit results as a single JSON document");

    CountsFlags compare_counts;
    auto* compare = app.add_subcommand(
        "compare", "probability that B's success rate exceeds A's");
    compare_counts.attach(compare);

    CountsFlags scaled_counts;
    double scaled_gamma = 1.0;
    auto* compare_scaled = app.add_subcommand(
        "compare-scaled",
        "probability that B's expected payout exceeds A's at payout ratio gamma");
    scaled_counts.attach(compare_scaled);
    compare_scaled->add_option("--gamma", scaled_gamma, "payout ratio (A over B)")
        ->required();

    CountsFlags mc_counts;
    double mc_gamma = 1.0;
    std::int64_t mc_samples = 1000000;
    std::uint64_t mc_seed = 0;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the scaled comparison");
    mc_counts.attach(mc);
    mc->add_option("--gamma", mc_gamma, "payout ratio (A over B)")->required();
    mc->add_option("--samples", mc_samples, "number of paired posterior draws");
    mc->add_option("--seed", mc_seed, "RNG seed")->envname("BETARATE_SEED");

    CountsFlags fisher_counts;
    std::string fisher_tail = "two-sided";
    auto* fisher = app.add_subcommand("fisher", "Fisher's exact test on the 2x2 table");
    fisher_counts.attach(fisher);
    fisher->add_option("--tail", fisher_tail, "less | greater | two-sided")
        ->check(CLI::IsMember({"less", "greater", "two-sided"}));

    std::string ks_file_a, ks_file_b;
    double ks_alpha = 0.05;
    auto* ks = app.add_subcommand("ks", "two-sample Kolmogorov-Smirnov test");
    ks->add_option("file_a", ks_file_a, "samples for A, one real per line")->required();
    ks->add_option("file_b", ks_file_b, "samples for B, one real per line")->required();
    ks->add_option("--alpha", ks_alpha, "significance level");

    double wilks_h1 = 0.0, wilks_h0 = 0.0;
    std::int64_t wilks_dof = 1;
    auto* wilks = app.add_subcommand("wilks", "likelihood-ratio test via Wilks' theorem");
    wilks->add_option("--ell-h1", wilks_h1, "log-likelihood of the larger model")->required();
    wilks->add_option("--ell-h0", wilks_h0, "log-likelihood of the nested model")->required();
    wilks->add_option("--dof", wilks_dof, "degrees-of-freedom difference")->required();

    std::string seq_file;
    std::int64_t seq_n = 0;
    std::int64_t seq_d_star = 0;
    auto* seq = app.add_subcommand(
        "sequential", "replay an outcome file through the sequential A/B test");
    seq->add_option("outcomes", seq_file, "file of T/C outcomes, one per line")->required();
    seq->add_option("--n", seq_n, "total-successes budget N")->required();
    seq->add_option("--d-star", seq_d_star,
                    "win-margin stopping bound (default ceil(2*sqrt(N)))");

    double design_alpha = 0.0, design_beta = 0.0, design_lift = 0.0;
    auto* design = app.add_subcommand(
        "design", "smallest (N, d*) meeting significance and power targets");
    design->add_option("--alpha", design_alpha, "significance target")->required();
    design->add_option("--beta", design_beta, "type-II error target")->required();
    design->add_option("--lift", design_lift, "relative lift of the treatment")->required();

    std::int64_t bench_cases = 10;
    std::int64_t bench_samples = 10000000;
    std::uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand(
        "bench", "closed form vs Monte Carlo speed/accuracy benchmark");
    bench->add_option("--cases", bench_cases, "number of accepted cases");
    bench->add_option("--samples", bench_samples, "Monte Carlo draws per case");
    bench->add_option("--seed", bench_seed, "RNG seed")->envname("BETARATE_SEED");

    try {
        // CLI11 consumes the vector back to front.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends.
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        err << app.help();
        return 2;
    }

    try {
        if (*compare) {
            const auto r = bayes::pr_rate_greater(compare_counts.posterior_a(),
                                                  compare_counts.posterior_b());
            emit_object(out, as_json, comparison_json(r));
        } else if (*compare_scaled) {
            const auto r = bayes::pr_scaled_rate_greater(
                scaled_counts.posterior_a(), scaled_counts.posterior_b(),
                bayes::PayoutRatio{scaled_gamma});
            json doc = comparison_json(r);
            doc["gamma"] = scaled_gamma;
            emit_object(out, as_json, doc);
        } else if (*mc) {
            const auto r = bayes::mc_oracle(
                mc_counts.posterior_a(), mc_counts.posterior_b(),
                bayes::PayoutRatio{mc_gamma}, mc_samples, mc_seed);
            json doc = comparison_json(r);
            doc["gamma"] = mc_gamma;
            doc["seed"] = mc_seed;
            emit_object(out, as_json, doc);
        } else if (*fisher) {
            const exact_tests::ContingencyTable table{
                fisher_counts.a_wins, fisher_counts.a_losses,
                fisher_counts.b_wins, fisher_counts.b_losses};
            const auto tail =
                fisher_tail == "less" ? exact_tests::FisherTail::SingleLess
                : fisher_tail == "greater"
                    ? exact_tests::FisherTail::SingleGreater
                    : exact_tests::FisherTail::TwoSidedMinLikelihood;
            emit_object(out, as_json,
                        json{{"method", "fisher"},
                             {"tail", fisher_tail},
                             {"point_probability",
                              exact_tests::fisher_table_probability(table)},
                             {"p_value", exact_tests::fisher_exact_p(table, tail)}});
        } else if (*ks) {
            const auto a = read_sample_file(ks_file_a);
            const auto b = read_sample_file(ks_file_b);
            const auto r = exact_tests::ks_two_sample(a, b, ks_alpha);
            emit_object(out, as_json,
                        json{{"method", "ks"},
                             {"alpha", ks_alpha},
                             {"d_stat", r.d_stat},
                             {"threshold", r.threshold},
                             {"reject", r.reject},
                             {"m_a", r.m_a},
                             {"m_b", r.m_b}});
        } else if (*wilks) {
            const auto r = exact_tests::wilks_test(wilks_h1, wilks_h0, wilks_dof);
            emit_object(out, as_json,
                        json{{"method", "wilks"},
                             {"d_stat", r.d_stat},
                             {"p_value", r.p_value},
                             {"dof", wilks_dof}});
        } else if (*seq) {
            const auto config =
                seq->count("--d-star") > 0
                    ? sequential::SequentialConfig{seq_n, seq_d_star}
                    : sequential::SequentialConfig::from_budget(seq_n);
            sequential::SequentialState state(config);
            const auto outcomes = read_outcome_file(seq_file);
            std::int64_t consumed = 0;
            for (const auto outcome : outcomes) {
                if (state.status() != sequential::Status::Running) break;
                state.record(outcome);
                ++consumed;
            }
            emit_object(out, as_json,
                        json{{"method", "sequential"},
                             {"status", status_name(state.status())},
                             {"t_wins", state.t_wins()},
                             {"c_wins", state.c_wins()},
                             {"n_tot", state.total()},
                             {"d", state.margin()},
                             {"n_max", config.n_max},
                             {"d_star", config.d_star},
                             {"consumed", consumed}});
        } else if (*design) {
            const auto config = sequential::design_sequential(
                design_alpha, design_beta, sequential::Lift{design_lift});
            emit_object(out, as_json,
                        json{{"method", "design"},
                             {"alpha", design_alpha},
                             {"beta", design_beta},
                             {"lift", design_lift},
                             {"n_max", config.n_max},
                             {"d_star", config.d_star}});
        } else if (*bench) {
            const auto report = run_benchmark(bench_cases, bench_samples, bench_seed);
            out << (as_json ? emit_report_json(report) : emit_report(report));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace betarate::app

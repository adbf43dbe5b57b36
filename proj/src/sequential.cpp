#include "betarate/sequential.hpp"

#include <cmath>
#include <stdexcept>

#include "betarate/errors.hpp"
#include "betarate/specfun.hpp"

namespace betarate::sequential {

namespace {

constexpr std::int64_t kDesignCap = 1000000;

void validate_config(const SequentialConfig& c) {
    if (c.n_max < 1)
        throw std::domain_error("sequential config: N must be >= 1");
    if (c.d_star < 1)
        throw std::domain_error("sequential config: d* must be >= 1");
    if (c.d_star > c.n_max)
        throw std::domain_error("sequential config: d* must not exceed N "
                                "(margin unreachable within budget)");
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

double prefactor_log(std::int64_t d, std::int64_t j, BoundPrefactor prefactor) {
    if (prefactor == BoundPrefactor::WinsOverSteps)
        return std::log(static_cast<double>(d + j) / (2.0 * static_cast<double>(j)));
    return std::log(static_cast<double>(d) / static_cast<double>(j));
}

// ln of the first-passage term at step j for a walk with up-probability
// p = (1+delta)/(2+delta): pref * C(j, (d+j)/2) p^{(d+j)/2} q^{(j-d)/2}.
// delta == 0 gives the symmetric 2^-j form.
double walk_term_log(std::int64_t d, std::int64_t j, double delta,
                     BoundPrefactor prefactor) {
    const double dj = static_cast<double>(j);
    const double up_steps = static_cast<double>(d + j) / 2.0;
    return prefactor_log(d, j, prefactor) +
           specfun::ln_binomial(j, (d + j) / 2) - dj * std::log(2.0 + delta) +
           up_steps * std::log1p(delta);
}

double first_passage_sum(std::int64_t n_max, std::int64_t d_star, double delta,
                         BoundPrefactor prefactor) {
    if (n_max < 1) throw std::domain_error("bounds: N must be >= 1");
    if (d_star < 1) throw std::domain_error("bounds: d* must be >= 1");
    double sum = 0.0, comp = 0.0;
    for (std::int64_t j = d_star; j <= n_max; j += 2) {
        const double y = std::exp(walk_term_log(d_star, j, delta, prefactor)) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return clamp01(sum);
}

}  // namespace

SequentialConfig SequentialConfig::from_budget(std::int64_t n_max) {
    if (n_max < 1)
        throw std::domain_error("sequential config: N must be >= 1");
    // Smallest integer d with d^2 >= 4N, computed without trusting the
    // floating-point ceil at perfect squares.
    std::int64_t d = static_cast<std::int64_t>(
        std::ceil(2.0 * std::sqrt(static_cast<double>(n_max))));
    while (d > 1 && (d - 1) * (d - 1) >= 4 * n_max) --d;
    while (d * d < 4 * n_max) ++d;
    SequentialConfig config{n_max, d};
    validate_config(config);
    return config;
}

SequentialState::SequentialState(const SequentialConfig& config)
    : config_(config) {
    validate_config(config_);
}

void SequentialState::record(Outcome outcome) {
    if (status_ != Status::Running)
        throw std::logic_error("sequential state: cannot record on a "
                               "stopped test");
    if (outcome == Outcome::TreatmentSuccess)
        ++t_wins_;
    else
        ++c_wins_;
    if (margin() >= config_.d_star)
        status_ = Status::TreatmentWins;
    else if (total() >= config_.n_max)
        status_ = Status::NoWinner;
}

double significance_bound(std::int64_t n_max, std::int64_t d_star,
                          BoundPrefactor prefactor) {
    return first_passage_sum(n_max, d_star, 0.0, prefactor);
}

double power_bound(std::int64_t n_max, std::int64_t d_star, Lift lift,
                   BoundPrefactor prefactor) {
    if (!(lift.delta >= 0.0))
        throw std::domain_error("power_bound: lift must be >= 0");
    return first_passage_sum(n_max, d_star, lift.delta, prefactor);
}

SequentialConfig design_sequential(double alpha_target, double beta_target,
                                   Lift lift, BoundPrefactor prefactor) {
    if (!(alpha_target > 0.0 && alpha_target < 1.0))
        throw std::domain_error("design_sequential: alpha target must be in (0, 1)");
    if (!(beta_target > 0.0 && beta_target < 1.0))
        throw std::domain_error("design_sequential: beta target must be in (0, 1)");
    if (!(lift.delta > 0.0))
        throw std::domain_error("design_sequential: lift must be > 0");

    const double power_target = 1.0 - beta_target;

    // Power is nonincreasing in d* and nondecreasing in N, significance
    // nondecreasing in N: so for each d* the cheapest budget is the first
    // power crossing, a d* infeasible there is infeasible at every N, and
    // scanning d* ascending reaches the lexicographic (N, d*) minimum. Once
    // the power target is out of reach below the cap for some d*, it stays
    // out of reach for every larger d*.
    for (std::int64_t d = 1; d <= kDesignCap; ++d) {
        double sig = 0.0, sig_comp = 0.0;
        double pow_sum = 0.0, pow_comp = 0.0;
        bool crossed = false;
        for (std::int64_t j = d; j <= kDesignCap; j += 2) {
            {
                const double y = std::exp(walk_term_log(d, j, 0.0, prefactor)) - sig_comp;
                const double t = sig + y;
                sig_comp = (t - sig) - y;
                sig = t;
            }
            {
                const double y =
                    std::exp(walk_term_log(d, j, lift.delta, prefactor)) - pow_comp;
                const double t = pow_sum + y;
                pow_comp = (t - pow_sum) - y;
                pow_sum = t;
            }
            if (clamp01(pow_sum) >= power_target) {
                if (clamp01(sig) <= alpha_target) return SequentialConfig{j, d};
                crossed = true;
                break;
            }
        }
        if (!crossed)
            throw infeasible_error("design_sequential: no feasible (N, d*) "
                                   "with N <= 1e6 for the requested targets");
    }
    throw infeasible_error("design_sequential: no feasible (N, d*) with "
                           "N <= 1e6 for the requested targets");
}

}  // namespace betarate::sequential

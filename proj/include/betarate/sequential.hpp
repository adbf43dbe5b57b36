#pragma once

#include <cstdint>

// Online frequentist baseline: the gambler's-ruin sequential A/B state
// machine, first-passage significance/power bounds for the success-margin
// random walk, and the (alpha, beta, lift) -> (N, d*) design search.
namespace betarate::sequential {

struct SequentialConfig {
    std::int64_t n_max;   // total-successes budget N
    std::int64_t d_star;  // win-margin stopping bound

    // Default margin binding d* = ceil(2*sqrt(N)); ceiling keeps the
    // integer margin conservative for significance.
    static SequentialConfig from_budget(std::int64_t n_max);
};

enum class Outcome { TreatmentSuccess, ControlSuccess };

enum class Status { Running, TreatmentWins, NoWinner };

// Single-writer state machine. The margin check runs before the budget
// check when one outcome triggers both, so a winner is declared whenever
// the margin is reached on the final success.
class SequentialState {
public:
    explicit SequentialState(const SequentialConfig& config);

    void record(Outcome outcome);

    std::int64_t t_wins() const { return t_wins_; }
    std::int64_t c_wins() const { return c_wins_; }
    std::int64_t margin() const { return t_wins_ - c_wins_; }
    std::int64_t total() const { return t_wins_ + c_wins_; }
    Status status() const { return status_; }
    const SequentialConfig& config() const { return config_; }

private:
    SequentialConfig config_;
    std::int64_t t_wins_ = 0;
    std::int64_t c_wins_ = 0;
    Status status_ = Status::Running;
};

// Relative conversion advantage of treatment over control; the walk steps
// up with probability (1 + delta) / (2 + delta).
struct Lift {
    double delta;
};

// First-passage prefactor. The gambler's-ruin mass for margin d at step j
// is (d/j) C(j, (d+j)/2) 2^-j. WinsOverSteps substitutes the winner's
// success count for the margin, ((d+j)/2)/j; it is kept selectable for
// comparison but fails both the walk-simulation oracle and the (170, 26)
// operating point.
enum class BoundPrefactor { MarginOverSteps, WinsOverSteps };

// Null probability that the symmetric walk hits +d_star within the budget.
// Terms exist only for j >= d_star with (d_star + j) even (no lattice path
// otherwise); an unreachable margin yields 0.
double significance_bound(std::int64_t n_max, std::int64_t d_star,
                          BoundPrefactor prefactor = BoundPrefactor::MarginOverSteps);

// Probability of declaring the treatment winner within the budget under
// the given lift; delta = 0 reduces to significance_bound.
double power_bound(std::int64_t n_max, std::int64_t d_star, Lift lift,
                   BoundPrefactor prefactor = BoundPrefactor::MarginOverSteps);

// Lexicographically smallest (N, then d*) with significance_bound <= alpha
// and 1 - power_bound <= beta. Throws infeasible_error past N = 1e6.
SequentialConfig design_sequential(double alpha_target, double beta_target,
                                   Lift lift,
                                   BoundPrefactor prefactor = BoundPrefactor::MarginOverSteps);

}  // namespace betarate::sequential

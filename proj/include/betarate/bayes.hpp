#pragma once

#include <cstdint>

// Exact comparison of two beta-binomial rate processes: posterior
// construction from win/loss counts, the closed-form rate and payout-scaled
// comparisons, a double-sum verification backend, and a deterministic
// Monte Carlo oracle.
namespace betarate::bayes {

// Integer posterior of a rate: alpha = wins + 1, beta = losses + 1. The
// closed forms need finite sums and an exact binomial expansion, so the
// parameters are integral by type; the counts-plus-one construction
// guarantees it.
struct BetaPosterior {
    std::int64_t alpha;
    std::int64_t beta;
};

BetaPosterior posterior_from_counts(std::int64_t wins, std::int64_t losses);

// Ratio of per-win payout values (A's payout over B's): phi_B > gamma*phi_A
// means B's expected payout exceeds A's. The closed form is derived for
// gamma > 1; gamma == 1 delegates to the plain rate comparison and
// gamma < 1 is resolved by complement-and-swap.
struct PayoutRatio {
    double gamma;
};

enum class Method { ClosedFormRate, ClosedFormScaled, DoubleSum, MonteCarlo };

struct ComparisonResult {
    double probability;            // in [0, 1]
    Method method;
    std::int64_t terms_evaluated;  // summands (or samples) actually evaluated
    // True when the alternating hypergeometric evaluation of some term lost
    // more than 12 leading digits. ClosedFormScaled re-evaluates such terms
    // through a cancellation-free transformed series, so the probability
    // remains accurate; the flag records that the series as literally
    // written was ill-conditioned there.
    bool cancellation_flag;
};

enum class Hyp2f1Backend { Series, Jacobi };

enum class Decision { PreferB, PreferA, Undecided };

// Pr(phi_B > phi_A): alpha_B positive summands, each formed as exp(S) with
// every log-beta term inside the exponent.
ComparisonResult pr_rate_greater(const BetaPosterior& a, const BetaPosterior& b);

// Pr(phi_B > gamma*phi_A) by the single-sum hypergeometric form. The
// F-term uses the series backend by default; the Jacobi backend is an
// optional cross-check valid for beta_b >= beta_a >= 2.
ComparisonResult pr_scaled_rate_greater(const BetaPosterior& a,
                                        const BetaPosterior& b,
                                        const PayoutRatio& ratio,
                                        Hyp2f1Backend backend = Hyp2f1Backend::Series);

// Pre-hypergeometric double sum over (k, i); independent verification
// backend only, so gamma must be > 1 (no dispatch here).
ComparisonResult pr_scaled_double_sum(const BetaPosterior& a,
                                      const BetaPosterior& b,
                                      const PayoutRatio& ratio);

// Mean over n paired posterior draws of [sample_B > gamma * sample_A].
// Bit-deterministic in (inputs, seed, n_samples) regardless of thread
// count: every sample index has its own counter-keyed substream.
ComparisonResult mc_oracle(const BetaPosterior& a, const BetaPosterior& b,
                           const PayoutRatio& ratio, std::int64_t n_samples,
                           std::uint64_t seed);

// PreferB if Pr(phi_B > gamma*phi_A) >= threshold, PreferA if it is
// <= 1 - threshold, Undecided otherwise. threshold must lie in (0.5, 1).
Decision decide(const BetaPosterior& a, const BetaPosterior& b,
                const PayoutRatio& ratio, double threshold);

}  // namespace betarate::bayes

#include "betarate/bayes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "betarate/errors.hpp"
#include "betarate/logreal.hpp"
#include "betarate/rng.hpp"
#include "betarate/specfun.hpp"

namespace betarate::bayes {

namespace {

using specfun::ln_beta;
using specfun::ln_binomial;

// O(alpha_B) / O(alpha_B * beta_A) summation costs; reject unbounded work.
constexpr std::int64_t kMaxSumLength = 100000;

constexpr double kCancellationDigits = 12.0;

// Past this loss the alternating F-term is re-evaluated through the
// positive-term Pfaff form.
constexpr double kRescueDigits = 3.0;

void validate(const BetaPosterior& p, const char* name) {
    if (p.alpha < 1 || p.beta < 1)
        throw std::domain_error(std::string("posterior ") + name +
                                ": parameters must be integers >= 1 "
                                "(wins + 1, losses + 1)");
}

void validate_ratio(const PayoutRatio& r) {
    if (!std::isfinite(r.gamma) || !(r.gamma > 0.0))
        throw std::domain_error("payout ratio gamma must be finite and > 0");
}

void check_sum_guard(std::int64_t alpha_b, std::int64_t beta_a) {
    if (alpha_b > kMaxSumLength)
        throw size_error("comparison rejected: alpha_B exceeds the 1e5 "
                         "summation guard");
    if (beta_a > kMaxSumLength)
        throw size_error("comparison rejected: beta_A exceeds the 1e5 "
                         "summation guard");
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Marsaglia-Tsang gamma sampler over one substream; valid for shape >= 1.
class PosteriorSampler {
public:
    explicit PosteriorSampler(SplitMix64 rng) : rng_(rng) {}

    double beta(double alpha, double beta) {
        const double x = gamma(alpha);
        const double y = gamma(beta);
        return x / (x + y);
    }

private:
    double gamma(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = rng_.next_unit_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(rng_.next_unit_pos()));
        const double theta = 6.283185307179586476925287 * rng_.next_unit();
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::int64_t count_exceedances(const BetaPosterior& a, const BetaPosterior& b,
                               double gamma, std::uint64_t seed,
                               std::int64_t begin, std::int64_t end) {
    const double aa = static_cast<double>(a.alpha);
    const double ab = static_cast<double>(a.beta);
    const double ba = static_cast<double>(b.alpha);
    const double bb = static_cast<double>(b.beta);
    std::int64_t hits = 0;
    for (std::int64_t i = begin; i < end; ++i) {
        PosteriorSampler sampler(
            SplitMix64::substream(seed, static_cast<std::uint64_t>(i)));
        const double sample_a = sampler.beta(aa, ab);
        const double sample_b = sampler.beta(ba, bb);
        if (sample_b > gamma * sample_a) ++hits;
    }
    return hits;
}

}  // namespace

BetaPosterior posterior_from_counts(std::int64_t wins, std::int64_t losses) {
    if (wins < 0 || losses < 0)
        throw std::domain_error("posterior_from_counts: counts must be >= 0");
    return BetaPosterior{wins + 1, losses + 1};
}

ComparisonResult pr_rate_greater(const BetaPosterior& a, const BetaPosterior& b) {
    validate(a, "A");
    validate(b, "B");
    check_sum_guard(b.alpha, 1);

    const double alpha_a = static_cast<double>(a.alpha);
    const double beta_a = static_cast<double>(a.beta);
    const double beta_b = static_cast<double>(b.beta);
    const double ln_beta_a = ln_beta(alpha_a, beta_a);

    KahanSum sum;
    for (std::int64_t i = 1; i <= b.alpha; ++i) {
        const double di = static_cast<double>(i);
        const double log_term = ln_beta(alpha_a - 1.0 + di, beta_b + beta_a) -
                                ln_beta(di, beta_b) -
                                std::log(beta_b - 1.0 + di) - ln_beta_a;
        sum.add(std::exp(log_term));
    }
    return {clamp01(sum.sum), Method::ClosedFormRate, b.alpha, false};
}

ComparisonResult pr_scaled_rate_greater(const BetaPosterior& a,
                                        const BetaPosterior& b,
                                        const PayoutRatio& ratio,
                                        Hyp2f1Backend backend) {
    validate(a, "A");
    validate(b, "B");
    validate_ratio(ratio);

    if (ratio.gamma == 1.0) return pr_rate_greater(a, b);
    if (ratio.gamma < 1.0) {
        // Ties have probability zero under the continuous posteriors, so
        // Pr(B > gamma*A) = 1 - Pr(A > (1/gamma)*B).
        ComparisonResult inner =
            pr_scaled_rate_greater(b, a, PayoutRatio{1.0 / ratio.gamma}, backend);
        inner.probability = clamp01(1.0 - inner.probability);
        return inner;
    }

    check_sum_guard(b.alpha, a.beta);

    const double alpha_a = static_cast<double>(a.alpha);
    const double beta_a = static_cast<double>(a.beta);
    const double beta_b = static_cast<double>(b.beta);
    const double z = 1.0 / ratio.gamma;
    const double c_term = -alpha_a * std::log(ratio.gamma) - ln_beta(alpha_a, beta_a);

    bool cancellation = false;
    KahanSum sum;
    for (std::int64_t i = 0; i < b.alpha; ++i) {
        const double di = static_cast<double>(i);
        const double p = alpha_a + di;
        const double s_term = ln_beta(p, beta_b + 1.0) -
                              ln_beta(1.0 + di, beta_b) - std::log(beta_b + di);
        double digits_lost = 0.0;
        LogReal h;
        if (backend == Hyp2f1Backend::Jacobi) {
            h = specfun::hyp2f1_via_jacobi(a.beta, p, b.beta, z);
        } else {
            h = specfun::hyp2f1_neg_int_series(a.beta - 1, p, p + beta_b + 1.0,
                                               z, digits_lost);
            if (digits_lost > kRescueDigits) {
                // The alternating form cancels too hard near gamma -> 1 with
                // large beta_A; the Pfaff form of the same terminating series
                // is positive-term here (c - b = beta_B + 1) and loses
                // nothing. The flag still reports the alternating route's
                // conditioning.
                h = specfun::hyp2f1_neg_int_pfaff(a.beta - 1, p,
                                                  p + beta_b + 1.0, z);
            }
        }
        if (digits_lost > kCancellationDigits) cancellation = true;
        if (h.sign <= 0) continue;  // underflow of an exactly-zero term
        sum.add(std::exp(c_term + s_term + h.log_magnitude));
    }
    return {clamp01(sum.sum), Method::ClosedFormScaled, b.alpha, cancellation};
}

ComparisonResult pr_scaled_double_sum(const BetaPosterior& a,
                                      const BetaPosterior& b,
                                      const PayoutRatio& ratio) {
    validate(a, "A");
    validate(b, "B");
    validate_ratio(ratio);
    if (!(ratio.gamma > 1.0))
        throw std::domain_error("pr_scaled_double_sum: verification backend "
                                "requires gamma > 1");
    check_sum_guard(b.alpha, a.beta);

    const double alpha_a = static_cast<double>(a.alpha);
    const double beta_a = static_cast<double>(a.beta);
    const double beta_b = static_cast<double>(b.beta);
    const double log_gamma = std::log(ratio.gamma);
    const double ln_beta_a = ln_beta(alpha_a, beta_a);

    SignedLogSum acc;
    for (std::int64_t k = 0; k < a.beta; ++k) {
        const double dk = static_cast<double>(k);
        const double base = ln_binomial(a.beta - 1, k) -
                            (dk + alpha_a) * log_gamma - ln_beta_a;
        const int sign = (k % 2 == 0) ? +1 : -1;
        for (std::int64_t i = 0; i < b.alpha; ++i) {
            const double di = static_cast<double>(i);
            const double log_term = base +
                                    ln_beta(alpha_a + dk + di, beta_b + 1.0) -
                                    std::log(beta_b + di) -
                                    ln_beta(1.0 + di, beta_b);
            acc.add_log(log_term, sign);
        }
    }
    const bool cancellation = acc.cancellation_digits() > kCancellationDigits;
    return {clamp01(acc.total().value()), Method::DoubleSum,
            a.beta * b.alpha, cancellation};
}

ComparisonResult mc_oracle(const BetaPosterior& a, const BetaPosterior& b,
                           const PayoutRatio& ratio, std::int64_t n_samples,
                           std::uint64_t seed) {
    validate(a, "A");
    validate(b, "B");
    validate_ratio(ratio);
    if (n_samples < 1)
        throw std::domain_error("mc_oracle: n_samples must be >= 1");

    const unsigned hw = std::thread::hardware_concurrency();
    const std::int64_t max_threads = hw == 0 ? 1 : static_cast<std::int64_t>(hw);
    const std::int64_t n_threads =
        std::min<std::int64_t>(max_threads, (n_samples + 99999) / 100000);

    std::int64_t hits = 0;
    if (n_threads <= 1) {
        hits = count_exceedances(a, b, ratio.gamma, seed, 0, n_samples);
    } else {
        // Exceedance counts are integers, so partitioning cannot change the
        // total and the result stays bit-identical across thread counts.
        std::vector<std::int64_t> partial(static_cast<std::size_t>(n_threads), 0);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_threads));
        const std::int64_t chunk = (n_samples + n_threads - 1) / n_threads;
        for (std::int64_t t = 0; t < n_threads; ++t) {
            const std::int64_t begin = t * chunk;
            const std::int64_t end = std::min(n_samples, begin + chunk);
            workers.emplace_back([&, t, begin, end] {
                partial[static_cast<std::size_t>(t)] =
                    count_exceedances(a, b, ratio.gamma, seed, begin, end);
            });
        }
        for (auto& w : workers) w.join();
        for (const std::int64_t h : partial) hits += h;
    }
    return {static_cast<double>(hits) / static_cast<double>(n_samples),
            Method::MonteCarlo, n_samples, false};
}

Decision decide(const BetaPosterior& a, const BetaPosterior& b,
                const PayoutRatio& ratio, double threshold) {
    if (!(threshold > 0.5 && threshold < 1.0))
        throw std::domain_error("decide: threshold must lie in (0.5, 1)");
    const double p = pr_scaled_rate_greater(a, b, ratio).probability;
    if (p >= threshold) return Decision::PreferB;
    if (p <= 1.0 - threshold) return Decision::PreferA;
    return Decision::Undecided;
}

}  // namespace betarate::bayes

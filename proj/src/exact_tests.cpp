#include "betarate/exact_tests.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "betarate/specfun.hpp"

namespace betarate::exact_tests {

namespace {

using specfun::ln_binomial;
using specfun::ln_gamma;

void validate(const ContingencyTable& t) {
    if (t.wins_a < 0 || t.losses_a < 0 || t.wins_b < 0 || t.losses_b < 0)
        throw std::domain_error("contingency table: counts must be >= 0");
    if (t.total() < 1)
        throw std::domain_error("contingency table: all cells are zero");
}

double log_point_probability(std::int64_t n_tot, std::int64_t o_tot,
                             std::int64_t m_a, std::int64_t wins_a) {
    const std::int64_t losses_a = m_a - wins_a;
    return ln_binomial(n_tot, wins_a) + ln_binomial(o_tot, losses_a) -
           ln_binomial(n_tot + o_tot, m_a);
}

}  // namespace

double fisher_table_probability(const ContingencyTable& t) {
    validate(t);
    return std::exp(log_point_probability(t.wins_total(), t.losses_total(),
                                          t.trials_a(), t.wins_a));
}

double fisher_exact_p(const ContingencyTable& t, FisherTail tail) {
    validate(t);
    const std::int64_t n_tot = t.wins_total();
    const std::int64_t o_tot = t.losses_total();
    const std::int64_t m_a = t.trials_a();

    // All tables attainable under the fixed margins, parameterized by the
    // wins of asset A.
    const std::int64_t lo = std::max<std::int64_t>(0, m_a - o_tot);
    const std::int64_t hi = std::min(n_tot, m_a);

    const double log_p_obs = log_point_probability(n_tot, o_tot, m_a, t.wins_a);
    // Relative slack so tables tied with the observed one (equal up to
    // ln-gamma rounding) land inside the two-sided sum.
    const double two_sided_cut = log_p_obs + 1e-10;

    double p = 0.0, comp = 0.0;
    for (std::int64_t wa = lo; wa <= hi; ++wa) {
        const std::int64_t wb = n_tot - wa;
        const double log_pt = log_point_probability(n_tot, o_tot, m_a, wa);
        bool in_tail = false;
        switch (tail) {
            case FisherTail::SingleLess:
                in_tail = wb <= t.wins_b;
                break;
            case FisherTail::SingleGreater:
                in_tail = wb >= t.wins_b;
                break;
            case FisherTail::TwoSidedMinLikelihood:
                in_tail = log_pt <= two_sided_cut;
                break;
        }
        if (!in_tail) continue;
        const double y = std::exp(log_pt) - comp;
        const double s = p + y;
        comp = (s - p) - y;
        p = s;
    }
    return p > 1.0 ? 1.0 : p;
}

double log_likelihood(const ContingencyTable& t, LikelihoodConvention convention) {
    validate(t);
    if (convention == LikelihoodConvention::BetaOfCounts) {
        if (t.wins_a < 1 || t.losses_a < 1 || t.wins_b < 1 || t.losses_b < 1)
            throw std::domain_error(
                "log_likelihood: the beta-of-counts convention needs every "
                "cell >= 1; use LikelihoodConvention::FactorialCounts "
                "(Gamma(count + 1)) for tables with zero cells");
        return specfun::ln_beta(static_cast<double>(t.wins_total()),
                                static_cast<double>(t.losses_total())) -
               specfun::ln_beta(static_cast<double>(t.wins_a),
                                static_cast<double>(t.losses_a)) -
               specfun::ln_beta(static_cast<double>(t.wins_b),
                                static_cast<double>(t.losses_b));
    }
    // Factorial-consistent form: the log of the hypergeometric point
    // probability itself.
    const auto lf = [](std::int64_t n) {
        return ln_gamma(static_cast<double>(n) + 1.0);
    };
    return lf(t.wins_total()) + lf(t.losses_total()) + lf(t.trials_a()) +
           lf(t.trials_b()) - lf(t.total()) - lf(t.wins_a) - lf(t.wins_b) -
           lf(t.losses_a) - lf(t.losses_b);
}

WilksResult wilks_test(double ell_h1, double ell_h0, std::int64_t dof_delta) {
    if (dof_delta < 1)
        throw std::domain_error("wilks_test: dof_delta must be >= 1");
    if (ell_h1 < ell_h0)
        throw std::domain_error("wilks_test: nested models require "
                                "ell_h1 >= ell_h0");
    const double d = 2.0 * (ell_h1 - ell_h0);
    const double p = specfun::reg_inc_gamma_upper(
        static_cast<double>(dof_delta) / 2.0, d / 2.0);
    return {d, p};
}

KsResult ks_two_sample(std::span<const double> samples_a,
                       std::span<const double> samples_b, double alpha) {
    if (samples_a.empty() || samples_b.empty())
        throw std::domain_error("ks_two_sample: sample lists must be nonempty");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("ks_two_sample: alpha must be in (0, 1)");

    std::vector<double> a(samples_a.begin(), samples_a.end());
    std::vector<double> b(samples_b.begin(), samples_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    // Walk the pooled order statistics; at each distinct value advance both
    // ECDFs past every tied sample before measuring the gap, so ties are
    // evaluated at identical points.
    std::size_t ia = 0, ib = 0;
    double d_stat = 0.0;
    while (ia < a.size() || ib < b.size()) {
        const double x = (ib == b.size() || (ia < a.size() && a[ia] <= b[ib]))
                             ? a[ia]
                             : b[ib];
        while (ia < a.size() && a[ia] == x) ++ia;
        while (ib < b.size() && b[ib] == x) ++ib;
        const double gap =
            std::fabs(static_cast<double>(ib) / nb - static_cast<double>(ia) / na);
        d_stat = std::max(d_stat, gap);
    }

    const double c_alpha = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double threshold = c_alpha * std::sqrt((na + nb) / (na * nb));
    return {d_stat, threshold, d_stat > threshold,
            static_cast<std::int64_t>(a.size()),
            static_cast<std::int64_t>(b.size())};
}

}  // namespace betarate::exact_tests

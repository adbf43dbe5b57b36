#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "betarate/rng.hpp"

namespace oracles {

namespace {

// QUADPACK dqk15 abscissae and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double kronrod;
    double error;
};

template <typename F>
GkEstimate gk15(const F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double f_center = f(center);
    double kronrod = kKronrodWeights[7] * f_center;
    double gauss = kGaussWeights[3] * f_center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::fabs(kronrod - gauss)};
}

template <typename F>
double adaptive_gk(const F& f, double lo, double hi, double abs_tol, int depth) {
    const GkEstimate est = gk15(f, lo, hi);
    // The noise floor keeps the recursion from chasing tolerances below
    // machine precision on deep subintervals.
    const double floor_tol = 25.0 * 2.2e-16 * std::fabs(est.kronrod);
    if (est.error <= std::max(abs_tol, floor_tol) || depth >= 48)
        return est.kronrod;
    const double mid = 0.5 * (lo + hi);
    return adaptive_gk(f, lo, mid, 0.5 * abs_tol, depth + 1) +
           adaptive_gk(f, mid, hi, 0.5 * abs_tol, depth + 1);
}

double beta_log_norm(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_pdf(double phi, std::int64_t alpha, std::int64_t beta,
                double log_norm) {
    double lp = -log_norm;
    if (alpha != 1) lp += (static_cast<double>(alpha) - 1.0) * std::log(phi);
    if (beta != 1) lp += (static_cast<double>(beta) - 1.0) * std::log1p(-phi);
    return std::exp(lp);
}

// Upper Beta tail 1 - I_y(alpha, beta) for integer parameters via the
// binomial CDF identity: sum_{j=0}^{alpha-1} C(n, j) y^j (1-y)^{n-j} with
// n = alpha + beta - 1. All terms positive.
class BinomialTail {
public:
    BinomialTail(std::int64_t alpha, std::int64_t beta)
        : alpha_(static_cast<int>(alpha)),
          n_(static_cast<int>(alpha + beta - 1)),
          binom_(pascal_row(n_)) {}

    double operator()(double y) const {
        if (y <= 0.0) return 1.0;
        if (y >= 1.0) return 0.0;
        const long double one_minus_y = 1.0L - static_cast<long double>(y);
        long double pow_y = 1.0L;
        long double pow_1my = 1.0L;
        for (int k = 0; k < n_; ++k) pow_1my *= one_minus_y;
        long double sum = 0.0L;
        for (int j = 0; j < alpha_; ++j) {
            sum += binom_[static_cast<std::size_t>(j)] * pow_y * pow_1my;
            pow_y *= y;
            pow_1my /= one_minus_y;
        }
        const double v = static_cast<double>(sum);
        return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }

private:
    int alpha_;
    int n_;
    std::vector<long double> binom_;
};

}  // namespace

double adaptive_quad(const std::function<double(double)>& f, double lo,
                     double hi, double abs_tol) {
    if (!(hi > lo)) return 0.0;
    return adaptive_gk(f, lo, hi, abs_tol, 0);
}

double ibeta_cf(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("ibeta_cf: x out of range");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // Numerical Recipes betacf with the symmetry switch at the mean.
    const auto cf = [](double aa, double bb, double xx) {
        const double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
        const double tiny = 1e-300;
        double c = 1.0, d = 1.0 - qab * xx / qap;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 500; ++m) {
            const double m2 = 2.0 * m;
            double an = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + an * d;
            if (std::fabs(d) < tiny) d = tiny;
            c = 1.0 + an / c;
            if (std::fabs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            an = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + an * d;
            if (std::fabs(d) < tiny) d = tiny;
            c = 1.0 + an / c;
            if (std::fabs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double delta = d * c;
            h *= delta;
            if (std::fabs(delta - 1.0) < 1e-16) break;
        }
        return h;
    };
    const double log_front = a * std::log(x) + b * std::log1p(-x) -
                             beta_log_norm(a, b);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(log_front) * cf(a, b, x) / a;
    return 1.0 - std::exp(log_front) * cf(b, a, 1.0 - x) / b;
}

std::vector<long double> pascal_row(int n) {
    std::vector<long double> row(static_cast<std::size_t>(n) + 1, 1.0L);
    for (int i = 1; i <= n; ++i)
        for (int j = i - 1; j >= 1; --j)
            row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    return row;
}

double pr_scaled_quad(std::int64_t alpha_a, std::int64_t beta_a,
                      std::int64_t alpha_b, std::int64_t beta_b, double gamma,
                      double abs_tol) {
    const double hi = gamma > 1.0 ? 1.0 / gamma : 1.0;
    const double log_norm = beta_log_norm(static_cast<double>(alpha_a),
                                          static_cast<double>(beta_a));
    const BinomialTail tail(alpha_b, beta_b);
    const auto integrand = [&](double phi) {
        return beta_pdf(phi, alpha_a, beta_a, log_norm) * tail(gamma * phi);
    };
    return adaptive_gk(integrand, 0.0, hi, abs_tol, 0);
}

double pr_scaled_quad_nested(std::int64_t alpha_a, std::int64_t beta_a,
                             std::int64_t alpha_b, std::int64_t beta_b,
                             double gamma, double abs_tol) {
    const double hi = gamma > 1.0 ? 1.0 / gamma : 1.0;
    const double log_norm_a = beta_log_norm(static_cast<double>(alpha_a),
                                            static_cast<double>(beta_a));
    const double log_norm_b = beta_log_norm(static_cast<double>(alpha_b),
                                            static_cast<double>(beta_b));
    const auto inner = [&](double from) {
        if (from >= 1.0) return 0.0;
        const auto pdf_b = [&](double phi) {
            return beta_pdf(phi, alpha_b, beta_b, log_norm_b);
        };
        return adaptive_gk(pdf_b, from, 1.0, abs_tol * 0.01, 0);
    };
    const auto integrand = [&](double phi) {
        return beta_pdf(phi, alpha_a, beta_a, log_norm_a) * inner(gamma * phi);
    };
    return adaptive_gk(integrand, 0.0, hi, abs_tol, 0);
}

namespace {

// Vector-valued GK15 over the (alpha_b, beta_b) grid; one shared power
// table per node evaluation feeds every tail.
class GridIntegrand {
public:
    GridIntegrand(std::int64_t alpha_a, std::int64_t beta_a, double gamma,
                  int max_alpha_b, int max_beta_b)
        : alpha_a_(alpha_a),
          beta_a_(beta_a),
          gamma_(gamma),
          max_alpha_b_(max_alpha_b),
          max_beta_b_(max_beta_b),
          log_norm_(beta_log_norm(static_cast<double>(alpha_a),
                                  static_cast<double>(beta_a))) {
        const int max_n = max_alpha_b + max_beta_b - 1;
        rows_.reserve(static_cast<std::size_t>(max_n) + 1);
        for (int n = 0; n <= max_n; ++n) rows_.push_back(pascal_row(n));
        pow_y_.resize(static_cast<std::size_t>(max_n) + 1);
        pow_1my_.resize(static_cast<std::size_t>(max_n) + 1);
    }

    std::size_t size() const {
        return static_cast<std::size_t>(max_alpha_b_) *
               static_cast<std::size_t>(max_beta_b_);
    }

    // kron += w_kron * f(phi) and gauss += w_gauss * f(phi), componentwise,
    // evaluating the integrand once.
    void accumulate(double phi, double w_kron, double w_gauss,
                    std::vector<double>& kron, std::vector<double>& gauss) {
        const double pdf = beta_pdf(phi, alpha_a_, beta_a_, log_norm_);
        const double wk = w_kron * pdf;
        const double wg = w_gauss * pdf;
        const double y = gamma_ * phi;
        const int max_n = max_alpha_b_ + max_beta_b_ - 1;
        if (y >= 1.0) return;  // tail is zero for every component
        pow_y_[0] = 1.0;
        pow_1my_[0] = 1.0;
        for (int k = 1; k <= max_n; ++k) {
            pow_y_[static_cast<std::size_t>(k)] =
                pow_y_[static_cast<std::size_t>(k) - 1] * y;
            pow_1my_[static_cast<std::size_t>(k)] =
                pow_1my_[static_cast<std::size_t>(k) - 1] * (1.0 - y);
        }
        std::size_t idx = 0;
        for (int ab = 1; ab <= max_alpha_b_; ++ab) {
            for (int bb = 1; bb <= max_beta_b_; ++bb, ++idx) {
                const int n = ab + bb - 1;
                const auto& binom = rows_[static_cast<std::size_t>(n)];
                double tail = 0.0;
                for (int j = 0; j < ab; ++j)
                    tail += static_cast<double>(binom[static_cast<std::size_t>(j)]) *
                            pow_y_[static_cast<std::size_t>(j)] *
                            pow_1my_[static_cast<std::size_t>(n - j)];
                if (tail > 1.0) tail = 1.0;
                kron[idx] += wk * tail;
                gauss[idx] += wg * tail;
            }
        }
    }

private:
    std::int64_t alpha_a_;
    std::int64_t beta_a_;
    double gamma_;
    int max_alpha_b_;
    int max_beta_b_;
    double log_norm_;
    std::vector<std::vector<long double>> rows_;
    std::vector<double> pow_y_;
    std::vector<double> pow_1my_;
};

void grid_gk15(GridIntegrand& f, double lo, double hi,
               std::vector<double>& kronrod, double& max_error) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::vector<double> gauss(f.size(), 0.0);
    std::fill(kronrod.begin(), kronrod.end(), 0.0);
    f.accumulate(center, kKronrodWeights[7], kGaussWeights[3], kronrod, gauss);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double wg = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
        f.accumulate(center - dx, kKronrodWeights[i], wg, kronrod, gauss);
        f.accumulate(center + dx, kKronrodWeights[i], wg, kronrod, gauss);
    }
    max_error = 0.0;
    for (std::size_t k = 0; k < kronrod.size(); ++k) {
        kronrod[k] *= half;
        max_error = std::max(max_error, std::fabs(kronrod[k] - gauss[k] * half));
    }
}

void grid_adaptive(GridIntegrand& f, double lo, double hi, double abs_tol,
                   int depth, std::vector<double>& total) {
    std::vector<double> piece(f.size());
    double err;
    grid_gk15(f, lo, hi, piece, err);
    double scale = 0.0;
    for (const double v : piece) scale = std::max(scale, std::fabs(v));
    const double floor_tol = 25.0 * 2.2e-16 * scale;
    if (err <= std::max(abs_tol, floor_tol) || depth >= 40) {
        for (std::size_t k = 0; k < total.size(); ++k) total[k] += piece[k];
        return;
    }
    const double mid = 0.5 * (lo + hi);
    grid_adaptive(f, lo, mid, 0.5 * abs_tol, depth + 1, total);
    grid_adaptive(f, mid, hi, 0.5 * abs_tol, depth + 1, total);
}

}  // namespace

std::vector<double> pr_scaled_quad_grid(std::int64_t alpha_a,
                                        std::int64_t beta_a, double gamma,
                                        int max_alpha_b, int max_beta_b,
                                        double abs_tol) {
    GridIntegrand f(alpha_a, beta_a, gamma, max_alpha_b, max_beta_b);
    std::vector<double> total(f.size(), 0.0);
    const double hi = gamma > 1.0 ? 1.0 / gamma : 1.0;
    grid_adaptive(f, 0.0, hi, abs_tol, 0, total);
    return total;
}

long double hyp2f1_series_ext(std::int64_t m, long double b, long double c,
                              long double z) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (std::int64_t n = 1; n <= m; ++n) {
        const long double dn = static_cast<long double>(n);
        term *= (static_cast<long double>(-m) + dn - 1.0L) * (b + dn - 1.0L) /
                ((c + dn - 1.0L) * dn) * z;
        sum += term;
    }
    return sum;
}

long double jacobi_series_ext(std::int64_t n, long double x, long double y,
                              long double t) {
    // Reflection keeps the series argument (1-t)/2 at or below one half,
    // where the alternating sum stays well conditioned.
    if (t < 0.0L) {
        const long double reflected = jacobi_series_ext(n, y, x, -t);
        return (n % 2 == 0) ? reflected : -reflected;
    }
    // (x+1)_n / n!
    long double prefactor = 1.0L;
    for (std::int64_t k = 0; k < n; ++k)
        prefactor *= (x + 1.0L + static_cast<long double>(k)) /
                     (static_cast<long double>(k) + 1.0L);
    return prefactor *
           hyp2f1_series_ext(n, static_cast<long double>(n) + x + y + 1.0L,
                             x + 1.0L, (1.0L - t) / 2.0L);
}

double walk_hit_frequency(std::int64_t n_max, std::int64_t d_star,
                          double delta, std::int64_t replications,
                          std::uint64_t seed) {
    const double p_up = (1.0 + delta) / (2.0 + delta);
    std::int64_t hits = 0;
    for (std::int64_t rep = 0; rep < replications; ++rep) {
        betarate::SplitMix64 rng = betarate::SplitMix64::substream(
            seed, static_cast<std::uint64_t>(rep));
        std::int64_t position = 0;
        for (std::int64_t step = 1; step <= n_max; ++step) {
            position += rng.next_unit() < p_up ? 1 : -1;
            if (position >= d_star) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(replications);
}

}  // namespace oracles

#pragma once

#include <cmath>
#include <limits>

namespace betarate {

// Signed magnitude kept in log space: value = sign * exp(log_magnitude).
// sign == 0 encodes an exact zero (log_magnitude is then meaningless), so
// magnitudes far beyond the native double range stay representable.
struct LogReal {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogReal zero() { return {}; }

    static LogReal one() { return {0.0, +1}; }

    static LogReal from_log(double log_mag, int sgn) {
        if (sgn == 0 || log_mag == -std::numeric_limits<double>::infinity())
            return zero();
        return {log_mag, sgn < 0 ? -1 : +1};
    }

    static LogReal from_value(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::fabs(v)), v < 0.0 ? -1 : +1};
    }

    bool is_zero() const { return sign == 0; }

    // May overflow to +-inf or underflow to 0 when leaving log space.
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_magnitude);
    }

    LogReal operator*(const LogReal& o) const {
        if (sign == 0 || o.sign == 0) return zero();
        return {log_magnitude + o.log_magnitude, sign * o.sign};
    }
};

// Accumulates the terms of an alternating series as two separate
// log-sum-exp pools (positive and negative), combined once at the end
// with sign tracking. cancellation_digits() reports how many leading
// digits the two pools share, i.e. how much significance the final
// subtraction destroyed.
class SignedLogSum {
public:
    void add(const LogReal& term) {
        if (term.sign > 0)
            pos_.add(term.log_magnitude);
        else if (term.sign < 0)
            neg_.add(term.log_magnitude);
    }

    void add_log(double log_mag, int sgn) { add(LogReal::from_log(log_mag, sgn)); }

    LogReal total() const {
        const double lp = pos_.total_log();
        const double ln = neg_.total_log();
        const double ninf = -std::numeric_limits<double>::infinity();
        if (lp == ninf && ln == ninf) return LogReal::zero();
        if (ln == ninf) return LogReal::from_log(lp, +1);
        if (lp == ninf) return LogReal::from_log(ln, -1);
        if (lp == ln) return LogReal::zero();
        const double hi = std::max(lp, ln);
        const double lo = std::min(lp, ln);
        return LogReal::from_log(hi + std::log1p(-std::exp(lo - hi)), lp > ln ? +1 : -1);
    }

    double cancellation_digits() const {
        const double ninf = -std::numeric_limits<double>::infinity();
        const double lp = pos_.total_log();
        const double ln = neg_.total_log();
        if (lp == ninf || ln == ninf) return 0.0;
        const LogReal t = total();
        const double hi = std::max(lp, ln);
        if (t.is_zero()) return std::numeric_limits<double>::infinity();
        return std::max(0.0, (hi - t.log_magnitude) / std::log(10.0));
    }

private:
    // Streaming log-sum-exp: running max plus the sum rescaled to it.
    struct Pool {
        double max_log = -std::numeric_limits<double>::infinity();
        double sum = 0.0;

        void add(double x) {
            if (x == -std::numeric_limits<double>::infinity()) return;
            if (x <= max_log) {
                sum += std::exp(x - max_log);
            } else {
                sum = sum * std::exp(max_log - x) + 1.0;
                max_log = x;
            }
        }

        double total_log() const {
            if (sum == 0.0) return -std::numeric_limits<double>::infinity();
            return max_log + std::log(sum);
        }
    };

    Pool pos_;
    Pool neg_;
};

}  // namespace betarate

#ifndef SUMCODE_ANALYTICS_HPP
#define SUMCODE_ANALYTICS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "field.hpp"
#include "pmf.hpp"

namespace sumcode {

/// Distribution of U1+U2 (integer addition) for U1, U2 i.i.d. uniform on
/// [0, q-1]: a triangular PMF on [0, 2q-2] with P(a) = (a+1)/q^2 rising and
/// (2q-1-a)/q^2 falling, symmetric about q-1.
inline RationalPmf pw(long q) {
    FieldParam check(q);
    std::vector<mpq_class> p;
    p.reserve(2 * q - 1);
    mpq_class qq = mpq_class(1, q * q);
    for (long a = 0; a <= 2 * q - 2; ++a) {
        long c = a <= q - 1 ? a + 1 : 2 * q - 1 - a;
        p.push_back(c * qq);
    }
    return RationalPmf(std::move(p));
}

/// H(U1+U2) in closed form: 2 log q - (1/q^2)(2 sum_{i=1}^q i log i - q log q).
inline double hw(long q) {
    FieldParam check(q);
    double s = 0.0;
    for (long i = 1; i <= q; ++i) s += static_cast<double>(i) * std::log2(static_cast<double>(i));
    double qd = static_cast<double>(q);
    return 2.0 * std::log2(qd) - (2.0 * s - qd * std::log2(qd)) / (qd * qd);
}

/// Entropy deficit of the sum: D(q) = H(U1+U2) - log q, in [1/2, log sqrt(e)).
inline double dq(long q) { return hw(q) - std::log2(static_cast<double>(q)); }

/// Asymptotic exponent of the typical sumset size (bits per symbol):
/// min(R1 + R2, max(R1, R2) + D(q)).
inline double predicted_log_size(double r1, double r2, long q) {
    double lq = std::log2(static_cast<double>(q));
    if (r1 < 0 || r2 < 0 || r1 > lq + 1e-12 || r2 > lq + 1e-12)
        throw std::invalid_argument("predicted_log_size: rate outside [0, log q]");
    return std::min(r1 + r2, std::max(r1, r2) + dq(q));
}

/// Symmetric-rate form: 2R below the D(q) threshold, R + D(q) above.
inline double predicted_log_size_symmetric(double r, long q) {
    double lq = std::log2(static_cast<double>(q));
    if (r < 0 || r > lq + 1e-12)
        throw std::invalid_argument("predicted_log_size_symmetric: rate outside [0, log q]");
    return r <= dq(q) ? 2.0 * r : r + dq(q);
}

/// Elementary cardinality bounds on |C1 + C2| for full-rank nested codes:
/// at least (2q-2)^{min(k1,k2)}, at most q^{k1+k2}.
inline std::pair<mpz_class, mpz_class> sumset_cardinality_bounds(long q, int k1, int k2) {
    if (k1 < 1 || k2 < 1)
        throw std::invalid_argument("sumset_cardinality_bounds: k1, k2 >= 1 required");
    return {pow_mpz(2 * q - 2, std::min(k1, k2)), pow_mpz(q, k1 + k2)};
}

/// Rate above which the lower cardinality bound certifies that the sumset is
/// smaller than q^{k1+k2}: D(q) / (log(2q-2)/log q - 1). Only meaningful when
/// below log q; the caller checks that.
inline double shrink_threshold_rate(long q) {
    double lq = std::log2(static_cast<double>(q));
    double ratio = std::log2(static_cast<double>(2 * q - 2)) / lq;
    return dq(q) / (ratio - 1.0);
}

inline bool shrink_threshold_meaningful(long q) {
    return shrink_threshold_rate(q) < std::log2(static_cast<double>(q));
}

/// Entropy of X1+X2 for X1, X2 i.i.d. uniform over a finite set of reals.
/// Sums within 1e-9 of each other are merged into one atom.
inline double entropy_of_sum_support(const std::vector<double>& points) {
    if (points.empty())
        throw std::invalid_argument("entropy_of_sum_support: empty support");
    const double tol = 1e-9;
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] <= tol)
            throw std::invalid_argument("entropy_of_sum_support: duplicate points");

    std::vector<std::pair<double, long>> atoms;  // (sum value, count of ordered pairs)
    std::vector<double> sums;
    sums.reserve(sorted.size() * sorted.size());
    for (double a : sorted)
        for (double b : sorted) sums.push_back(a + b);
    std::sort(sums.begin(), sums.end());
    for (double s : sums) {
        if (!atoms.empty() && s - atoms.back().first <= tol)
            ++atoms.back().second;
        else
            atoms.emplace_back(s, 1);
    }
    const double total = static_cast<double>(sums.size());
    double h = 0.0;
    for (const auto& [value, count] : atoms) {
        double p = static_cast<double>(count) / total;
        h -= p * std::log2(p);
    }
    return h;
}

/// The entropy rate of the sum process obeys the same exponent formula as the
/// sumset size.
inline double predicted_sum_entropy_rate(double r1, double r2, long q) {
    return predicted_log_size(r1, r2, q);
}

/// Two-sided closed-form envelope on hw(q):
/// log q + log sqrt(e) - (1 +/- q log q)/q^2.
inline std::pair<double, double> hw_envelope(long q) {
    double qd = static_cast<double>(q);
    double lq = std::log2(qd);
    double log_sqrt_e = 0.5 * std::log2(std::exp(1.0));
    double lo = lq + log_sqrt_e - (1.0 + qd * lq) / (qd * qd);
    double hi = lq + log_sqrt_e - (1.0 - qd * lq) / (qd * qd);
    return {lo, hi};
}

}  // namespace sumcode

#endif

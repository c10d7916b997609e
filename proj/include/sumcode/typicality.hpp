#ifndef SUMCODE_TYPICALITY_HPP
#define SUMCODE_TYPICALITY_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "pmf.hpp"

namespace sumcode {

inline std::vector<long> empirical_counts(std::span<const int> seq, int alphabet_size) {
    std::vector<long> counts(alphabet_size, 0);
    for (int a : seq) {
        if (a < 0 || a >= alphabet_size)
            throw std::invalid_argument("empirical_counts: symbol out of alphabet");
        ++counts[a];
    }
    return counts;
}

/// Absolute-deviation typicality: |P(a) - N(a|seq)/n| <= delta for every
/// symbol a of the support, zero-probability symbols included (their
/// frequency must then stay below delta).
inline bool counts_typical(const std::vector<long>& counts, const RationalPmf& pmf,
                           double delta) {
    long n = 0;
    for (long c : counts) n += c;
    if (n == 0) return true;
    for (int a = 0; a < pmf.size(); ++a) {
        double freq = static_cast<double>(counts[a]) / static_cast<double>(n);
        if (std::abs(pmf.prob(a) - freq) > delta) return false;
    }
    return true;
}

inline bool is_typical(std::span<const int> seq, const RationalPmf& pmf, double delta) {
    return counts_typical(empirical_counts(seq, pmf.size()), pmf, delta);
}

/// Default schedule n^{-1/3}, so that n*delta^2 = n^{1/3} grows without bound.
inline double default_delta(long n) {
    if (n < 1) throw std::invalid_argument("default_delta: n >= 1 required");
    return 1.0 / std::cbrt(static_cast<double>(n));
}

namespace detail {

inline void typical_count_rec(const RationalPmf& pmf, long n, double delta, int sym,
                              long remaining, const mpz_class& ways, mpz_class& total) {
    const int A = pmf.size();
    if (sym == A - 1) {
        // Last symbol takes whatever count remains.
        double freq = static_cast<double>(remaining) / static_cast<double>(n);
        if (std::abs(pmf.prob(sym) - freq) <= delta) total += ways;
        return;
    }
    const double p = pmf.prob(sym);
    long lo = static_cast<long>(std::ceil((p - delta) * n - 1e-9));
    long hi = static_cast<long>(std::floor((p + delta) * n + 1e-9));
    if (lo < 0) lo = 0;
    if (hi > remaining) hi = remaining;
    for (long c = lo; c <= hi; ++c) {
        double freq = static_cast<double>(c) / static_cast<double>(n);
        if (std::abs(p - freq) > delta) continue;
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(remaining),
                     static_cast<unsigned long>(c));
        typical_count_rec(pmf, n, delta, sym + 1, remaining - c, ways * binom, total);
    }
}

}  // namespace detail

/// Exact |A_[U]^(n)| by summing multinomial coefficients over admissible type
/// classes. The admissibility predicate is the same comparison used by
/// is_typical, so both paths agree on every sequence.
inline mpz_class typical_count_exact(const RationalPmf& pmf, long n, double delta) {
    if (n < 0) throw std::invalid_argument("typical_count_exact: n >= 0 required");
    if (n == 0) return 1;
    mpz_class total = 0;
    detail::typical_count_rec(pmf, n, delta, 0, n, mpz_class(1), total);
    return total;
}

/// Exact probability that an i.i.d. pmf-distributed n-sequence is typical:
/// sum over admissible type classes of multinomial * prod p_a^{c_a}.
inline mpq_class typical_mass_exact(const RationalPmf& pmf, long n, double delta) {
    if (n == 0) return 1;
    mpq_class total = 0;
    const int A = pmf.size();
    std::vector<long> counts(A, 0);
    // Small recursive lambda; alphabet sizes here are tiny (2q-1 symbols).
    auto rec = [&](auto&& self, int sym, long remaining, const mpz_class& ways,
                   const mpq_class& mass) -> void {
        if (sym == A - 1) {
            double freq = static_cast<double>(remaining) / static_cast<double>(n);
            if (std::abs(pmf.prob(sym) - freq) <= delta) {
                mpq_class term = mass;
                for (long i = 0; i < remaining; ++i) term *= pmf.p[sym];
                total += mpq_class(ways) * term;
            }
            return;
        }
        const double p = pmf.prob(sym);
        long lo = std::max<long>(0, static_cast<long>(std::ceil((p - delta) * n - 1e-9)));
        long hi = std::min<long>(remaining,
                                 static_cast<long>(std::floor((p + delta) * n + 1e-9)));
        for (long c = lo; c <= hi; ++c) {
            double freq = static_cast<double>(c) / static_cast<double>(n);
            if (std::abs(p - freq) > delta) continue;
            mpz_class binom;
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(remaining),
                         static_cast<unsigned long>(c));
            mpq_class m = mass;
            for (long i = 0; i < c; ++i) m *= pmf.p[sym];
            self(self, sym + 1, remaining - c, ways * binom, m);
        }
    };
    rec(rec, 0, n, mpz_class(1), mpq_class(1));
    return total;
}

}  // namespace sumcode

#endif

#ifndef SUMCODE_PMF_HPP
#define SUMCODE_PMF_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace sumcode {

/// Finite PMF over the integer support [0, size). Weights are exact
/// rationals; entropy evaluation is the only place doubles enter.
struct RationalPmf {
    std::vector<mpq_class> p;

    explicit RationalPmf(std::vector<mpq_class> probs) : p(std::move(probs)) {
        mpq_class total = 0;
        for (const auto& w : p) {
            if (w < 0) throw std::invalid_argument("RationalPmf: negative weight");
            total += w;
        }
        if (total != 1) throw std::invalid_argument("RationalPmf: weights must sum to 1");
    }

    int size() const { return static_cast<int>(p.size()); }
    double prob(int a) const { return p[a].get_d(); }
};

inline double entropy_bits(const RationalPmf& pmf) {
    double h = 0.0;
    for (const auto& w : pmf.p) {
        double x = w.get_d();
        if (x > 0) h -= x * std::log2(x);
    }
    return h;
}

/// Double-precision PMF used where exactness is not required (channel rows,
/// joint distributions). Validates to within tol.
inline void check_stochastic(const std::vector<double>& row, double tol, const char* what) {
    double s = 0.0;
    for (double x : row) {
        if (x < 0) throw std::invalid_argument(std::string(what) + ": negative probability");
        s += x;
    }
    if (std::abs(s - 1.0) > tol)
        throw std::invalid_argument(std::string(what) + ": row sums to " + std::to_string(s));
}

inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0) h -= x * std::log2(x);
    return h;
}

}  // namespace sumcode

#endif

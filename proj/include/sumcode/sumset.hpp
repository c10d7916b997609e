#ifndef SUMCODE_SUMSET_HPP
#define SUMCODE_SUMSET_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "analytics.hpp"
#include "codes.hpp"
#include "rng.hpp"
#include "typicality.hpp"

namespace sumcode {

/// Entry-wise integer (not mod-q) sum of two codewords; alphabet [0, 2q-2].
struct SumVector {
    long q;
    std::vector<int> e;

    SumVector(long q_, std::vector<int> entries) : q(q_), e(std::move(entries)) {
        for (int x : e)
            if (x < 0 || x > 2 * q - 2)
                throw std::invalid_argument("SumVector: entry out of [0, 2q-2]");
    }
    int length() const { return static_cast<int>(e.size()); }
    bool operator==(const SumVector& o) const { return q == o.q && e == o.e; }
};

inline SumVector integer_sum(const GFVector& t, const GFVector& v) {
    if (t.q != v.q || t.length() != v.length())
        throw std::invalid_argument("integer_sum: mismatched vectors");
    std::vector<int> e(t.length());
    for (int i = 0; i < t.length(); ++i) e[i] = t.e[i] + v.e[i];
    return SumVector(t.q, std::move(e));
}

namespace detail {

/// Collision-free key: base-(2q-1) digits packed into a big integer.
inline mpz_class encode_sum(const std::vector<int>& e, long q) {
    const long base = 2 * q - 1;
    mpz_class key = 0;
    for (int x : e) {
        key *= base;
        key += x;
    }
    return key;
}

inline std::vector<int> decode_sum(mpz_class key, long q, int n) {
    const long base = 2 * q - 1;
    std::vector<int> e(n);
    for (int i = n - 1; i >= 0; --i) {
        mpz_class digit = key % base;
        e[i] = static_cast<int>(digit.get_si());
        key /= base;
    }
    return e;
}

}  // namespace detail

/// Exact multiplicity table of the integer sumset: maps each achievable sum
/// vector w to Z(w), the number of message pairs producing it. The induced
/// probability is P_S(w) = Z(w) / q^{k1+k2} exactly.
struct SumsetTable {
    long q;
    int n, k1, k2;
    std::map<mpz_class, mpz_class> z;  // encoded sum -> multiplicity

    mpz_class total() const { return pow_mpz(q, k1 + k2); }
    std::vector<int> key_vector(const mpz_class& key) const {
        return detail::decode_sum(key, q, n);
    }
    mpq_class prob(const mpz_class& key) const {
        auto it = z.find(key);
        if (it == z.end()) return 0;
        mpq_class p(it->second, total());
        p.canonicalize();
        return p;
    }
};

inline SumsetTable integer_sumset(const NestedCodePair& pair) {
    mpz_class count = pow_mpz(pair.q, pair.k1 + pair.k2);
    if (count > kEnumerationCap)
        throw std::runtime_error("integer_sumset: q^{k1+k2} exceeds enumeration cap");

    LinearCode c1(pair.q, pair.G, pair.d1);
    std::vector<GFVector> ts = enumerate_codewords(c1);

    // C2 codewords in lexicographic n' order.
    std::vector<GFVector> vs;
    {
        std::vector<int> np(pair.k2, 0);
        while (true) {
            GFVector full = pair.lift_message(GFVector(pair.q, np));
            GFVector v = mat_vec_mod(pair.G, full);
            for (int i = 0; i < pair.n; ++i)
                v.e[i] = static_cast<int>((v.e[i] + pair.d2.e[i]) % pair.q);
            vs.push_back(std::move(v));
            int pos = pair.k2 - 1;
            while (pos >= 0 && np[pos] == pair.q - 1) np[pos--] = 0;
            if (pos < 0) break;
            ++np[pos];
        }
    }

    SumsetTable table{pair.q, pair.n, pair.k1, pair.k2, {}};
    std::vector<int> w(pair.n);
    for (const GFVector& t : ts)
        for (const GFVector& v : vs) {
            for (int i = 0; i < pair.n; ++i) w[i] = t.e[i] + v.e[i];
            table.z[detail::encode_sum(w, pair.q)] += 1;
        }
    return table;
}

struct SumDecomposition {
    SumVector s, p1, p2;
};

inline SumDecomposition decompose_sum(const SumVector& w, int k1, int k2) {
    if (k2 > k1 || k1 > w.length())
        throw std::invalid_argument("decompose_sum: need k2 <= k1 <= n");
    auto slice = [&](int lo, int hi) {
        return SumVector(w.q, std::vector<int>(w.e.begin() + lo, w.e.begin() + hi));
    };
    return {slice(0, k2), slice(k2, k1), slice(k1, w.length())};
}

struct TypicalSumset {
    std::vector<mpz_class> member_keys;  // keys into the SumsetTable
    double delta;
    mpq_class covered_mass;
};

/// Membership test used throughout: the first k2 coordinates (after
/// systematizing permutation, if any) must be a typical sum-alphabet sequence.
inline bool info_sum_typical(const std::vector<int>& w, const NestedCodePair& pair,
                             const Permutation* pi, const RationalPmf& pmf,
                             double delta) {
    std::vector<int> s(pair.k2);
    for (int i = 0; i < pair.k2; ++i) s[i] = pi ? w[pi->images[i]] : w[i];
    return is_typical(s, pmf, delta);
}

/// Selects from the table the sums whose information-sum is typical, with the
/// exact probability mass they capture. Non-systematic pairs are handled
/// through the systematizing permutation of their common generator.
inline TypicalSumset normal_typical_sumset(const NestedCodePair& pair,
                                           const SumsetTable& table, double delta) {
    std::optional<Permutation> pi_storage;
    const Permutation* pi = nullptr;
    if (!pair.systematic) {
        if (pair.pi)
            pi = &*pair.pi;
        else {
            pi_storage = systematize(pair.G).second;
            pi = &*pi_storage;
        }
    }
    RationalPmf pmf = pw(pair.q);
    TypicalSumset out{{}, delta, mpq_class(0)};
    mpz_class covered = 0;
    for (const auto& [key, mult] : table.z) {
        std::vector<int> w = table.key_vector(key);
        if (info_sum_typical(w, pair, pi, pmf, delta)) {
            out.member_keys.push_back(key);
            covered += mult;
        }
    }
    out.covered_mass = mpq_class(covered, table.total());
    out.covered_mass.canonicalize();
    return out;
}

/// Number of message pairs mapping to a given information-sum s, in closed
/// form: q^{k1-k2} * prod_i c(s_i) with c(a) = a+1 rising, 2q-1-a falling.
inline mpz_class exact_pair_count(const std::vector<int>& s, long q, int k1, int k2) {
    if (static_cast<int>(s.size()) != k2)
        throw std::invalid_argument("exact_pair_count: s must have length k2");
    mpz_class count = pow_mpz(q, k1 - k2);
    for (int a : s) {
        if (a < 0 || a > 2 * q - 2)
            throw std::invalid_argument("exact_pair_count: entry out of [0, 2q-2]");
        count *= (a <= q - 1) ? a + 1 : 2 * q - 1 - a;
    }
    return count;
}

struct ParitySumSets {
    std::set<std::vector<int>> all;                              // full (p1; p2) vectors
    std::map<std::vector<int>, std::set<std::vector<int>>> by_p1;  // p1 -> {p2}
};

/// Enumerates the parity-sum sets for a fixed information-sum s by walking
/// exactly the message pairs that realize s: per info coordinate the
/// admissible (t_i, v_i) splits of s_i, plus the free tail of m.
inline ParitySumSets parity_sum_sets(const NestedCodePair& pair,
                                     const std::vector<int>& s) {
    if (!pair.systematic)
        throw std::invalid_argument("parity_sum_sets: systematic pair required");
    if (static_cast<int>(s.size()) != pair.k2)
        throw std::invalid_argument("parity_sum_sets: s must have length k2");
    const long q = pair.q;
    mpz_class pairs = exact_pair_count(s, q, pair.k1, pair.k2);
    if (pairs > kEnumerationCap)
        throw std::runtime_error("parity_sum_sets: group exceeds enumeration cap");

    // Splits s_i = a + b with a, b in [0, q-1]; a is t's info symbol.
    std::vector<std::vector<int>> lo(pair.k2);
    for (int i = 0; i < pair.k2; ++i) {
        int from = std::max<long>(0, s[i] - (q - 1));
        int to = std::min<long>(q - 1, s[i]);
        for (int a = from; a <= to; ++a) lo[i].push_back(a);
    }

    ParitySumSets out;
    std::vector<int> split(pair.k2, 0);   // index into lo[i]
    std::vector<int> tail(pair.k1 - pair.k2, 0);  // free coordinates of m
    while (true) {
        // Recover the message pair realizing this choice.
        std::vector<int> m(pair.k1), np(pair.k2);
        for (int i = 0; i < pair.k2; ++i) {
            int a = lo[i][split[i]];
            int b = static_cast<int>(s[i] - a);
            m[i] = static_cast<int>(((a - pair.d1.e[i]) % q + q) % q);
            np[i] = static_cast<int>(((b - pair.d2.e[i]) % q + q) % q);
        }
        for (int i = 0; i < pair.k1 - pair.k2; ++i) m[pair.k2 + i] = tail[i];
        auto [t, v] = encode_pair(pair, {GFVector(q, m), GFVector(q, np)});
        std::vector<int> p(pair.n - pair.k2);
        for (int i = pair.k2; i < pair.n; ++i) p[i - pair.k2] = t.e[i] + v.e[i];
        std::vector<int> p1(p.begin(), p.begin() + (pair.k1 - pair.k2));
        std::vector<int> p2(p.begin() + (pair.k1 - pair.k2), p.end());
        out.all.insert(p);
        out.by_p1[p1].insert(p2);

        // Odometer over (tail, split).
        int pos = pair.k1 - pair.k2 - 1;
        while (pos >= 0 && tail[pos] == q - 1) tail[pos--] = 0;
        if (pos >= 0) { ++tail[pos]; continue; }
        int sp = pair.k2 - 1;
        while (sp >= 0 && split[sp] == static_cast<int>(lo[sp].size()) - 1) split[sp--] = 0;
        if (sp < 0) break;
        ++split[sp];
    }
    return out;
}

struct TwoValueCheck {
    bool holds;
    std::vector<int> anchor;  // a_i in [0, q-1] per trailing-parity coordinate
};

/// Within a fixed (s, p1) group every trailing-parity coordinate must take at
/// most the two values {a_i, a_i + q}.
inline TwoValueCheck check_two_value_property(const NestedCodePair& pair,
                                              const std::set<std::vector<int>>& p2_group) {
    if (p2_group.empty())
        throw std::invalid_argument("check_two_value_property: empty group");
    const long q = pair.q;
    const int len = static_cast<int>(p2_group.begin()->size());
    std::vector<int> anchor(len, 0);
    for (int i = 0; i < len; ++i) {
        int mn = 2 * static_cast<int>(q);
        for (const auto& p2 : p2_group) mn = std::min(mn, p2[i]);
        anchor[i] = mn % static_cast<int>(q);
    }
    bool holds = true;
    for (const auto& p2 : p2_group)
        for (int i = 0; i < len; ++i)
            if (p2[i] != anchor[i] && p2[i] != anchor[i] + q) holds = false;
    return {holds, anchor};
}

struct TwoValueScan {
    long groups = 0;
    long violations = 0;
};

/// Checks the two-value property across every (s, p1) group of an instance by
/// one pass over all codeword pairs. Non-systematic pairs are scanned in the
/// coordinates of their systematizing permutation.
inline TwoValueScan two_value_scan(const NestedCodePair& pair) {
    mpz_class count = pow_mpz(pair.q, pair.k1 + pair.k2);
    if (count > kEnumerationCap)
        throw std::runtime_error("two_value_scan: q^{k1+k2} exceeds enumeration cap");
    std::optional<Permutation> pi_storage;
    const Permutation* pi = nullptr;
    if (!pair.systematic) {
        pi_storage = pair.pi ? *pair.pi : systematize(pair.G).second;
        pi = &*pi_storage;
    }

    LinearCode c1(pair.q, pair.G, pair.d1);
    std::vector<GFVector> ts = enumerate_codewords(c1);
    std::vector<GFVector> vs;
    {
        std::vector<int> np(pair.k2, 0);
        while (true) {
            GFVector full = pair.lift_message(GFVector(pair.q, np));
            GFVector v = mat_vec_mod(pair.G, full);
            for (int i = 0; i < pair.n; ++i)
                v.e[i] = static_cast<int>((v.e[i] + pair.d2.e[i]) % pair.q);
            vs.push_back(std::move(v));
            int pos = pair.k2 - 1;
            while (pos >= 0 && np[pos] == pair.q - 1) np[pos--] = 0;
            if (pos < 0) break;
            ++np[pos];
        }
    }

    // (s, p1) -> set of p2
    std::map<std::vector<int>, std::set<std::vector<int>>> groups;
    std::vector<int> w(pair.n), head(pair.k1), p2(pair.n - pair.k1);
    for (const GFVector& t : ts)
        for (const GFVector& v : vs) {
            for (int i = 0; i < pair.n; ++i) {
                int src = pi ? pi->images[i] : i;
                w[i] = t.e[src] + v.e[src];
            }
            head.assign(w.begin(), w.begin() + pair.k1);
            p2.assign(w.begin() + pair.k1, w.end());
            groups[head].insert(p2);
        }

    TwoValueScan out;
    for (const auto& [head_key, p2_set] : groups) {
        ++out.groups;
        if (!check_two_value_property(pair, p2_set).holds) ++out.violations;
    }
    return out;
}

/// Plug-in entropy of P_S, exact probabilities into double logs, per symbol.
inline double empirical_sum_entropy(const SumsetTable& table) {
    double h = 0.0;
    for (const auto& [key, mult] : table.z) {
        mpq_class p(mult, table.total());
        p.canonicalize();
        double x = p.get_d();
        h -= x * std::log2(x);
    }
    return h / table.n;
}

struct McEstimate {
    double estimate;
    double standard_error;
    long trials;
};

/// Sampled fraction of codeword pairs whose information-sum is typical.
inline McEstimate mc_coverage(const NestedCodePair& pair, double delta, long trials,
                              std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("mc_coverage: trials >= 1 required");
    std::optional<Permutation> pi_storage;
    const Permutation* pi = nullptr;
    if (!pair.systematic) {
        pi_storage = pair.pi ? *pair.pi : systematize(pair.G).second;
        pi = &*pi_storage;
    }
    RationalPmf pmf = pw(pair.q);
    long hits = 0;
    std::vector<int> w(pair.n);
    for (long trial = 0; trial < trials; ++trial) {
        Prng rng = Prng::derive(seed, {3, static_cast<std::uint64_t>(trial)});
        MessagePair mp = sample_message_pair(pair, rng);
        auto [t, v] = encode_pair(pair, mp);
        for (int i = 0; i < pair.n; ++i) w[i] = t.e[i] + v.e[i];
        if (info_sum_typical(w, pair, pi, pmf, delta)) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(trials);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return {p, se, trials};
}

struct McEntropy {
    double entropy_per_symbol;  // plug-in, biased low; diagnostic only
    long distinct_sums_seen;
    long trials;
};

inline McEntropy mc_sum_entropy(const NestedCodePair& pair, long trials,
                                std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("mc_sum_entropy: trials >= 1 required");
    std::map<mpz_class, long> counts;
    std::vector<int> w(pair.n);
    for (long trial = 0; trial < trials; ++trial) {
        Prng rng = Prng::derive(seed, {4, static_cast<std::uint64_t>(trial)});
        MessagePair mp = sample_message_pair(pair, rng);
        auto [t, v] = encode_pair(pair, mp);
        for (int i = 0; i < pair.n; ++i) w[i] = t.e[i] + v.e[i];
        counts[detail::encode_sum(w, pair.q)] += 1;
    }
    double h = 0.0;
    for (const auto& [key, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(trials);
        h -= p * std::log2(p);
    }
    return {h / pair.n, static_cast<long>(counts.size()), trials};
}

/// Exact probability that the information-sum of a random pair is typical.
/// The k2 information-sum coordinates are i.i.d. sum-distributed for uniform
/// messages regardless of Q, H, or dithers, so this closed form must agree
/// with the mass computed from any enumerated table.
inline mpq_class exact_coverage(long q, int k2, double delta) {
    return typical_mass_exact(pw(q), k2, delta);
}

// ---------------------------------------------------------------------------
// Binary symmetric-rate fast path. For q = 2, systematic pairs with k1 = k2,
// sums are driven entirely by bitmask algebra: a sum vector is determined by
// (xor, carry) masks, message pairs with a fixed information-sum are indexed
// by submasks, and the parity carry pattern is the only varying part. This
// covers instances far beyond the generic enumeration cap.
// ---------------------------------------------------------------------------

struct KnStats {
    mpz_class num_distinct_sums;
    mpz_class kn_size;              // distinct sums with typical information-sum
    mpq_class covered_mass;         // exact mass of those sums
    double entropy_per_symbol;      // exact plug-in entropy of the full P_S
};

inline KnStats kn_stats_binary(const NestedCodePair& pair, double delta) {
    if (pair.q != 2 || !pair.systematic || pair.k1 != pair.k2)
        throw std::invalid_argument(
            "kn_stats_binary: binary symmetric systematic pair required");
    const int k = pair.k1, npar = pair.n - pair.k1;
    if (k > 25 || npar > 30)
        throw std::invalid_argument("kn_stats_binary: instance too large");
    RationalPmf pmf = pw(2);

    // Parity table: par[m] = Q*m mod 2 as a bitmask over the n-k parity rows.
    std::vector<std::uint32_t> par(std::size_t(1) << k, 0);
    std::vector<std::uint32_t> qcol(k, 0);
    for (int j = 0; j < k; ++j)
        for (int r = 0; r < npar; ++r)
            if (pair.G.at(k + r, j)) qcol[j] |= 1u << r;
    for (std::uint32_t m = 1; m < (1u << k); ++m) {
        std::uint32_t low = m & (~m + 1u);
        int j = std::countr_zero(low);
        par[m] = par[m ^ low] ^ qcol[j];
    }

    std::uint32_t d1i = 0, d2i = 0, d1p = 0, d2p = 0;
    for (int i = 0; i < k; ++i) {
        if (pair.d1.e[i]) d1i |= 1u << i;
        if (pair.d2.e[i]) d2i |= 1u << i;
    }
    for (int r = 0; r < npar; ++r) {
        if (pair.d1.e[k + r]) d1p |= 1u << r;
        if (pair.d2.e[k + r]) d2p |= 1u << r;
    }

    // Typicality of an information-sum depends only on its (ones, twos) type.
    std::vector<std::vector<char>> typ(k + 1, std::vector<char>(k + 1, 0));
    for (int ones = 0; ones <= k; ++ones)
        for (int twos = 0; ones + twos <= k; ++twos) {
            std::vector<long> counts = {k - ones - twos, ones, twos};
            typ[ones][twos] = counts_typical(counts, pmf, delta) ? 1 : 0;
        }

    // A multiplicity can reach 2^k (all submasks giving one carry pattern).
    std::vector<double> xlogx((std::size_t(1) << k) + 1);
    for (std::uint32_t c = 1; c <= (1u << k); ++c)
        xlogx[c] = static_cast<double>(c) * std::log2(static_cast<double>(c));

    // Per-information-sum distinct-carry counting with an epoch-stamped array.
    std::vector<std::uint64_t> stamp(std::size_t(1) << npar, 0);
    std::vector<std::uint32_t> cnt(std::size_t(1) << npar, 0);
    std::vector<std::uint32_t> seen;
    seen.reserve(std::size_t(1) << npar);
    std::uint64_t epoch = 0;

    mpz_class num_distinct = 0, kn_size = 0;
    mpz_class covered_pairs = 0;
    double zlogz_sum = 0.0;

    const std::uint32_t full = k == 32 ? ~0u : (1u << k) - 1u;
    for (std::uint32_t x = 0;; ++x) {  // xor mask: coordinates where s = 1
        std::uint32_t rest = full & ~x;
        for (std::uint32_t c = rest;;
             c = (c - 1) & rest) {  // carry mask: coordinates where s = 2
            ++epoch;
            seen.clear();
            // Pairs with this information-sum: t_info = c^z, v_info = c^x^z.
            for (std::uint32_t z = x;; z = (z - 1) & x) {
                std::uint32_t m = c ^ z ^ d1i;
                std::uint32_t nn = c ^ x ^ z ^ d2i;
                std::uint32_t g = (par[m] ^ d1p) & (par[nn] ^ d2p);
                if (stamp[g] != epoch) {
                    stamp[g] = epoch;
                    cnt[g] = 1;
                    seen.push_back(g);
                } else {
                    ++cnt[g];
                }
                if (z == 0) break;
            }
            const bool typical = typ[std::popcount(x)][std::popcount(c)];
            num_distinct += static_cast<long>(seen.size());
            if (typical) {
                kn_size += static_cast<long>(seen.size());
                covered_pairs += mpz_class(1) << std::popcount(x);
            }
            for (std::uint32_t g : seen) zlogz_sum += xlogx[cnt[g]];
            if (c == 0) break;
        }
        if (x == full) break;
    }

    mpq_class covered(covered_pairs, mpz_class(1) << (2 * k));
    covered.canonicalize();
    double total_bits = 2.0 * k;
    double entropy = total_bits - zlogz_sum / std::ldexp(1.0, 2 * k);
    return {num_distinct, kn_size, covered, entropy / pair.n};
}

}  // namespace sumcode

#endif

#ifndef SUMCODE_MAC_HPP
#define SUMCODE_MAC_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "analytics.hpp"
#include "sumset.hpp"

namespace sumcode {

/// Two-user discrete memoryless MAC plus per-user symbol mappers: code
/// symbols u in [0, q-1] are pushed through P_{X1|U}, P_{X2|U} and the
/// channel emits y ~ P_{Y|X1 X2}.
struct ChannelModel {
    long q;
    int x1_size, x2_size, y_size;
    std::vector<std::vector<double>> px1_given_u;    // q rows over X1
    std::vector<std::vector<double>> px2_given_u;    // q rows over X2
    std::vector<std::vector<double>> py_given_x1x2;  // x1_size*x2_size rows over Y

    void validate() const {
        FieldParam check(q);
        if (x1_size < 1 || x2_size < 1 || y_size < 1)
            throw std::invalid_argument("ChannelModel: alphabet sizes must be positive");
        auto check_rows = [](const std::vector<std::vector<double>>& rows, size_t n,
                             size_t width, const char* what) {
            if (rows.size() != n)
                throw std::invalid_argument(std::string(what) + ": wrong row count");
            for (size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != width)
                    throw std::invalid_argument(std::string(what) + ": row " +
                                                std::to_string(r) + " has wrong width");
                check_stochastic(rows[r],
                                 1e-9, (std::string(what) + " row " + std::to_string(r)).c_str());
            }
        };
        check_rows(px1_given_u, q, x1_size, "px1_given_u");
        check_rows(px2_given_u, q, x2_size, "px2_given_u");
        check_rows(py_given_x1x2, static_cast<size_t>(x1_size) * x2_size, y_size,
                   "py_given_x1x2");
    }
};

namespace detail {

inline double prob_from_json(const nlohmann::json& v) {
    // Probabilities are decimal strings in channel files; bare numbers are
    // accepted too.
    if (v.is_string()) return std::stod(v.get<std::string>());
    return v.get<double>();
}

inline std::vector<std::vector<double>> rows_from_json(const nlohmann::json& arr) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : arr) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(prob_from_json(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace detail

inline ChannelModel channel_from_json(const nlohmann::json& j) {
    ChannelModel ch;
    ch.q = j.at("q").get<long>();
    ch.x1_size = j.at("x1_size").get<int>();
    ch.x2_size = j.at("x2_size").get<int>();
    ch.y_size = j.at("y_size").get<int>();
    ch.px1_given_u = detail::rows_from_json(j.at("px1_given_u"));
    ch.px2_given_u = detail::rows_from_json(j.at("px2_given_u"));
    // py_given_x1x2 is a 3-d array [x1][x2][y]; flatten to x1*x2 rows.
    for (const auto& block : j.at("py_given_x1x2"))
        for (const auto& row : block) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(detail::prob_from_json(v));
            ch.py_given_x1x2.push_back(std::move(r));
        }
    ch.validate();
    return ch;
}

inline ChannelModel load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_channel: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return channel_from_json(j);
}

/// Joint distribution of (W = U1+U2, Y) for uniform independent inputs:
/// a (2q-1) x y_size table.
struct JointWY {
    long q;
    int y_size;
    std::vector<std::vector<double>> p;  // [w][y]
};

inline JointWY joint_wy(const ChannelModel& ch) {
    const long q = ch.q;
    JointWY joint{q, ch.y_size,
                  std::vector<std::vector<double>>(2 * q - 1,
                                                   std::vector<double>(ch.y_size, 0.0))};
    const double pu = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
    for (long u1 = 0; u1 < q; ++u1)
        for (long u2 = 0; u2 < q; ++u2) {
            const long w = u1 + u2;
            for (int x1 = 0; x1 < ch.x1_size; ++x1) {
                const double p1 = ch.px1_given_u[u1][x1];
                if (p1 == 0.0) continue;
                for (int x2 = 0; x2 < ch.x2_size; ++x2) {
                    const double p2 = ch.px2_given_u[u2][x2];
                    if (p2 == 0.0) continue;
                    const auto& row = ch.py_given_x1x2[static_cast<size_t>(x1) * ch.x2_size + x2];
                    for (int y = 0; y < ch.y_size; ++y)
                        joint.p[w][y] += pu * p1 * p2 * row[y];
                }
            }
        }
    return joint;
}

inline double mutual_information(const JointWY& joint) {
    std::vector<double> pw_marg(joint.p.size(), 0.0), py(joint.y_size, 0.0);
    for (size_t w = 0; w < joint.p.size(); ++w)
        for (int y = 0; y < joint.y_size; ++y) {
            pw_marg[w] += joint.p[w][y];
            py[y] += joint.p[w][y];
        }
    double mi = 0.0;
    for (size_t w = 0; w < joint.p.size(); ++w)
        for (int y = 0; y < joint.y_size; ++y) {
            double pxy = joint.p[w][y];
            if (pxy > 0) mi += pxy * std::log2(pxy / (pw_marg[w] * py[y]));
        }
    return mi;
}

struct AchievableRate {
    double mutual_info;
    double deficit;  // D(q)
    double rate;     // mutual_info - deficit, may be negative
    bool achievable;
};

inline AchievableRate achievable_rate(const ChannelModel& ch) {
    double mi = mutual_information(joint_wy(ch));
    double d = dq(ch.q);
    return {mi, d, mi - d, mi - d > 0};
}

struct SimResult {
    long trials = 0;
    long decoded_trials = 0;  // trials minus dependent-message skips
    long errors = 0;
    double error_rate = 0.0;  // errors / decoded_trials
    long atypical_true_sum = 0;
    long ambiguous_candidate = 0;
    long dependent_message_skip = 0;

    bool operator==(const SimResult&) const = default;
};

namespace detail {

/// Messages are dependent when one lifted message is a scalar multiple of the
/// other; the decoder excludes all sums such pairs can produce.
inline bool linearly_dependent(const GFVector& m, const GFVector& m2, long q) {
    for (long c = 0; c < q; ++c) {
        bool eq1 = true, eq2 = true;
        for (int i = 0; i < m.length(); ++i) {
            if (m.e[i] != c * m2.e[i] % q) eq1 = false;
            if (m2.e[i] != c * m.e[i] % q) eq2 = false;
        }
        if (eq1 || eq2) return true;
    }
    return false;
}

inline int sample_from_row(const std::vector<double>& row, Prng& rng) {
    double u = rng.uniform01();
    double acc = 0.0;
    for (size_t i = 0; i < row.size(); ++i) {
        acc += row[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(row.size()) - 1;
}

/// Joint typicality of a candidate sum against the received word: cells with
/// zero probability must not occur at all; the rest obey the absolute
/// deviation bound.
inline bool jointly_typical(const std::vector<int>& w, const std::vector<int>& y,
                            const JointWY& joint, double delta) {
    const int n = static_cast<int>(w.size());
    const int ys = joint.y_size;
    std::vector<int> counts(joint.p.size() * ys, 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(w[i]) * ys + y[i]];
    for (size_t cell = 0; cell < counts.size(); ++cell) {
        double p = joint.p[cell / ys][cell % ys];
        if (p == 0.0) {
            if (counts[cell] != 0) return false;
        } else {
            double freq = static_cast<double>(counts[cell]) / n;
            if (std::abs(p - freq) > delta) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Monte Carlo run of the computation scheme: random message pairs, symbol
/// mappers, channel noise, and a sum decoder that searches the enumerated
/// typical sumset (minus the dependent-pair sums) for the unique jointly
/// typical candidate. Deterministic given (pair, channel, delta, seed).
inline SimResult simulate_computation(const NestedCodePair& pair, const ChannelModel& ch,
                                      double delta, long trials, std::uint64_t seed) {
    if (ch.q != pair.q) throw std::invalid_argument("simulate_computation: field mismatch");
    if (trials < 1) throw std::invalid_argument("simulate_computation: trials >= 1");

    SumsetTable table = integer_sumset(pair);
    TypicalSumset kn = normal_typical_sumset(pair, table, delta);
    JointWY joint = joint_wy(ch);

    // Sums reachable from linearly dependent message pairs.
    std::set<mpz_class> excluded;
    {
        std::vector<int> np(pair.k2, 0), w(pair.n);
        while (true) {
            GFVector nprime(pair.q, np);
            GFVector lifted = pair.lift_message(nprime);
            for (long c = 0; c < pair.q; ++c) {
                std::vector<int> me(pair.k1);
                for (int i = 0; i < pair.k1; ++i)
                    me[i] = static_cast<int>(c * lifted.e[i] % pair.q);
                auto [t, v] = encode_pair(pair, {GFVector(pair.q, me), nprime});
                for (int i = 0; i < pair.n; ++i) w[i] = t.e[i] + v.e[i];
                excluded.insert(detail::encode_sum(w, pair.q));
            }
            int pos = pair.k2 - 1;
            while (pos >= 0 && np[pos] == pair.q - 1) np[pos--] = 0;
            if (pos < 0) break;
            ++np[pos];
        }
        // The reverse direction (n' a multiple of m's information part) only
        // adds sums when k1 > k2; enumerate those from m's side.
        if (pair.k1 > pair.k2) {
            std::vector<int> m(pair.k1, 0);
            while (true) {
                GFVector mv(pair.q, m);
                for (long c = 0; c < pair.q; ++c) {
                    std::vector<int> npe(pair.k2);
                    for (int i = 0; i < pair.k2; ++i)
                        npe[i] = static_cast<int>(c * m[i] % pair.q);
                    GFVector nprime(pair.q, npe);
                    if (!detail::linearly_dependent(mv, pair.lift_message(nprime), pair.q))
                        continue;
                    auto [t, v] = encode_pair(pair, {mv, nprime});
                    for (int i = 0; i < pair.n; ++i) w[i] = t.e[i] + v.e[i];
                    excluded.insert(detail::encode_sum(w, pair.q));
                }
                int pos = pair.k1 - 1;
                while (pos >= 0 && m[pos] == pair.q - 1) m[pos--] = 0;
                if (pos < 0) break;
                ++m[pos];
            }
        }
    }

    // Candidate list: typical sumset minus excluded sums.
    std::vector<std::vector<int>> candidates;
    std::vector<mpz_class> candidate_keys;
    for (const mpz_class& key : kn.member_keys) {
        if (excluded.count(key)) continue;
        candidates.push_back(table.key_vector(key));
        candidate_keys.push_back(key);
    }

    SimResult res;
    res.trials = trials;
    std::vector<int> w_true(pair.n), y(pair.n);
    for (long trial = 0; trial < trials; ++trial) {
        Prng rng = Prng::derive(seed, {5, static_cast<std::uint64_t>(trial)});
        MessagePair mp = sample_message_pair(pair, rng);
        if (detail::linearly_dependent(mp.m, pair.lift_message(mp.nprime), pair.q)) {
            ++res.dependent_message_skip;
            continue;
        }
        ++res.decoded_trials;
        auto [t, v] = encode_pair(pair, mp);
        for (int i = 0; i < pair.n; ++i) w_true[i] = t.e[i] + v.e[i];
        for (int i = 0; i < pair.n; ++i) {
            int x1 = detail::sample_from_row(ch.px1_given_u[t.e[i]], rng);
            int x2 = detail::sample_from_row(ch.px2_given_u[v.e[i]], rng);
            y[i] = detail::sample_from_row(
                ch.py_given_x1x2[static_cast<size_t>(x1) * ch.x2_size + x2], rng);
        }

        int typical_hits = 0;
        const std::vector<int>* decoded = nullptr;
        for (const auto& cand : candidates) {
            if (detail::jointly_typical(cand, y, joint, delta)) {
                ++typical_hits;
                decoded = &cand;
                if (typical_hits > 1) break;
            }
        }
        if (typical_hits == 1 && *decoded == w_true) continue;  // success
        ++res.errors;
        if (typical_hits >= 2)
            ++res.ambiguous_candidate;
        else
            ++res.atypical_true_sum;
    }
    res.error_rate = res.decoded_trials > 0
                         ? static_cast<double>(res.errors) / res.decoded_trials
                         : 0.0;
    return res;
}

}  // namespace sumcode

#endif

// End-to-end acceptance suite: one PASS/FAIL line per criterion, exit code
// equal to the number of failures. Channel spec directory is argv[1].

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sumcode/analytics.hpp"
#include "sumcode/codes.hpp"
#include "sumcode/mac.hpp"
#include "sumcode/sumset.hpp"
#include "sumcode/typicality.hpp"

using namespace sumcode;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail, double seconds) {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) os << " [" << detail << "]";
    os << " (" << seconds << " s)";
    std::cout << os.str() << std::endl;
    if (!pass) ++failures;
}

template <typename F>
void run(int criterion, const std::string& what, F&& body) {
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(criterion, what, pass, detail, secs);
}

std::string channels_dir = "channels";

// --- criterion bodies ------------------------------------------------------

bool c1_deficit_table(std::string& detail) {
    if (std::abs(dq(2) - 0.5) > 1e-12) {
        detail = "dq(2) off";
        return false;
    }
    double prev = -1;
    for (long q = 2; q <= 997; ++q) {
        if (!is_prime(q)) continue;
        double d = dq(q);
        if (!(d > prev)) { detail = "not increasing at q=" + std::to_string(q); return false; }
        if (!(d < 0.721348)) { detail = "upper bound violated at q=" + std::to_string(q); return false; }
        auto [lo, hi] = hw_envelope(q);
        double h = hw(q);
        if (!(lo <= h + 1e-12 && h <= hi + 1e-12)) {
            detail = "envelope violated at q=" + std::to_string(q);
            return false;
        }
        prev = d;
    }
    return true;
}

bool c2_intro_entropies(std::string& detail) {
    double a = entropy_of_sum_support({0, 1, 2, 3, 4});
    double b = entropy_of_sum_support({0, 0.2, 0.8, 1.1, 2.1});
    detail = "got " + std::to_string(a) + ", " + std::to_string(b);
    return std::abs(a - 2.99) <= 0.01 && std::abs(b - 3.84) <= 0.01;
}

bool c3_shrink_thresholds(std::string& detail) {
    double a = shrink_threshold_rate(11), b = shrink_threshold_rate(101);
    detail = "got " + std::to_string(a) + ", " + std::to_string(b);
    return std::abs(a - 2.85) <= 0.01 && std::abs(b - 4.87) <= 0.01;
}

bool c4_pair_count_oracle(std::string& detail) {
    long checked = 0;
    for (long q : {2L, 3L}) {
        for (int k1 = 1; k1 <= 3; ++k1)
            for (int k2 = 1; k2 <= k1; ++k2)
                for (std::uint64_t dither_seed : {0ULL, 1ULL, 2ULL}) {
                    int n = k1 + 2;
                    NestedCodePair pair = build_nested_pair(
                        q, n, k1, k2, 40 + dither_seed, true,
                        dither_seed == 0 ? DitherMode::zero : DitherMode::random);
                    std::map<std::vector<int>, long> brute;
                    std::vector<int> m(k1, 0);
                    while (true) {
                        std::vector<int> np(k2, 0);
                        while (true) {
                            auto [t, v] =
                                encode_pair(pair, {GFVector(q, m), GFVector(q, np)});
                            std::vector<int> s(k2);
                            for (int i = 0; i < k2; ++i) s[i] = t.e[i] + v.e[i];
                            brute[s] += 1;
                            int pos = k2 - 1;
                            while (pos >= 0 && np[pos] == q - 1) np[pos--] = 0;
                            if (pos < 0) break;
                            ++np[pos];
                        }
                        int pos = k1 - 1;
                        while (pos >= 0 && m[pos] == q - 1) m[pos--] = 0;
                        if (pos < 0) break;
                        ++m[pos];
                    }
                    // Every possible s, achieved or not.
                    std::vector<int> s(k2, 0);
                    while (true) {
                        long expect = brute.count(s) ? brute[s] : 0;
                        if (exact_pair_count(s, q, k1, k2) != expect) {
                            detail = "mismatch";
                            return false;
                        }
                        ++checked;
                        int pos = k2 - 1;
                        while (pos >= 0 && s[pos] == 2 * q - 2) s[pos--] = 0;
                        if (pos < 0) break;
                        ++s[pos];
                    }
                }
    }
    detail = std::to_string(checked) + " information-sums checked";
    return true;
}

bool c5_two_value_exhaustive(std::string& detail) {
    long groups = 0;
    for (long q : {2L, 3L})
        for (int n = 1; n <= 8; ++n)
            for (int k1 = 1; k1 <= std::min(4, n); ++k1)
                for (int k2 = 1; k2 <= k1; ++k2)
                    for (std::uint64_t seed = 0; seed < 50; ++seed) {
                        NestedCodePair pair = build_nested_pair(
                            q, n, k1, k2, seed, true,
                            seed % 3 == 0 ? DitherMode::zero : DitherMode::random);
                        TwoValueScan scan = two_value_scan(pair);
                        groups += scan.groups;
                        if (scan.violations != 0) {
                            detail = "violation at q=" + std::to_string(q) +
                                     " n=" + std::to_string(n);
                            return false;
                        }
                    }
    detail = std::to_string(groups) + " groups, zero violations";
    return true;
}

bool c6_exact_identities(std::string& detail) {
    Prng triple_rng(515);
    for (long q : {2L, 3L, 5L}) {
        for (std::uint64_t seed : {1ULL, 2ULL}) {
            for (bool systematic : {true, false}) {
                int n = 5, k1 = 2, k2 = 1;
                NestedCodePair pair = build_nested_pair(
                    q, n, k1, k2, seed, systematic,
                    seed % 2 ? DitherMode::random : DitherMode::zero);
                SumsetTable table = integer_sumset(pair);

                mpz_class total = 0;
                for (const auto& [key, mult] : table.z) {
                    total += mult;
                    mpq_class p(mult, table.total());
                    p.canonicalize();
                    if (p != table.prob(key)) { detail = "probability identity"; return false; }
                }
                if (total != table.total()) { detail = "mass not one"; return false; }

                auto [lo, hi] = sumset_cardinality_bounds(q, k1, k2);
                mpz_class keys = static_cast<long>(table.z.size());
                if (keys < lo || keys > hi) { detail = "cardinality bounds"; return false; }

                if (systematic) {
                    // Cardinality identity of the parity-sum sets for every s.
                    std::vector<int> s(k2, 0);
                    while (true) {
                        if (exact_pair_count(s, q, k1, k2) > 0) {
                            ParitySumSets ps = parity_sum_sets(pair, s);
                            size_t sum = 0;
                            for (const auto& [p1, g] : ps.by_p1) sum += g.size();
                            if (ps.all.size() != sum) { detail = "parity-set identity"; return false; }
                        }
                        int pos = k2 - 1;
                        while (pos >= 0 && s[pos] == 2 * q - 2) s[pos--] = 0;
                        if (pos < 0) break;
                        ++s[pos];
                    }
                } else {
                    // Permutation additivity over 1000 random codeword triples.
                    auto [Gsys, pi] = systematize(pair.G);
                    for (int rep = 0; rep < 1000; ++rep) {
                        MessagePair mp = sample_message_pair(pair, triple_rng);
                        auto [t, v] = encode_pair(pair, mp);
                        std::vector<int> w(n);
                        for (int i = 0; i < n; ++i) w[i] = t.e[i] + v.e[i];
                        auto pt = pi.apply(t.e), pv = pi.apply(v.e), pw_ = pi.apply(w);
                        for (int i = 0; i < n; ++i)
                            if (pt[i] + pv[i] != pw_[i]) { detail = "permutation additivity"; return false; }
                    }
                }
            }
        }
    }
    return true;
}

bool c7_coverage_bound(std::string& detail) {
    struct Instance { long q; int n, k; std::uint64_t seed; };
    std::vector<Instance> instances;
    std::uint64_t seed = 1;
    for (long q : {2L, 3L})
        for (int n : {8, 12, 16, 20, 18})
            for (int rep = 0; rep < 2; ++rep) {
                int k = std::max(1, n / 4 + rep);
                instances.push_back({q, n, k, seed++});
            }
    // 2 q-values * 5 n-values * 2 reps = 20 instances.
    for (const Instance& inst : instances) {
        NestedCodePair pair =
            build_nested_pair(inst.q, inst.n, inst.k, inst.k, inst.seed, true,
                              DitherMode::zero);
        double delta = default_delta(inst.n);
        // Exact mass of the typical sumset; from the full table when it fits,
        // otherwise from the closed form over information-sum types.
        mpq_class exact;
        if (pow_mpz(inst.q, 2 * inst.k) <= kEnumerationCap && inst.q != 2) {
            SumsetTable table = integer_sumset(pair);
            exact = normal_typical_sumset(pair, table, delta).covered_mass;
        } else if (inst.q == 2) {
            exact = kn_stats_binary(pair, delta).covered_mass;
        } else {
            exact = exact_coverage(inst.q, inst.k, delta);
        }
        if (exact != exact_coverage(inst.q, inst.k, delta)) {
            detail = "instance mass deviates from closed form";
            return false;
        }
        double bound = 1.0 - 4.0 * inst.q * std::exp(-2.0 * inst.k * delta * delta);
        if (exact.get_d() < bound - 1e-12) {
            detail = "coverage bound violated";
            return false;
        }
        McEstimate mc = mc_coverage(pair, delta, 10000, inst.seed + 1000);
        if (std::abs(mc.estimate - exact.get_d()) > 3 * mc.standard_error + 1e-9) {
            detail = "monte carlo disagrees at q=" + std::to_string(inst.q) +
                     " n=" + std::to_string(inst.n);
            return false;
        }
    }
    detail = "20 instances";
    return true;
}

bool c8_convergence_trend(std::string& detail) {
    bool pass = true;
    std::ostringstream note;
    for (double rate : {0.25, 0.75}) {
        std::vector<double> size_gap, ent_gap;
        for (int n : {8, 12, 16, 20}) {
            int k = static_cast<int>(std::lround(n * rate));
            double delta = default_delta(n);
            double mean_log = 0, mean_ent = 0;
            const int seeds = 10;
            for (std::uint64_t seed = 0; seed < seeds; ++seed) {
                NestedCodePair pair =
                    build_nested_pair(2, n, k, k, 100 + seed, true, DitherMode::zero);
                KnStats st = kn_stats_binary(pair, delta);
                mean_log += std::log2(st.kn_size.get_d()) / n;
                mean_ent += st.entropy_per_symbol;
            }
            mean_log /= seeds;
            mean_ent /= seeds;
            double predicted = predicted_log_size_symmetric(rate, 2);
            size_gap.push_back(std::abs(mean_log - predicted));
            ent_gap.push_back(std::abs(mean_ent - predicted));
        }
        auto inversions = [](const std::vector<double>& g) {
            int inv = 0;
            for (size_t i = 1; i < g.size(); ++i)
                if (g[i] > g[i - 1] + 1e-12) ++inv;
            return inv;
        };
        int si = inversions(size_gap), ei = inversions(ent_gap);
        note << "R=" << rate << " size-gaps";
        for (double g : size_gap) note << " " << g;
        note << " (inv " << si << "), entropy-gaps";
        for (double g : ent_gap) note << " " << g;
        note << " (inv " << ei << "); ";
        if (si > 1 || ei > 1) pass = false;
        if (size_gap.back() > 0.2 || ent_gap.back() > 0.2) pass = false;
    }
    detail = note.str();
    return pass;
}

bool c9_mac_rate_identity(std::string& detail) {
    for (long q : {2L, 3L, 5L}) {
        ChannelModel ch =
            load_channel(channels_dir + "/adder_q" + std::to_string(q) + ".json");
        AchievableRate r = achievable_rate(ch);
        if (std::abs(r.rate - std::log2(static_cast<double>(q))) > 1e-9) {
            detail = "adder identity fails at q=" + std::to_string(q);
            return false;
        }
    }
    Prng rng(321);
    for (int rep = 0; rep < 100; ++rep) {
        long q = rep % 3 == 0 ? 3 : 2;
        int x1 = 2 + rep % 2, x2 = 2, y = 2 + rep % 3;
        auto random_row = [&](int width) {
            std::vector<double> row(width);
            double total = 0;
            for (auto& x : row) { x = -std::log(1.0 - rng.uniform01()); total += x; }
            for (auto& x : row) x /= total;
            return row;
        };
        ChannelModel ch;
        ch.q = q;
        ch.x1_size = x1;
        ch.x2_size = x2;
        ch.y_size = y;
        for (long u = 0; u < q; ++u) {
            ch.px1_given_u.push_back(random_row(x1));
            ch.px2_given_u.push_back(random_row(x2));
        }
        for (int i = 0; i < x1 * x2; ++i) ch.py_given_x1x2.push_back(random_row(y));
        ch.validate();
        JointWY j = joint_wy(ch);
        std::vector<double> pw_m(j.p.size(), 0.0), py(j.y_size, 0.0), pj;
        for (size_t w = 0; w < j.p.size(); ++w)
            for (int yy = 0; yy < j.y_size; ++yy) {
                pw_m[w] += j.p[w][yy];
                py[yy] += j.p[w][yy];
                pj.push_back(j.p[w][yy]);
            }
        double oracle = entropy_bits(pw_m) + entropy_bits(py) - entropy_bits(pj);
        if (std::abs(mutual_information(j) - oracle) > 1e-9) {
            detail = "mutual information oracle mismatch";
            return false;
        }
    }
    return true;
}

bool c10_mac_simulation(std::string& detail) {
    ChannelModel adder = load_channel(channels_dir + "/adder_q2.json");
    ChannelModel useless = load_channel(channels_dir + "/useless_q2.json");
    NestedCodePair pair = build_nested_pair(2, 12, 4, 4, 1, true, DitherMode::zero);
    double delta = default_delta(12);

    SimResult a = simulate_computation(pair, adder, delta, 2000, 1);
    SimResult b = simulate_computation(pair, adder, delta, 2000, 1);
    if (!(a == b)) { detail = "not reproducible"; return false; }
    SimResult u = simulate_computation(pair, useless, delta, 2000, 1);
    detail = "adder error_rate " + std::to_string(a.error_rate) + ", useless " +
             std::to_string(u.error_rate);
    return a.error_rate <= 0.2 && u.error_rate >= 0.9;
}

bool c11_parity_distribution(std::string& detail) {
    std::ostringstream note;
    for (long q : {2L, 3L, 5L}) {
        // Pool parity-sum entries over random codes, messages, and dithers.
        const int n = 8, k1 = 3, k2 = 2;
        const int per_draw = n - k2;
        const long target = 10000;
        std::vector<long> counts(2 * q - 1, 0);
        long total = 0;
        std::uint64_t draw = 0;
        while (total < target) {
            NestedCodePair pair = build_nested_pair(q, n, k1, k2, 9000 + draw, true,
                                                    DitherMode::random);
            Prng rng = Prng::derive(9000 + draw, {6});
            MessagePair mp = sample_message_pair(pair, rng);
            auto [t, v] = encode_pair(pair, mp);
            for (int i = k2; i < n && total < target; ++i) {
                ++counts[t.e[i] + v.e[i]];
                ++total;
            }
            ++draw;
        }
        (void)per_draw;
        RationalPmf pmf = pw(q);
        double stat = 0;
        for (int a = 0; a < pmf.size(); ++a) {
            double expect = pmf.prob(a) * total;
            stat += (counts[a] - expect) * (counts[a] - expect) / expect;
        }
        boost::math::chi_squared dist(pmf.size() - 1);
        double critical = boost::math::quantile(dist, 1.0 - 1e-3);
        note << "q=" << q << " stat " << stat << " critical " << critical << "; ";
        if (stat > critical) { detail = note.str(); return false; }
    }
    detail = note.str();
    return true;
}

bool c12_gaussian_binomial(std::string& detail) {
    if (gaussian_binomial(2, 1, 2) != 3 || gaussian_binomial(4, 2, 2) != 35) {
        detail = "closed form off";
        return false;
    }
    // Subspace-enumeration oracle.
    auto count_subspaces = [](int n, int k, long q) {
        std::vector<std::vector<int>> vectors;
        std::vector<int> v(n, 0);
        while (true) {
            vectors.push_back(v);
            int pos = n - 1;
            while (pos >= 0 && v[pos] == q - 1) v[pos--] = 0;
            if (pos < 0) break;
            ++v[pos];
        }
        std::set<std::set<std::vector<int>>> spaces;
        std::vector<int> idx(k, 0);
        while (true) {
            GFMatrix G(q, n, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < n; ++i) G.at(i, j) = vectors[idx[j]][i];
            if (rank(G) == k) {
                std::set<std::vector<int>> span;
                std::vector<int> m(k, 0);
                while (true) {
                    span.insert(mat_vec_mod(G, GFVector(q, m)).e);
                    int pos = k - 1;
                    while (pos >= 0 && m[pos] == q - 1) m[pos--] = 0;
                    if (pos < 0) break;
                    ++m[pos];
                }
                spaces.insert(span);
            }
            int pos = k - 1;
            while (pos >= 0 && idx[pos] == static_cast<int>(vectors.size()) - 1)
                idx[pos--] = 0;
            if (pos < 0) break;
            ++idx[pos];
        }
        return static_cast<long>(spaces.size());
    };
    if (gaussian_binomial(2, 1, 2) != count_subspaces(2, 1, 2)) { detail = "oracle (2,1)"; return false; }
    if (gaussian_binomial(4, 2, 2) != count_subspaces(4, 2, 2)) { detail = "oracle (4,2)"; return false; }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) channels_dir = argv[1];

    run(1, "entropy-deficit table over primes up to 997", c1_deficit_table);
    run(2, "entropies of sums over example real supports", c2_intro_entropies);
    run(3, "shrink-threshold rates for q=11 and q=101", c3_shrink_thresholds);
    run(4, "closed-form pair counts vs brute force", c4_pair_count_oracle);
    run(5, "two-value property across seeded pairs", c5_two_value_exhaustive);
    run(6, "exact distribution and cardinality identities", c6_exact_identities);
    run(7, "coverage bound and monte carlo agreement", c7_coverage_bound);
    run(8, "size/entropy convergence trend at q=2", c8_convergence_trend);
    run(9, "adder rate identity and mutual-information oracle", c9_mac_rate_identity);
    run(10, "sum-decoder simulation sanity", c10_mac_simulation);
    run(11, "parity-sum chi-squared goodness of fit", c11_parity_distribution);
    run(12, "subspace counts vs enumeration oracle", c12_gaussian_binomial);

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(failures) + " CRITERIA FAILED")
              << std::endl;
    return failures;
}

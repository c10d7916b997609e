#ifndef SUMCODE_CODES_HPP
#define SUMCODE_CODES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "field.hpp"
#include "rng.hpp"

namespace sumcode {

enum class DitherMode { zero, random };

inline std::string to_string(DitherMode m) {
    return m == DitherMode::zero ? "zero" : "random";
}
inline DitherMode dither_mode_from_string(const std::string& s) {
    if (s == "zero") return DitherMode::zero;
    if (s == "random") return DitherMode::random;
    throw std::invalid_argument("unknown dither_mode: " + s);
}

/// An (n, k) linear code over F_q, optionally shifted by a dither vector:
/// codewords are G*m + d (mod q) over all messages m.
struct LinearCode {
    long q;
    int n, k;
    GFMatrix generator;  // n x k
    GFVector dither;     // length n

    LinearCode(long q_, GFMatrix G, GFVector d)
        : q(q_), n(G.rows), k(G.cols), generator(std::move(G)), dither(std::move(d)) {
        if (generator.q != q || dither.q != q)
            throw std::invalid_argument("LinearCode: field mismatch");
        if (dither.length() != n)
            throw std::invalid_argument("LinearCode: dither length mismatch");
        if (rank(generator) != k)
            throw std::invalid_argument("LinearCode: generator is rank-deficient");
    }
};

/// Nested pair C2 <= C1 sharing a generator G (n x k1). In the systematic
/// form G = [I_{k1}; Q] and C2's message is (n'; H n') for a mixing matrix
/// H ((k1-k2) x k2), so both codes still encode through the same G.
struct NestedCodePair {
    long q;
    int n, k1, k2;
    GFMatrix G;                     // n x k1
    std::optional<GFMatrix> H;      // (k1-k2) x k2, systematic form only
    GFVector d1, d2;
    bool systematic;
    std::optional<Permutation> pi;  // set when a plain pair has been systematized
    std::uint64_t seed = 0;
    DitherMode dither_mode = DitherMode::zero;

    NestedCodePair(long q_, int n_, int k1_, int k2_, GFMatrix G_,
                   std::optional<GFMatrix> H_, GFVector d1_, GFVector d2_,
                   bool systematic_)
        : q(q_), n(n_), k1(k1_), k2(k2_), G(std::move(G_)), H(std::move(H_)),
          d1(std::move(d1_)), d2(std::move(d2_)), systematic(systematic_) {
        if (!(1 <= k2 && k2 <= k1 && k1 <= n))
            throw std::invalid_argument("NestedCodePair: need 1 <= k2 <= k1 <= n");
        if (G.rows != n || G.cols != k1)
            throw std::invalid_argument("NestedCodePair: generator shape mismatch");
        if (d1.length() != n || d2.length() != n)
            throw std::invalid_argument("NestedCodePair: dither length mismatch");
        if (systematic) {
            // H exists only when there are mixed coordinates (k1 > k2).
            if (k1 > k2 && (!H || H->rows != k1 - k2 || H->cols != k2))
                throw std::invalid_argument("NestedCodePair: H shape mismatch");
            if (k1 == k2 && H)
                throw std::invalid_argument("NestedCodePair: H given but k1 == k2");
            for (int i = 0; i < k1; ++i)
                for (int j = 0; j < k1; ++j)
                    if (G.at(i, j) != (i == j ? 1 : 0))
                        throw std::invalid_argument(
                            "NestedCodePair: systematic generator must start with I_k1");
        }
    }

    /// C2's full-length message for a given n': plain pairs embed n' into the
    /// first k2 coordinates (zero-padded); systematic pairs append H n'.
    GFVector lift_message(const GFVector& nprime) const {
        if (nprime.length() != k2)
            throw std::invalid_argument("lift_message: wrong message length");
        std::vector<int> full(k1, 0);
        for (int i = 0; i < k2; ++i) full[i] = nprime.e[i];
        if (systematic && k1 > k2) {
            GFVector tail = mat_vec_mod(*H, nprime);
            for (int i = 0; i < k1 - k2; ++i) full[k2 + i] = tail.e[i];
        }
        return GFVector(q, std::move(full));
    }
};

struct MessagePair {
    GFVector m;       // length k1
    GFVector nprime;  // length k2
};

namespace detail {

inline GFMatrix random_matrix(long q, int rows, int cols, Prng& rng) {
    GFMatrix M(q, rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            M.at(r, c) = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(q)));
    return M;
}

inline GFVector random_vector(long q, int n, Prng& rng) {
    std::vector<int> e(n);
    for (int i = 0; i < n; ++i)
        e[i] = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(q)));
    return GFVector(q, std::move(e));
}

}  // namespace detail

/// Draws a seeded pair. Plain form: G i.i.d. uniform, redrawn from a derived
/// stream (seed, attempt) until full column rank, at most 64 attempts.
/// Systematic form: G = [I_{k1}; Q] with Q, H i.i.d. uniform (always full
/// rank). Dithers are zero or uniform per dither_mode.
inline NestedCodePair build_nested_pair(long q, int n, int k1, int k2,
                                        std::uint64_t seed, bool systematic,
                                        DitherMode dither_mode) {
    FieldParam check(q);
    if (!(1 <= k2 && k2 <= k1 && k1 <= n))
        throw std::invalid_argument("build_nested_pair: need 1 <= k2 <= k1 <= n");

    std::optional<GFMatrix> G;
    std::optional<GFMatrix> H;
    if (systematic) {
        Prng rng = Prng::derive(seed, {0});
        GFMatrix Gm(q, n, k1);
        for (int i = 0; i < k1; ++i) Gm.at(i, i) = 1;
        if (n > k1) {
            GFMatrix Q = detail::random_matrix(q, n - k1, k1, rng);
            for (int r = 0; r < n - k1; ++r)
                for (int c = 0; c < k1; ++c) Gm.at(k1 + r, c) = Q.at(r, c);
        }
        if (k1 > k2) H = detail::random_matrix(q, k1 - k2, k2, rng);
        G = std::move(Gm);
    } else {
        for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
            Prng rng = Prng::derive(seed, {attempt});
            GFMatrix Gm = detail::random_matrix(q, n, k1, rng);
            if (rank(Gm) == k1) { G = std::move(Gm); break; }
        }
        if (!G)
            throw std::runtime_error(
                "build_nested_pair: 64 consecutive rank-deficient draws");
    }

    GFVector d1 = GFVector::zeros(q, n), d2 = GFVector::zeros(q, n);
    if (dither_mode == DitherMode::random) {
        Prng rng = Prng::derive(seed, {1});
        d1 = detail::random_vector(q, n, rng);
        d2 = detail::random_vector(q, n, rng);
    }

    NestedCodePair pair(q, n, k1, k2, std::move(*G), std::move(H), std::move(d1),
                        std::move(d2), systematic);
    pair.seed = seed;
    pair.dither_mode = dither_mode;
    return pair;
}

inline std::pair<GFVector, GFVector> encode_pair(const NestedCodePair& pair,
                                                 const MessagePair& mp) {
    if (mp.m.length() != pair.k1 || mp.nprime.length() != pair.k2)
        throw std::invalid_argument("encode_pair: message length mismatch");
    GFVector t = mat_vec_mod(pair.G, mp.m);
    GFVector v = mat_vec_mod(pair.G, pair.lift_message(mp.nprime));
    for (int i = 0; i < pair.n; ++i) {
        t.e[i] = static_cast<int>((t.e[i] + pair.d1.e[i]) % pair.q);
        v.e[i] = static_cast<int>((v.e[i] + pair.d2.e[i]) % pair.q);
    }
    return {t, v};
}

inline constexpr std::uint64_t kEnumerationCap = 1ULL << 24;

/// All q^k codewords in lexicographic message order (last coordinate fastest).
inline std::vector<GFVector> enumerate_codewords(const LinearCode& code) {
    mpz_class count = pow_mpz(code.q, code.k);
    if (count > kEnumerationCap)
        throw std::runtime_error("enumerate_codewords: q^k exceeds enumeration cap");
    std::vector<GFVector> out;
    out.reserve(count.get_ui());
    std::vector<int> m(code.k, 0);
    while (true) {
        GFVector t = mat_vec_mod(code.generator, GFVector(code.q, m));
        for (int i = 0; i < code.n; ++i)
            t.e[i] = static_cast<int>((t.e[i] + code.dither.e[i]) % code.q);
        out.push_back(std::move(t));
        int pos = code.k - 1;
        while (pos >= 0 && m[pos] == code.q - 1) m[pos--] = 0;
        if (pos < 0) break;
        ++m[pos];
    }
    return out;
}

inline MessagePair sample_message_pair(const NestedCodePair& pair, Prng& rng) {
    std::vector<int> m(pair.k1), np(pair.k2);
    for (int i = 0; i < pair.k1; ++i)
        m[i] = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(pair.q)));
    for (int i = 0; i < pair.k2; ++i)
        np[i] = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(pair.q)));
    return {GFVector(pair.q, std::move(m)), GFVector(pair.q, std::move(np))};
}

inline std::tuple<GFVector, GFVector, MessagePair>
sample_codeword_pair(const NestedCodePair& pair, std::uint64_t seed) {
    Prng rng = Prng::derive(seed, {2});
    MessagePair mp = sample_message_pair(pair, rng);
    auto [t, v] = encode_pair(pair, mp);
    return {t, v, mp};
}

// -- JSON serialization for experiment replay --------------------------------

inline nlohmann::json code_pair_to_json(const NestedCodePair& pair) {
    nlohmann::json j;
    j["q"] = pair.q;
    j["n"] = pair.n;
    j["k1"] = pair.k1;
    j["k2"] = pair.k2;
    j["seed"] = pair.seed;
    j["systematic"] = pair.systematic;
    j["dither_mode"] = to_string(pair.dither_mode);
    j["generator"] = pair.G.e;
    if (pair.systematic && pair.k1 > pair.k2)
        j["H"] = pair.H->e;
    else
        j["H"] = nlohmann::json::array();
    j["d1"] = pair.d1.e;
    j["d2"] = pair.d2.e;
    return j;
}

inline NestedCodePair code_pair_from_json(const nlohmann::json& j) {
    long q = j.at("q").get<long>();
    int n = j.at("n").get<int>(), k1 = j.at("k1").get<int>(), k2 = j.at("k2").get<int>();
    bool systematic = j.at("systematic").get<bool>();
    GFMatrix G(q, n, k1, j.at("generator").get<std::vector<int>>());
    std::optional<GFMatrix> H;
    if (systematic && k1 > k2)
        H = GFMatrix(q, k1 - k2, k2, j.at("H").get<std::vector<int>>());
    NestedCodePair pair(q, n, k1, k2, std::move(G), std::move(H),
                        GFVector(q, j.at("d1").get<std::vector<int>>()),
                        GFVector(q, j.at("d2").get<std::vector<int>>()), systematic);
    pair.seed = j.at("seed").get<std::uint64_t>();
    pair.dither_mode = dither_mode_from_string(j.at("dither_mode").get<std::string>());
    return pair;
}

}  // namespace sumcode

#endif

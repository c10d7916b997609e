#ifndef SUMCODE_FIELD_HPP
#define SUMCODE_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace sumcode {

/// Deterministic trial-division primality check. Sufficient for the field
/// sizes this library works with (q fits in a machine word).
inline bool is_prime(long q) {
    if (q < 2) return false;
    if (q < 4) return true;
    if (q % 2 == 0) return false;
    for (long d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

/// Prime field parameter. Construction validates primality; composite q is
/// rejected rather than silently reduced.
struct FieldParam {
    long q;

    explicit FieldParam(long q_) : q(q_) {
        if (!is_prime(q))
            throw std::invalid_argument("FieldParam: q = " + std::to_string(q) +
                                        " is not prime");
    }
};

struct GFVector {
    long q;
    std::vector<int> e;

    GFVector(long q_, std::vector<int> entries) : q(q_), e(std::move(entries)) {
        FieldParam check(q);
        for (int x : e)
            if (x < 0 || x >= q)
                throw std::invalid_argument("GFVector: entry out of [0, q-1]");
    }
    static GFVector zeros(long q, int n) { return GFVector(q, std::vector<int>(n, 0)); }
    int length() const { return static_cast<int>(e.size()); }

    bool operator==(const GFVector& o) const { return q == o.q && e == o.e; }
};

/// Dense matrix over F_q, row-major.
struct GFMatrix {
    long q;
    int rows, cols;
    std::vector<int> e;

    GFMatrix(long q_, int rows_, int cols_)
        : q(q_), rows(rows_), cols(cols_), e(static_cast<size_t>(rows_) * cols_, 0) {
        FieldParam check(q);
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("GFMatrix: dimensions must be positive");
    }
    GFMatrix(long q_, int rows_, int cols_, std::vector<int> entries)
        : q(q_), rows(rows_), cols(cols_), e(std::move(entries)) {
        FieldParam check(q);
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("GFMatrix: dimensions must be positive");
        if (e.size() != static_cast<size_t>(rows) * cols)
            throw std::invalid_argument("GFMatrix: entry count mismatch");
        for (int x : e)
            if (x < 0 || x >= q)
                throw std::invalid_argument("GFMatrix: entry out of [0, q-1]");
    }

    int& at(int r, int c) { return e[static_cast<size_t>(r) * cols + c]; }
    int at(int r, int c) const { return e[static_cast<size_t>(r) * cols + c]; }

    static GFMatrix identity(long q, int n) {
        GFMatrix m(q, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const GFMatrix& o) const {
        return q == o.q && rows == o.rows && cols == o.cols && e == o.e;
    }
};

/// Bijection on [0, n-1]; images[i] is the source index of position i, so
/// applying the permutation maps x to y with y[i] = x[images[i]].
struct Permutation {
    std::vector<int> images;

    explicit Permutation(std::vector<int> images_) : images(std::move(images_)) {
        std::vector<char> seen(images.size(), 0);
        for (int i : images) {
            if (i < 0 || i >= static_cast<int>(images.size()) || seen[i])
                throw std::invalid_argument("Permutation: not a bijection");
            seen[i] = 1;
        }
    }
    static Permutation identity(int n) {
        std::vector<int> im(n);
        for (int i = 0; i < n; ++i) im[i] = i;
        return Permutation(std::move(im));
    }
    int size() const { return static_cast<int>(images.size()); }

    template <typename Vec>
    Vec apply(const Vec& x) const {
        Vec y = x;
        for (int i = 0; i < size(); ++i) y[i] = x[images[i]];
        return y;
    }
    bool is_identity() const {
        for (int i = 0; i < size(); ++i)
            if (images[i] != i) return false;
        return true;
    }
};

inline long inv_mod(long a, long q) {
    // Fermat; q is prime and a != 0 mod q.
    a %= q;
    if (a == 0) throw std::invalid_argument("inv_mod: zero has no inverse");
    long result = 1, base = a, exp = q - 2;
    while (exp > 0) {
        if (exp & 1) result = result * base % q;
        base = base * base % q;
        exp >>= 1;
    }
    return result;
}

inline GFVector mat_vec_mod(const GFMatrix& G, const GFVector& m) {
    if (G.q != m.q) throw std::invalid_argument("mat_vec_mod: field mismatch");
    if (G.cols != m.length()) throw std::invalid_argument("mat_vec_mod: dimension mismatch");
    std::vector<int> out(G.rows, 0);
    for (int r = 0; r < G.rows; ++r) {
        long acc = 0;
        for (int c = 0; c < G.cols; ++c) acc += static_cast<long>(G.at(r, c)) * m.e[c];
        out[r] = static_cast<int>(acc % G.q);
    }
    return GFVector(G.q, std::move(out));
}

/// Rank over F_q by Gaussian elimination on a working copy.
inline int rank(GFMatrix M) {
    const long q = M.q;
    int r = 0;
    for (int c = 0; c < M.cols && r < M.rows; ++c) {
        int pivot = -1;
        for (int i = r; i < M.rows; ++i)
            if (M.at(i, c) != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        for (int j = 0; j < M.cols; ++j) std::swap(M.at(r, j), M.at(pivot, j));
        long inv = inv_mod(M.at(r, c), q);
        for (int j = 0; j < M.cols; ++j) M.at(r, j) = static_cast<int>(M.at(r, j) * inv % q);
        for (int i = 0; i < M.rows; ++i) {
            if (i == r || M.at(i, c) == 0) continue;
            long f = M.at(i, c);
            for (int j = 0; j < M.cols; ++j)
                M.at(i, j) = static_cast<int>(((M.at(i, j) - f * M.at(r, j)) % q + q) % q);
        }
        ++r;
    }
    return r;
}

/// Brings a full-column-rank generator into the [I_k; Q] shape via invertible
/// column operations plus a row permutation. Pivots are chosen greedily
/// left-to-right over columns, topmost unused nonzero row per column, which
/// makes the returned permutation deterministic. The permuted code equals the
/// span of the returned generator.
inline std::pair<GFMatrix, Permutation> systematize(const GFMatrix& G) {
    const long q = G.q;
    const int n = G.rows, k = G.cols;
    GFMatrix A = G;
    std::vector<int> pivot_row(k, -1);
    std::vector<char> used(n, 0);
    for (int j = 0; j < k; ++j) {
        int r = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i] && A.at(i, j) != 0) { r = i; break; }
        if (r < 0) throw std::invalid_argument("systematize: generator is rank-deficient");
        long inv = inv_mod(A.at(r, j), q);
        for (int i = 0; i < n; ++i) A.at(i, j) = static_cast<int>(A.at(i, j) * inv % q);
        for (int jj = 0; jj < k; ++jj) {
            if (jj == j || A.at(r, jj) == 0) continue;
            long f = A.at(r, jj);
            for (int i = 0; i < n; ++i)
                A.at(i, jj) = static_cast<int>(((A.at(i, jj) - f * A.at(i, j)) % q + q) % q);
        }
        pivot_row[j] = r;
        used[r] = 1;
    }
    // Pivot rows first (in column order), then the rest in increasing order.
    std::vector<int> images;
    images.reserve(n);
    for (int j = 0; j < k; ++j) images.push_back(pivot_row[j]);
    for (int i = 0; i < n; ++i)
        if (!used[i]) images.push_back(i);
    Permutation pi(std::move(images));

    GFMatrix Gsys(q, n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) Gsys.at(i, j) = A.at(pi.images[i], j);
    return {Gsys, pi};
}

/// Number of k-dimensional subspaces of F_q^n, exact.
inline mpz_class gaussian_binomial(int n, int k, long q) {
    if (k < 0 || k > n) throw std::invalid_argument("gaussian_binomial: need 0 <= k <= n");
    mpz_class num = 1, den = 1, qz = q;
    mpz_class qn, qk;
    mpz_pow_ui(qn.get_mpz_t(), qz.get_mpz_t(), n);
    mpz_pow_ui(qk.get_mpz_t(), qz.get_mpz_t(), k);
    mpz_class qi = 1;
    for (int i = 0; i < k; ++i) {
        num *= qn - qi;
        den *= qk - qi;
        qi *= qz;
    }
    mpz_class out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

inline mpz_class pow_mpz(long base, long exp) {
    mpz_class b = base, out;
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(exp));
    return out;
}

}  // namespace sumcode

#endif

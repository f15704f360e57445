#include "gaps/zp.hpp"

#include <string>

#include "gaps/errors.hpp"

namespace gaps {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 powmod64(u64 base, u64 e, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace

FieldSpec::FieldSpec(std::uint64_t prime) : p(prime) {
    if (p < 3 || (p & 1) == 0)
        throw InvalidArgument("FieldSpec: modulus must be an odd prime >= 3, got " + std::to_string(p));
    if (p > 0xFFFFFFFFull)
        throw InvalidArgument("FieldSpec: modulus too large, p^2 must fit in 64 bits");
    if (!is_prime_u64(p))
        throw InvalidArgument("FieldSpec: " + std::to_string(p) + " is not prime");
}

FieldElem FieldSpec::pow(FieldElem base, std::uint64_t e) const {
    return powmod64(base, e, p);
}

ZpMatrix ZpMatrix::identity(int n) {
    ZpMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FieldElem zp_inv(FieldElem z, const FieldSpec& spec) {
    if (z == 0) throw InvalidArgument("zp_inv: 0 is not invertible");
    // Extended Euclid on (z, p); gcd is 1 since p is prime.
    std::int64_t r0 = static_cast<std::int64_t>(z), r1 = static_cast<std::int64_t>(spec.p);
    std::int64_t x0 = 1, x1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t x2 = x0 - q * x1;
        r0 = r1;
        r1 = r2;
        x0 = x1;
        x1 = x2;
    }
    return spec.reduce(x0);
}

bool zp_euler_is_residue(FieldElem z, const FieldSpec& spec) {
    if (z == 0) return true;
    return spec.pow(z, (spec.p - 1) / 2) == 1;
}

std::optional<std::pair<FieldElem, FieldElem>> zp_sqrt(FieldElem z, const FieldSpec& spec) {
    const u64 p = spec.p;
    if (z == 0) return std::make_pair(0ull, 0ull);
    if (!zp_euler_is_residue(z, spec)) return std::nullopt;

    u64 r;
    if (p % 4 == 3) {
        r = spec.pow(z, (p + 1) / 4);
    } else {
        // Tonelli-Shanks. Write p - 1 = q * 2^s with q odd.
        u64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        // Any quadratic non-residue works as the generator seed.
        u64 n = 2;
        while (zp_euler_is_residue(n, spec)) ++n;

        u64 c = spec.pow(n, q);
        u64 t = spec.pow(z, q);
        r = spec.pow(z, (q + 1) / 2);
        int m = s;
        while (t != 1) {
            u64 t2 = t;
            int i = 0;
            while (t2 != 1) {
                t2 = spec.mul(t2, t2);
                ++i;
            }
            u64 b = c;
            for (int j = 0; j < m - i - 1; ++j) b = spec.mul(b, b);
            r = spec.mul(r, b);
            c = spec.mul(b, b);
            t = spec.mul(t, c);
            m = i;
        }
    }
    return std::make_pair(r, spec.neg(r));
}

std::pair<ZpMatrix, std::vector<int>> zp_rref(const ZpMatrix& m, const FieldSpec& spec) {
    ZpMatrix r = m;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < r.cols && row < r.rows; ++col) {
        int piv = -1;
        for (int i = row; i < r.rows; ++i) {
            if (r.at(i, col) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(row, j));
        const FieldElem inv = zp_inv(r.at(row, col), spec);
        for (int j = col; j < r.cols; ++j) r.at(row, j) = spec.mul(r.at(row, j), inv);
        for (int i = 0; i < r.rows; ++i) {
            if (i == row || r.at(i, col) == 0) continue;
            const FieldElem f = r.at(i, col);
            for (int j = col; j < r.cols; ++j)
                r.at(i, j) = spec.sub(r.at(i, j), spec.mul(f, r.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {r, pivots};
}

ZpMatrix zp_nullspace(const ZpMatrix& m, const FieldSpec& spec) {
    auto [r, pivots] = zp_rref(m, spec);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<int> free_cols;
    for (int c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    ZpMatrix basis(m.cols, static_cast<int>(free_cols.size()));
    for (int k = 0; k < static_cast<int>(free_cols.size()); ++k) {
        const int f = free_cols[k];
        basis.at(f, k) = 1;
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i)
            basis.at(pivots[i], k) = spec.neg(r.at(i, f));
    }
    return basis;
}

std::vector<FieldElem> zp_rand_unit(int n, const FieldSpec& spec, Rng& rng, int max_tries) {
    if (n < 1) throw InvalidArgument("zp_rand_unit: n must be >= 1");
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<FieldElem> z(n);
        for (auto& v : z) v = rng.below(spec.p);
        FieldElem norm2 = 0;
        for (auto v : z) norm2 = spec.add(norm2, spec.mul(v, v));
        if (norm2 == 0 || !zp_euler_is_residue(norm2, spec)) continue;
        const FieldElem root = zp_sqrt(norm2, spec)->first;
        const FieldElem scale = zp_inv(root, spec);
        for (auto& v : z) v = spec.mul(v, scale);
        return z;
    }
    throw GenerationFailure("zp_rand_unit: exceeded rejection bound of " + std::to_string(max_tries));
}

ZpMatrix zp_quat_to_rotation(const std::vector<FieldElem>& q, const FieldSpec& spec) {
    if (q.size() != 4) throw InvalidArgument("zp_quat_to_rotation: expected 4 components");
    const FieldElem s = q[0];
    const FieldElem u[3] = {q[1], q[2], q[3]};
    FieldElem norm2 = spec.mul(s, s);
    for (auto v : u) norm2 = spec.add(norm2, spec.mul(v, v));
    if (norm2 != 1) throw InvalidArgument("zp_quat_to_rotation: quaternion is not unit-norm");

    FieldElem uu = 0;
    for (auto v : u) uu = spec.add(uu, spec.mul(v, v));
    const FieldElem trace_term = spec.sub(spec.mul(s, s), uu);

    // [u]x, the cross-product matrix.
    ZpMatrix ux(3, 3);
    ux.at(0, 1) = spec.neg(u[2]);
    ux.at(0, 2) = u[1];
    ux.at(1, 0) = u[2];
    ux.at(1, 2) = spec.neg(u[0]);
    ux.at(2, 0) = spec.neg(u[1]);
    ux.at(2, 1) = u[0];

    ZpMatrix r(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            FieldElem v = spec.mul(u[i], u[j]);
            v = spec.sub(v, spec.mul(s, ux.at(i, j)));
            v = spec.mul(2 % spec.p, v);
            if (i == j) v = spec.add(v, trace_term);
            r.at(i, j) = v;
        }
    return r;
}

ZpMatrix zp_matmul(const ZpMatrix& a, const ZpMatrix& b, const FieldSpec& spec) {
    if (a.cols != b.rows) throw InvalidArgument("zp_matmul: dimension mismatch");
    ZpMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const FieldElem v = a.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < b.cols; ++j)
                c.at(i, j) = spec.add(c.at(i, j), spec.mul(v, b.at(k, j)));
        }
    return c;
}

ZpMatrix zp_transpose(const ZpMatrix& m) {
    ZpMatrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

FieldElem zp_det3(const ZpMatrix& m, const FieldSpec& spec) {
    if (m.rows != 3 || m.cols != 3) throw InvalidArgument("zp_det3: expected 3x3");
    FieldElem d = 0;
    d = spec.add(d, spec.mul(m.at(0, 0), spec.sub(spec.mul(m.at(1, 1), m.at(2, 2)), spec.mul(m.at(1, 2), m.at(2, 1)))));
    d = spec.sub(d, spec.mul(m.at(0, 1), spec.sub(spec.mul(m.at(1, 0), m.at(2, 2)), spec.mul(m.at(1, 2), m.at(2, 0)))));
    d = spec.add(d, spec.mul(m.at(0, 2), spec.sub(spec.mul(m.at(1, 0), m.at(2, 1)), spec.mul(m.at(1, 1), m.at(2, 0)))));
    return d;
}

}  // namespace gaps

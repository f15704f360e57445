#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <set>

#include "gaps/errors.hpp"
#include "gaps/rng.hpp"
#include "gaps/zp.hpp"

using namespace gaps;

namespace {

// Brute-force rank over Z_p by minor expansion, valid for n <= 4.
FieldElem det_laplace(const ZpMatrix& m, std::vector<int> rows, std::vector<int> cols,
                      const FieldSpec& f) {
    const size_t n = rows.size();
    if (n == 1) return m.at(rows[0], cols[0]);
    FieldElem acc = 0;
    for (size_t j = 0; j < n; ++j) {
        std::vector<int> sub_rows(rows.begin() + 1, rows.end());
        std::vector<int> sub_cols;
        for (size_t c = 0; c < n; ++c)
            if (c != j) sub_cols.push_back(cols[c]);
        const FieldElem minor = det_laplace(m, sub_rows, sub_cols, f);
        const FieldElem term = f.mul(m.at(rows[0], cols[j]), minor);
        acc = (j % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
    }
    return acc;
}

int rank_by_minors(const ZpMatrix& m, const FieldSpec& f) {
    const int maxk = std::min(m.rows, m.cols);
    for (int k = maxk; k >= 1; --k) {
        // All k-subsets of rows and columns.
        std::vector<int> rsel(k), csel(k);
        std::function<bool(int, int)> try_rows = [&](int start, int depth) -> bool {
            if (depth == k) {
                std::function<bool(int, int)> try_cols = [&](int cstart, int cdepth) -> bool {
                    if (cdepth == k)
                        return det_laplace(m, rsel, csel, f) != 0;
                    for (int c = cstart; c < m.cols; ++c) {
                        csel[cdepth] = c;
                        if (try_cols(c + 1, cdepth + 1)) return true;
                    }
                    return false;
                };
                return try_cols(0, 0);
            }
            for (int r = start; r < m.rows; ++r) {
                rsel[depth] = r;
                if (try_rows(r + 1, depth + 1)) return true;
            }
            return false;
        };
        if (try_rows(0, 0)) return k;
    }
    return 0;
}

ZpMatrix random_matrix(int r, int c, const FieldSpec& f, Rng& rng) {
    ZpMatrix m(r, c);
    for (auto& v : m.a) v = rng.below(f.p);
    return m;
}

}  // namespace

TEST_CASE("FieldSpec validates the modulus") {
    CHECK_NOTHROW(FieldSpec(7));
    CHECK_NOTHROW(FieldSpec(31));
    CHECK_NOTHROW(FieldSpec(30011));
    CHECK_NOTHROW(FieldSpec(2147483647ull));  // 2^31 - 1
    CHECK_THROWS_AS(FieldSpec(1), InvalidArgument);
    CHECK_THROWS_AS(FieldSpec(2), InvalidArgument);
    CHECK_THROWS_AS(FieldSpec(9), InvalidArgument);
    CHECK_THROWS_AS(FieldSpec(30013 * 2ull), InvalidArgument);
    CHECK_THROWS_AS(FieldSpec(4294967311ull), InvalidArgument);  // prime but > 32 bits
}

TEST_CASE("zp_inv: worked examples and brute force") {
    const FieldSpec f7(7);
    CHECK(zp_inv(1, f7) == 1);
    CHECK(zp_inv(6, f7) == 6);
    CHECK(zp_inv(3, f7) == 5);
    CHECK_THROWS_AS(zp_inv(0, f7), InvalidArgument);

    const FieldSpec f(101);
    for (FieldElem z = 1; z < f.p; ++z) {
        FieldElem found = 0;
        for (FieldElem x = 1; x < f.p; ++x)
            if (f.mul(z, x) == 1) {
                found = x;
                break;
            }
        CHECK(zp_inv(z, f) == found);
    }
}

TEST_CASE("zp_inv: field axioms at p = 30011") {
    const FieldSpec f(30011);
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const FieldElem a = rng.below(f.p - 1) + 1;
        const FieldElem b = rng.below(f.p - 1) + 1;
        CHECK(f.mul(a, zp_inv(a, f)) == 1);
        CHECK(zp_inv(f.mul(a, b), f) == f.mul(zp_inv(b, f), zp_inv(a, f)));
    }
}

TEST_CASE("Euler's criterion examples") {
    const FieldSpec f7(7);
    CHECK(zp_euler_is_residue(0, f7));
    CHECK(zp_euler_is_residue(2, f7));       // 2^3 = 8 = 1 (mod 7)
    CHECK_FALSE(zp_euler_is_residue(3, f7));  // 3^3 = 27 = 6 (mod 7)
}

TEST_CASE("zp_sqrt: examples and exhaustive agreement with Euler") {
    const FieldSpec f7(7);
    auto r0 = zp_sqrt(0, f7);
    REQUIRE(r0.has_value());
    CHECK(r0->first == 0);
    CHECK(r0->second == 0);

    auto r2 = zp_sqrt(2, f7);
    REQUIRE(r2.has_value());
    CHECK(std::set<FieldElem>{r2->first, r2->second} == std::set<FieldElem>{3, 4});
    CHECK_FALSE(zp_sqrt(3, f7).has_value());

    // Both residue classes of p mod 4, exhaustive brute-force cross-check.
    for (std::uint64_t p : {7ull, 31ull, 13ull, 17ull, 29ull, 41ull}) {
        const FieldSpec f(p);
        for (FieldElem z = 0; z < p; ++z) {
            std::set<FieldElem> expect;
            for (FieldElem r = 0; r < p; ++r)
                if (f.mul(r, r) == z) expect.insert(r);
            auto got = zp_sqrt(z, f);
            CHECK(got.has_value() == !expect.empty());
            CHECK(got.has_value() == zp_euler_is_residue(z, f));
            if (got) {
                CHECK(expect.count(got->first) == 1);
                CHECK(expect.count(got->second) == 1);
                CHECK(f.mul(got->first, got->first) == z);
            }
        }
    }
}

TEST_CASE("zp_rref: examples") {
    const FieldSpec f5(5);
    SUBCASE("identity is fixed") {
        const ZpMatrix id = ZpMatrix::identity(3);
        auto [r, piv] = zp_rref(id, f5);
        CHECK(r == id);
        CHECK(piv == std::vector<int>{0, 1, 2});
    }
    SUBCASE("dependent rows collapse") {
        ZpMatrix m(2, 2);
        m.at(0, 0) = 2;
        m.at(0, 1) = 4;
        m.at(1, 0) = 1;
        m.at(1, 1) = 2;
        auto [r, piv] = zp_rref(m, f5);
        CHECK(piv == std::vector<int>{0});
        CHECK(r.at(0, 0) == 1);
        CHECK(r.at(0, 1) == 2);
        CHECK(r.at(1, 0) == 0);
        CHECK(r.at(1, 1) == 0);
    }
}

TEST_CASE("zp_rref: idempotence, row space, rank oracle") {
    const FieldSpec f(30011);
    Rng rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));  // up to 4 for the minor oracle
        const int c = 2 + static_cast<int>(rng.below(3));
        ZpMatrix m = random_matrix(n, c, f, rng);
        auto [r, piv] = zp_rref(m, f);
        auto [r2, piv2] = zp_rref(r, f);
        CHECK(r2 == r);
        CHECK(piv2 == piv);
        CHECK(static_cast<int>(piv.size()) == rank_by_minors(m, f));

        // Row space preserved: every original row reduces to zero against
        // the RREF rows.
        for (int i = 0; i < n; ++i) {
            std::vector<FieldElem> row(m.cols);
            for (int j = 0; j < m.cols; ++j) row[j] = m.at(i, j);
            for (size_t pi = 0; pi < piv.size(); ++pi) {
                const FieldElem coef = row[piv[pi]];
                if (coef == 0) continue;
                for (int j = 0; j < m.cols; ++j)
                    row[j] = f.sub(row[j], f.mul(coef, r.at(static_cast<int>(pi), j)));
            }
            for (int j = 0; j < m.cols; ++j) CHECK(row[j] == 0);
        }
    }
    // Random full-rank square matrices reduce to the identity.
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        ZpMatrix m = random_matrix(n, n, f, rng);
        if (rank_by_minors(m, f) != n) continue;
        auto [r, piv] = zp_rref(m, f);
        CHECK(r == ZpMatrix::identity(n));
    }
}

TEST_CASE("zp_nullspace: examples and m*N = 0") {
    const FieldSpec f5(5);
    SUBCASE("zero matrix") {
        const ZpMatrix z(2, 2);
        CHECK(zp_nullspace(z, f5).cols == 2);
    }
    SUBCASE("single row [1 2] mod 5") {
        ZpMatrix m(1, 2);
        m.at(0, 0) = 1;
        m.at(0, 1) = 2;
        const ZpMatrix n = zp_nullspace(m, f5);
        REQUIRE(n.cols == 1);
        CHECK(f5.add(f5.mul(m.at(0, 0), n.at(0, 0)), f5.mul(m.at(0, 1), n.at(1, 0))) == 0);
        // Spans the same line as [3, 1]^T.
        CHECK(f5.mul(n.at(0, 0), 1) == f5.mul(n.at(1, 0), 3));
    }
    SUBCASE("random matrices annihilate their nullspace") {
        const FieldSpec f(30011);
        Rng rng(3);
        for (int trial = 0; trial < 200; ++trial) {
            const int rows = 1 + static_cast<int>(rng.below(5));
            const int cols = 1 + static_cast<int>(rng.below(7));
            const ZpMatrix m = random_matrix(rows, cols, f, rng);
            const ZpMatrix n = zp_nullspace(m, f);
            const auto rank = zp_rref(m, f).second.size();
            CHECK(n.cols == cols - static_cast<int>(rank));
            if (n.cols > 0) {
                const ZpMatrix prod = zp_matmul(m, n, f);
                for (auto v : prod.a) CHECK(v == 0);
            }
        }
    }
}

TEST_CASE("zp_rand_unit") {
    Rng rng(4);
    SUBCASE("n = 1 gives a unit scalar") {
        const FieldSpec f(30011);
        for (int i = 0; i < 20; ++i) {
            const auto v = zp_rand_unit(1, f, rng);
            CHECK((v[0] == 1 || v[0] == f.p - 1));
        }
    }
    SUBCASE("postcondition over several sizes and primes") {
        for (std::uint64_t p : {7ull, 31ull, 30011ull}) {
            const FieldSpec f(p);
            for (int n : {3, 4}) {
                const auto v = zp_rand_unit(n, f, rng);
                FieldElem norm2 = 0;
                for (auto z : v) norm2 = f.add(norm2, f.mul(z, z));
                CHECK(norm2 == 1);
            }
        }
    }
    SUBCASE("exhausted rejection budget raises") {
        const FieldSpec f(7);
        CHECK_THROWS_AS(zp_rand_unit(3, f, rng, 0), GenerationFailure);
    }
}

TEST_CASE("zp_quat_to_rotation") {
    const FieldSpec f7(7);
    SUBCASE("identity quaternion") {
        CHECK(zp_quat_to_rotation({1, 0, 0, 0}, f7) == ZpMatrix::identity(3));
    }
    SUBCASE("axis-aligned half turn") {
        const ZpMatrix r = zp_quat_to_rotation({0, 1, 0, 0}, f7);
        ZpMatrix expect(3, 3);
        expect.at(0, 0) = 1;
        expect.at(1, 1) = 6;
        expect.at(2, 2) = 6;
        CHECK(r == expect);
    }
    SUBCASE("unnormalized quaternion is rejected") {
        CHECK_THROWS_AS(zp_quat_to_rotation({1, 1, 0, 0}, f7), InvalidArgument);
    }
    SUBCASE("random unit quaternions give exact rotations") {
        const FieldSpec f(30011);
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const auto q = zp_rand_unit(4, f, rng);
            const ZpMatrix r = zp_quat_to_rotation(q, f);
            CHECK(zp_matmul(zp_transpose(r), r, f) == ZpMatrix::identity(3));
            CHECK(zp_det3(r, f) == 1);
        }
    }
}

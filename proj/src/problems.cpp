#include "gaps/problems.hpp"

#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "gaps/errors.hpp"

namespace gaps {

namespace {

using SymMat3 = std::array<std::array<SymPoly, 3>, 3>;

SymPoly sym_zero(int nvars, ExprRing& ring) {
    (void)ring;
    return SymPoly{nvars, {}};
}

SymPoly sym_const(int nvars, ExprId c, ExprRing& ring) {
    return poly_constant(nvars, c, ring);
}

SymMat3 mat_mul(const SymMat3& a, const SymMat3& b, ExprRing& ring, const MonomialOrder& ord) {
    SymMat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            SymPoly acc = sym_zero(a[0][0].nvars, ring);
            for (int k = 0; k < 3; ++k)
                acc = poly_add(acc, poly_mul(a[i][k], b[k][j], ring, ord), ring, ord);
            c[i][j] = acc;
        }
    return c;
}

SymMat3 mat_transpose(const SymMat3& a) {
    SymMat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
    return t;
}

SymPoly mat_trace(const SymMat3& a, ExprRing& ring, const MonomialOrder& ord) {
    SymPoly acc = sym_zero(a[0][0].nvars, ring);
    for (int i = 0; i < 3; ++i) acc = poly_add(acc, a[i][i], ring, ord);
    return acc;
}

SymPoly mat_det3(const SymMat3& a, ExprRing& ring, const MonomialOrder& ord) {
    auto minor2 = [&](int r1, int r2, int c1, int c2) {
        return poly_sub(poly_mul(a[r1][c1], a[r2][c2], ring, ord),
                        poly_mul(a[r1][c2], a[r2][c1], ring, ord), ring, ord);
    };
    SymPoly d = poly_mul(a[0][0], minor2(1, 2, 1, 2), ring, ord);
    d = poly_sub(d, poly_mul(a[0][1], minor2(1, 2, 0, 2), ring, ord), ring, ord);
    d = poly_add(d, poly_mul(a[0][2], minor2(1, 2, 0, 1), ring, ord), ring, ord);
    return d;
}

// ---------------------------------------------------------------------------
// Real-side linear algebra helpers.

Eigen::Matrix3d skew3(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
    return m;
}

Eigen::Matrix3d rotation_from_quat(double s, const Eigen::Vector3d& u) {
    return 2.0 * (u * u.transpose() - s * skew3(u)) +
           (s * s - u.squaredNorm()) * Eigen::Matrix3d::Identity();
}

}  // namespace

// ---------------------------------------------------------------------------
// toy_univariate: x^2 - a.

ProblemSpec toy_univariate() {
    ProblemSpec p;
    p.name = "toy_univariate";
    p.knowns = {{"a", {}}};
    p.unknowns = {{"x", {}}};
    p.var_names = {"x"};
    p.order = MonomialOrder::grevlex(1);

    ExprRing ring{&p.pool};
    const ExprId a = p.pool.input(0);
    SymPoly f;
    f.nvars = 1;
    f = poly_add(poly_monomial(Monomial::var(1, 0, 2), ring.one(), ring),
                 poly_constant(1, ring.neg(a), ring), ring, p.order);
    p.equations = {f};

    p.sample_zp = [](const FieldSpec& field, Rng& rng) {
        ZpInstance inst;
        const FieldElem x = rng.below(field.p - 1) + 1;
        inst.knowns["a"] = {field.mul(x, x)};
        inst.truth = std::vector<FieldElem>{x};
        return inst;
    };
    p.sample_real = [](Rng& rng) {
        RealInstance inst;
        const double x = 0.5 + 1.5 * rng.real01();
        inst.knowns["a"] = {x * x};
        inst.truth = std::vector<double>{x};
        return inst;
    };
    return p;
}

// ---------------------------------------------------------------------------
// toy_conics: two generic conics in (x, y).

ProblemSpec toy_conics() {
    ProblemSpec p;
    p.name = "toy_conics";
    p.knowns = {{"a", {6}}, {"b", {6}}};
    p.unknowns = {{"x", {}}, {"y", {}}};
    p.var_names = {"x", "y"};
    p.order = MonomialOrder::grevlex(2);

    ExprRing ring{&p.pool};
    const std::array<Monomial, 6> mons = {
        Monomial({2, 0}), Monomial({1, 1}), Monomial({0, 2}),
        Monomial({1, 0}), Monomial({0, 1}), Monomial({0, 0}),
    };
    for (int e = 0; e < 2; ++e) {
        SymPoly f{2, {}};
        for (int i = 0; i < 6; ++i)
            f = poly_add(f, poly_monomial(mons[i], p.pool.input(e * 6 + i), ring), ring, p.order);
        p.equations.push_back(f);
    }

    // Generative samplers: draw all but the constant coefficient and a root,
    // then force the conic through the root.
    p.sample_zp = [mons](const FieldSpec& field, Rng& rng) {
        ZpInstance inst;
        const FieldElem x = rng.below(field.p), y = rng.below(field.p);
        const std::vector<FieldElem> pt = {x, y};
        const ZpRing ring{field};
        for (const char* name : {"a", "b"}) {
            std::vector<FieldElem> c(6);
            FieldElem acc = 0;
            for (int i = 0; i < 5; ++i) {
                c[i] = rng.below(field.p);
                acc = field.add(
                    acc, field.mul(c[i], evaluate(poly_monomial(mons[i], FieldElem{1}, ring), pt,
                                                  ring)));
            }
            c[5] = field.neg(acc);
            inst.knowns[name] = c;
        }
        inst.truth = pt;
        return inst;
    };
    p.sample_real = [](Rng& rng) {
        RealInstance inst;
        const double x = rng.normal(), y = rng.normal();
        const double vals[5] = {x * x, x * y, y * y, x, y};
        for (const char* name : {"a", "b"}) {
            std::vector<double> c(6);
            double acc = 0;
            for (int i = 0; i < 5; ++i) {
                c[i] = rng.normal();
                acc += c[i] * vals[i];
            }
            c[5] = -acc;
            inst.knowns[name] = c;
        }
        inst.truth = std::vector<double>{x, y};
        return inst;
    };
    return p;
}

// ---------------------------------------------------------------------------
// toy_even: {x^2 + y^2 - a, x^2 y - b}, even in x.

ProblemSpec toy_even() {
    ProblemSpec p;
    p.name = "toy_even";
    p.knowns = {{"a", {}}, {"b", {}}};
    p.unknowns = {{"x", {}}, {"y", {}}};
    p.var_names = {"x", "y"};
    p.order = MonomialOrder::grevlex(2);

    ExprRing ring{&p.pool};
    const ExprId a = p.pool.input(0), b = p.pool.input(1);
    SymPoly f1{2, {}};
    f1 = poly_add(poly_monomial(Monomial({2, 0}), ring.one(), ring),
                  poly_monomial(Monomial({0, 2}), ring.one(), ring), ring, p.order);
    f1 = poly_add(f1, poly_constant(2, ring.neg(a), ring), ring, p.order);
    SymPoly f2{2, {}};
    f2 = poly_add(poly_monomial(Monomial({2, 1}), ring.one(), ring),
                  poly_constant(2, ring.neg(b), ring), ring, p.order);
    p.equations = {f1, f2};

    p.sample_zp = [](const FieldSpec& field, Rng& rng) {
        ZpInstance inst;
        const FieldElem x = rng.below(field.p - 1) + 1;
        const FieldElem y = rng.below(field.p - 1) + 1;
        const FieldElem x2 = field.mul(x, x);
        inst.knowns["a"] = {field.add(x2, field.mul(y, y))};
        inst.knowns["b"] = {field.mul(x2, y)};
        inst.truth = std::vector<FieldElem>{x, y};
        return inst;
    };
    p.sample_real = [](Rng& rng) {
        RealInstance inst;
        const double x = 0.6 + 0.8 * rng.real01();
        const double y = 0.6 + 0.8 * rng.real01();
        inst.knowns["a"] = {x * x + y * y};
        inst.knowns["b"] = {x * x * y};
        inst.truth = std::vector<double>{x, y};
        return inst;
    };
    return p;
}

// ---------------------------------------------------------------------------
// relpose_5pt.

namespace {

// Builds the ten 5-pt constraint polynomials from the 36 nullspace-basis
// inputs: det E first, then the nine entries of 2 E E^T E - tr(E E^T) E.
void build_5pt_equations(ProblemSpec& p) {
    ExprRing ring{&p.pool};
    const MonomialOrder& ord = p.order;
    const Monomial mx = Monomial::var(3, 0), my = Monomial::var(3, 1), mz = Monomial::var(3, 2),
                   m1 = Monomial::one(3);

    SymMat3 E;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto coef = [&](int k) { return p.pool.input((k * 3 + i) * 3 + j); };
            SymPoly f{3, {}};
            f = poly_add(poly_monomial(mx, coef(0), ring), poly_monomial(my, coef(1), ring), ring,
                         ord);
            f = poly_add(f, poly_monomial(mz, coef(2), ring), ring, ord);
            f = poly_add(f, poly_monomial(m1, coef(3), ring), ring, ord);
            E[i][j] = f;
        }

    p.equations.push_back(mat_det3(E, ring, ord));

    const SymMat3 Et = mat_transpose(E);
    const SymMat3 EEt = mat_mul(E, Et, ring, ord);
    const SymMat3 EEtE = mat_mul(EEt, E, ring, ord);
    const SymPoly tr = mat_trace(EEt, ring, ord);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            SymPoly t = poly_scale(EEtE[i][j], ring.from_int(2), ring);
            t = poly_sub(t, poly_mul(tr, E[i][j], ring, ord), ring, ord);
            p.equations.push_back(t);
        }
}

// Normalizes a Z_p homogeneous 3-vector to last coordinate 1; false when the
// last coordinate vanishes.
bool zp_dehomogenize(std::array<FieldElem, 3>& v, const FieldSpec& field) {
    if (v[2] == 0) return false;
    const FieldElem inv = zp_inv(v[2], field);
    v = {field.mul(v[0], inv), field.mul(v[1], inv), 1};
    return true;
}

ZpInstance sample_5pt_zp_generative(const FieldSpec& field, Rng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const auto quat = zp_rand_unit(4, field, rng);
        const ZpMatrix R = zp_quat_to_rotation(quat, field);
        const auto t = zp_rand_unit(3, field, rng);

        ZpMatrix A(5, 9);
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            std::array<FieldElem, 3> X = {rng.below(field.p), rng.below(field.p),
                                          rng.below(field.p)};
            std::array<FieldElem, 3> Y;
            for (int r = 0; r < 3; ++r) {
                FieldElem acc = t[r];
                for (int c = 0; c < 3; ++c) acc = field.add(acc, field.mul(R.at(r, c), X[c]));
                Y[r] = acc;
            }
            if (!zp_dehomogenize(X, field) || !zp_dehomogenize(Y, field)) {
                ok = false;
                break;
            }
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) A.at(i, 3 * r + c) = field.mul(Y[r], X[c]);
        }
        if (!ok) continue;

        const ZpMatrix N = zp_nullspace(A, field);
        if (N.cols != 4) continue;

        // E_gt = [t]x R, expressed in the nullspace basis.
        ZpMatrix tx(3, 3);
        tx.at(0, 1) = field.neg(t[2]);
        tx.at(0, 2) = t[1];
        tx.at(1, 0) = t[2];
        tx.at(1, 2) = field.neg(t[0]);
        tx.at(2, 0) = field.neg(t[1]);
        tx.at(2, 1) = t[0];
        const ZpMatrix Egt = zp_matmul(tx, R, field);

        ZpMatrix aug(9, 5);
        for (int r = 0; r < 9; ++r) {
            for (int c = 0; c < 4; ++c) aug.at(r, c) = N.at(r, c);
            aug.at(r, 4) = Egt.at(r / 3, r % 3);
        }
        auto [rref, pivots] = zp_rref(aug, field);
        if (pivots != std::vector<int>{0, 1, 2, 3}) continue;  // inconsistent or rank drop
        std::array<FieldElem, 4> c;
        for (int i = 0; i < 4; ++i) c[i] = rref.at(i, 4);
        if (c[3] == 0) continue;
        const FieldElem inv = zp_inv(c[3], field);

        ZpInstance inst;
        std::vector<FieldElem> ne(36);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) ne[(k * 3 + i) * 3 + j] = N.at(3 * i + j, k);
        inst.knowns["NE"] = std::move(ne);
        inst.truth = std::vector<FieldElem>{field.mul(c[0], inv), field.mul(c[1], inv),
                                            field.mul(c[2], inv)};
        return inst;
    }
    throw GenerationFailure("relpose_5pt: generative Z_p sampling kept hitting degeneracies");
}

ZpInstance sample_5pt_zp_simple(const FieldSpec& field, Rng& rng) {
    ZpInstance inst;
    std::vector<FieldElem> ne(36);
    for (auto& v : ne) v = rng.below(field.p - 1) + 1;
    inst.knowns["NE"] = std::move(ne);
    return inst;
}

RealInstance sample_5pt_real(Rng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        Eigen::Vector4d q;
        for (int i = 0; i < 4; ++i) q(i) = rng.normal();
        q.normalize();
        const Eigen::Matrix3d R = rotation_from_quat(q(0), q.tail<3>());
        Eigen::Vector3d t;
        for (int i = 0; i < 3; ++i) t(i) = rng.normal();
        t.normalize();

        Eigen::Matrix<double, 3, 5> x1, x2;
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            // Points in a box in front of both cameras.
            Eigen::Vector3d X(2.0 * rng.real01() - 1.0, 2.0 * rng.real01() - 1.0,
                              2.0 + 2.0 * rng.real01());
            const Eigen::Vector3d Y = R * X + t;
            if (std::abs(X(2)) < 1e-8 || std::abs(Y(2)) < 1e-8) {
                ok = false;
                break;
            }
            x1.col(i) = X / X(2);
            x2.col(i) = Y / Y(2);
        }
        if (!ok) continue;

        Eigen::Matrix<double, 5, 9> A;
        for (int i = 0; i < 5; ++i)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) A(i, 3 * r + c) = x2(r, i) * x1(c, i);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(4) < 1e-6 * sv(0)) continue;  // near-degenerate configuration
        const Eigen::MatrixXd N = svd.matrixV().rightCols(4);  // 9 x 4

        const Eigen::Matrix3d Egt = skew3(t) * R;
        Eigen::Matrix<double, 9, 1> e;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) e(3 * r + c) = Egt(r, c);
        const Eigen::Vector4d coef = N.transpose() * e;  // N has orthonormal columns
        if (std::abs(coef(3)) < 1e-8) continue;

        RealInstance inst;
        std::vector<double> ne(36);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) ne[(k * 3 + i) * 3 + j] = N(3 * i + j, k);
        inst.knowns["NE"] = std::move(ne);
        inst.truth = std::vector<double>{coef(0) / coef(3), coef(1) / coef(3), coef(2) / coef(3)};
        std::vector<double> x1v, x2v, ev;
        for (int i = 0; i < 5; ++i)
            for (int r = 0; r < 3; ++r) {
                x1v.push_back(x1(r, i));
                x2v.push_back(x2(r, i));
            }
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) ev.push_back(Egt(r, c));
        inst.aux["x1"] = x1v;
        inst.aux["x2"] = x2v;
        inst.aux["E_gt"] = ev;
        return inst;
    }
    throw GenerationFailure("relpose_5pt: real sampling kept hitting degeneracies");
}

}  // namespace

ProblemSpec relpose_5pt() {
    ProblemSpec p;
    p.name = "relpose_5pt";
    p.knowns = {{"NE", {4, 3, 3}}};
    p.unknowns = {{"x", {}}, {"y", {}}, {"z", {}}};
    p.var_names = {"x", "y", "z"};
    p.order = MonomialOrder::grevlex(3);
    build_5pt_equations(p);

    p.sample_zp = sample_5pt_zp_generative;
    p.sample_zp_simple = sample_5pt_zp_simple;
    p.sample_real = sample_5pt_real;

    // E-up-to-scale error against the sampled ground-truth essential matrix.
    p.truth_error = [](const std::vector<std::complex<double>>& sol, const RealInstance& inst) {
        const auto& ne = inst.knowns.at("NE");
        const auto& ev = inst.aux.at("E_gt");
        Eigen::Matrix3d E = Eigen::Matrix3d::Zero(), Egt;
        const double w[4] = {sol[0].real(), sol[1].real(), sol[2].real(), 1.0};
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) E(i, j) += w[k] * ne[(k * 3 + i) * 3 + j];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) Egt(i, j) = ev[3 * i + j];
        E /= E.norm();
        Egt /= Egt.norm();
        return std::min((E - Egt).norm(), (E + Egt).norm());
    };
    return p;
}

// ---------------------------------------------------------------------------
// relpose_4pt_rotation_angle.

namespace {

using SymVec3 = std::array<SymPoly, 3>;

// v^T R w for expression vectors v, w and a polynomial matrix R.
SymPoly sandwich(const std::array<ExprId, 3>& v, const SymMat3& R, const std::array<ExprId, 3>& w,
                 ExprRing& ring, const MonomialOrder& ord) {
    SymPoly acc{3, {}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const ExprId c = ring.mul(v[i], w[j]);
            acc = poly_add(acc, poly_scale(R[i][j], c, ring), ring, ord);
        }
    return acc;
}

std::array<ExprId, 3> cross_expr(const std::array<ExprId, 3>& a, const std::array<ExprId, 3>& b,
                                 ExprRing& ring) {
    return {ring.sub(ring.mul(a[1], b[2]), ring.mul(a[2], b[1])),
            ring.sub(ring.mul(a[2], b[0]), ring.mul(a[0], b[2])),
            ring.sub(ring.mul(a[0], b[1]), ring.mul(a[1], b[0]))};
}

void build_4pt_equations(ProblemSpec& p) {
    ExprRing ring{&p.pool};
    const MonomialOrder& ord = p.order;
    const int N = 4;

    auto q_col = [&](int j) {
        return std::array<ExprId, 3>{p.pool.input(0 * N + j), p.pool.input(1 * N + j),
                                     p.pool.input(2 * N + j)};
    };
    auto qq_col = [&](int j) {
        return std::array<ExprId, 3>{p.pool.input(12 + 0 * N + j), p.pool.input(12 + 1 * N + j),
                                     p.pool.input(12 + 2 * N + j)};
    };
    const ExprId s = p.pool.input(24);

    // R = 2 (u u^T - s [u]x) + (s^2 - u^T u) I, entries quadratic in u.
    const Monomial m1 = Monomial::one(3);
    SymMat3 R;
    const ExprId s2 = ring.mul(s, s);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            SymPoly f{3, {}};
            Monomial uij = Monomial::var(3, i) * Monomial::var(3, j);
            f = poly_add(f, poly_monomial(uij, ring.from_int(2), ring), ring, ord);
            // -2 s [u]x
            static const int eps[3][3] = {{-1, 2, 1}, {2, -1, 0}, {1, 0, -1}};
            if (i != j) {
                const int k = eps[i][j];
                // [u]x(i,j) = -u_k if (i,j) cyclic, +u_k otherwise.
                const bool cyclic = (j == (i + 1) % 3);
                const ExprId c = cyclic ? ring.mul(ring.from_int(2), s)
                                        : ring.neg(ring.mul(ring.from_int(2), s));
                f = poly_add(f, poly_monomial(Monomial::var(3, k), c, ring), ring, ord);
            }
            if (i == j) {
                f = poly_add(f, poly_monomial(m1, s2, ring), ring, ord);
                for (int k = 0; k < 3; ++k)
                    f = poly_add(f, poly_monomial(Monomial::var(3, k, 2), ring.from_int(-1), ring),
                                 ring, ord);
            }
            R[i][j] = f;
        }

    auto register_abbr = [&](const std::string& base, const std::array<ExprId, 3>& v) {
        static const char* comp = "xyz";
        for (int i = 0; i < 3; ++i)
            p.abbreviations.emplace_back(base + "_" + comp[i], v[i]);
    };

    for (int i = 1; i <= N; ++i) {
        const int j = i % N + 1;
        const int k = (i + 1) % N + 1;
        const auto qi = q_col(i - 1), qj = q_col(j - 1), qk = q_col(k - 1);
        const auto qqi = qq_col(i - 1), qqj = qq_col(j - 1), qqk = qq_col(k - 1);

        const auto pij = cross_expr(qi, qj, ring);
        const auto pik = cross_expr(qi, qk, ring);
        const auto ppij = cross_expr(qqi, qqj, ring);
        const auto ppik = cross_expr(qqi, qqk, ring);
        register_abbr("p_" + std::to_string(i) + std::to_string(j), pij);
        register_abbr("p_" + std::to_string(i) + std::to_string(k), pik);
        register_abbr("pp_" + std::to_string(i) + std::to_string(j), ppij);
        register_abbr("pp_" + std::to_string(i) + std::to_string(k), ppik);

        const SymPoly f00 = sandwich(qqj, R, pij, ring, ord);
        const SymPoly f01 = sandwich(ppij, R, qj, ring, ord);
        const SymPoly f10 = sandwich(qqk, R, pik, ring, ord);
        const SymPoly f11 = sandwich(ppik, R, qk, ring, ord);
        p.equations.push_back(poly_sub(poly_mul(f00, f11, ring, ord),
                                       poly_mul(f01, f10, ring, ord), ring, ord));
    }

    // u^T u + s^2 - 1.
    SymPoly f{3, {}};
    for (int kk = 0; kk < 3; ++kk)
        f = poly_add(f, poly_monomial(Monomial::var(3, kk, 2), ring.one(), ring), ring, ord);
    f = poly_add(f, poly_monomial(m1, ring.sub(s2, ring.one()), ring), ring, ord);
    p.equations.push_back(f);
}

ZpInstance sample_4pt_zp(const FieldSpec& field, Rng& rng) {
    const auto quat = zp_rand_unit(4, field, rng);
    const ZpMatrix R = zp_quat_to_rotation(quat, field);
    const auto t = zp_rand_unit(3, field, rng);

    ZpInstance inst;
    std::vector<FieldElem> q(12), qq(12);
    for (int j = 0; j < 4; ++j) {
        std::array<FieldElem, 3> X = {rng.below(field.p), rng.below(field.p), rng.below(field.p)};
        for (int r = 0; r < 3; ++r) {
            FieldElem acc = t[r];
            for (int c = 0; c < 3; ++c) acc = field.add(acc, field.mul(R.at(r, c), X[c]));
            qq[r * 4 + j] = acc;
            q[r * 4 + j] = X[r];
        }
    }
    inst.knowns["q"] = std::move(q);
    inst.knowns["qq"] = std::move(qq);
    inst.knowns["s"] = {quat[0]};
    inst.truth = std::vector<FieldElem>{quat[1], quat[2], quat[3]};
    return inst;
}

RealInstance sample_4pt_real(Rng& rng) {
    Eigen::Vector4d quat;
    for (int i = 0; i < 4; ++i) quat(i) = rng.normal();
    quat.normalize();
    const double s = quat(0);
    const Eigen::Vector3d u = quat.tail<3>();
    const Eigen::Matrix3d R = rotation_from_quat(s, u);
    Eigen::Vector3d t;
    for (int i = 0; i < 3; ++i) t(i) = rng.normal();
    t.normalize();

    RealInstance inst;
    std::vector<double> q(12), qq(12);
    for (int j = 0; j < 4; ++j) {
        const Eigen::Vector3d X(2.0 * rng.real01() - 1.0, 2.0 * rng.real01() - 1.0,
                                2.0 + 2.0 * rng.real01());
        const Eigen::Vector3d Y = R * X + t;
        for (int r = 0; r < 3; ++r) {
            q[r * 4 + j] = X(r);
            qq[r * 4 + j] = Y(r);
        }
    }
    inst.knowns["q"] = std::move(q);
    inst.knowns["qq"] = std::move(qq);
    inst.knowns["s"] = {s};
    inst.truth = std::vector<double>{u(0), u(1), u(2)};
    return inst;
}

}  // namespace

ProblemSpec relpose_4pt_rotation_angle() {
    ProblemSpec p;
    p.name = "relpose_4pt_rotation_angle";
    p.knowns = {{"q", {3, 4}}, {"qq", {3, 4}}, {"s", {}}};
    p.unknowns = {{"u", {3}}};
    p.var_names = {"u1", "u2", "u3"};
    p.order = MonomialOrder::grevlex(3);
    build_4pt_equations(p);

    p.sample_zp = sample_4pt_zp;
    p.sample_real = sample_4pt_real;
    return p;
}

// ---------------------------------------------------------------------------

const std::map<std::string, ProblemFactory>& problem_registry() {
    static const std::map<std::string, ProblemFactory> registry = {
        {"toy_univariate", &toy_univariate},
        {"toy_conics", &toy_conics},
        {"toy_even", &toy_even},
        {"relpose_5pt", &relpose_5pt},
        {"relpose_4pt_rotation_angle", &relpose_4pt_rotation_angle},
    };
    return registry;
}

ProblemSpec make_problem(const std::string& name) {
    const auto& reg = problem_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw InvalidArgument("unknown problem '" + name + "'");
    return it->second();
}

}  // namespace gaps

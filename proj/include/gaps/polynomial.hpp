#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "gaps/errors.hpp"
#include "gaps/monomial.hpp"
#include "gaps/zp.hpp"

namespace gaps {

// Coefficient rings. Polynomial operations are parameterized over one of
// these so the same sparse-term algebra serves Z_p (offline), doubles
// (online) and coefficient-expression building (symbolic).

struct ZpRing {
    using Scalar = FieldElem;
    FieldSpec field;

    Scalar zero() const { return 0; }
    Scalar one() const { return 1; }
    Scalar from_int(std::int64_t v) const { return field.reduce(v); }
    Scalar add(Scalar a, Scalar b) const { return field.add(a, b); }
    Scalar sub(Scalar a, Scalar b) const { return field.sub(a, b); }
    Scalar mul(Scalar a, Scalar b) const { return field.mul(a, b); }
    Scalar neg(Scalar a) const { return field.neg(a); }
    bool is_zero(Scalar a) const { return a == 0; }
};

struct RealRing {
    using Scalar = double;

    Scalar zero() const { return 0.0; }
    Scalar one() const { return 1.0; }
    Scalar from_int(std::int64_t v) const { return static_cast<double>(v); }
    Scalar add(Scalar a, Scalar b) const { return a + b; }
    Scalar sub(Scalar a, Scalar b) const { return a - b; }
    Scalar mul(Scalar a, Scalar b) const { return a * b; }
    Scalar neg(Scalar a) const { return -a; }
    bool is_zero(Scalar a) const { return a == 0.0; }
};

// Sparse polynomial; terms kept sorted descending under the order passed to
// each operation. Zero coefficients are never stored.
template <typename C>
struct Polynomial {
    int nvars = 0;
    std::vector<std::pair<Monomial, C>> terms;

    bool is_zero() const { return terms.empty(); }
    const Monomial& leading_monomial() const {
        if (terms.empty()) throw InvalidArgument("leading term of zero polynomial");
        return terms.front().first;
    }
    const C& leading_coeff() const {
        if (terms.empty()) throw InvalidArgument("leading term of zero polynomial");
        return terms.front().second;
    }
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms) d = std::max(d, m.degree());
        return d;
    }
};

template <typename Ring>
using PolyOf = Polynomial<typename Ring::Scalar>;

// Builds a normalized polynomial from arbitrary (monomial, coeff) pairs:
// sorts descending, merges duplicates, drops zeros.
template <typename Ring>
PolyOf<Ring> make_poly(int nvars, std::vector<std::pair<Monomial, typename Ring::Scalar>> terms,
                       const Ring& ring, const MonomialOrder& order) {
    for (const auto& [m, c] : terms)
        if (m.nvars() != nvars) throw InvalidArgument("make_poly: arity mismatch");
    std::sort(terms.begin(), terms.end(),
              [&](const auto& a, const auto& b) { return order.greater(a.first, b.first); });
    PolyOf<Ring> f;
    f.nvars = nvars;
    for (auto& [m, c] : terms) {
        if (!f.terms.empty() && f.terms.back().first == m)
            f.terms.back().second = ring.add(f.terms.back().second, c);
        else
            f.terms.emplace_back(std::move(m), std::move(c));
        if (!f.terms.empty() && ring.is_zero(f.terms.back().second)) f.terms.pop_back();
    }
    return f;
}

template <typename Ring>
PolyOf<Ring> poly_constant(int nvars, typename Ring::Scalar c, const Ring& ring) {
    PolyOf<Ring> f;
    f.nvars = nvars;
    if (!ring.is_zero(c)) f.terms.emplace_back(Monomial::one(nvars), c);
    return f;
}

template <typename Ring>
PolyOf<Ring> poly_monomial(Monomial m, typename Ring::Scalar c, const Ring& ring) {
    PolyOf<Ring> f;
    f.nvars = m.nvars();
    if (!ring.is_zero(c)) f.terms.emplace_back(std::move(m), c);
    return f;
}

// r = a + s*b for a scalar s; the workhorse merge.
template <typename Ring>
PolyOf<Ring> poly_axpy(const PolyOf<Ring>& a, typename Ring::Scalar s, const PolyOf<Ring>& b,
                       const Ring& ring, const MonomialOrder& order) {
    if (a.nvars != b.nvars) throw InvalidArgument("polynomial arity mismatch");
    PolyOf<Ring> r;
    r.nvars = a.nvars;
    r.terms.reserve(a.terms.size() + b.terms.size());
    size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        int c;
        if (i >= a.terms.size())
            c = -1;
        else if (j >= b.terms.size())
            c = 1;
        else
            c = order.cmp(a.terms[i].first, b.terms[j].first);
        if (c > 0) {
            r.terms.push_back(a.terms[i++]);
        } else if (c < 0) {
            auto v = ring.mul(s, b.terms[j].second);
            if (!ring.is_zero(v)) r.terms.emplace_back(b.terms[j].first, v);
            ++j;
        } else {
            auto v = ring.add(a.terms[i].second, ring.mul(s, b.terms[j].second));
            if (!ring.is_zero(v)) r.terms.emplace_back(a.terms[i].first, v);
            ++i;
            ++j;
        }
    }
    return r;
}

template <typename Ring>
PolyOf<Ring> poly_add(const PolyOf<Ring>& a, const PolyOf<Ring>& b, const Ring& ring,
                      const MonomialOrder& order) {
    return poly_axpy(a, ring.one(), b, ring, order);
}

template <typename Ring>
PolyOf<Ring> poly_sub(const PolyOf<Ring>& a, const PolyOf<Ring>& b, const Ring& ring,
                      const MonomialOrder& order) {
    return poly_axpy(a, ring.neg(ring.one()), b, ring, order);
}

template <typename Ring>
PolyOf<Ring> poly_neg(const PolyOf<Ring>& a, const Ring& ring) {
    PolyOf<Ring> r = a;
    for (auto& [m, c] : r.terms) c = ring.neg(c);
    return r;
}

template <typename Ring>
PolyOf<Ring> poly_scale(const PolyOf<Ring>& a, typename Ring::Scalar s, const Ring& ring) {
    PolyOf<Ring> r;
    r.nvars = a.nvars;
    for (const auto& [m, c] : a.terms) {
        auto v = ring.mul(s, c);
        if (!ring.is_zero(v)) r.terms.emplace_back(m, v);
    }
    return r;
}

// Multiply by the term s*m. Order of terms is preserved (monomial orders are
// multiplicative), so no re-sort is needed.
template <typename Ring>
PolyOf<Ring> poly_mul_monomial(const PolyOf<Ring>& a, const Monomial& m, typename Ring::Scalar s,
                               const Ring& ring) {
    PolyOf<Ring> r;
    r.nvars = a.nvars;
    for (const auto& [mon, c] : a.terms) {
        auto v = ring.mul(s, c);
        if (!ring.is_zero(v)) r.terms.emplace_back(mon * m, v);
    }
    return r;
}

template <typename Ring>
PolyOf<Ring> poly_mul(const PolyOf<Ring>& a, const PolyOf<Ring>& b, const Ring& ring,
                      const MonomialOrder& order) {
    if (a.nvars != b.nvars) throw InvalidArgument("polynomial arity mismatch");
    PolyOf<Ring> r;
    r.nvars = a.nvars;
    for (const auto& [m, c] : b.terms)
        r = poly_axpy(r, ring.one(), poly_mul_monomial(a, m, c, ring), ring, order);
    return r;
}

template <typename Ring>
typename Ring::Scalar evaluate(const PolyOf<Ring>& f,
                               const std::vector<typename Ring::Scalar>& x, const Ring& ring) {
    if (static_cast<int>(x.size()) != f.nvars)
        throw InvalidArgument("evaluate: wrong number of variable values");
    auto acc = ring.zero();
    for (const auto& [m, c] : f.terms) {
        auto t = c;
        for (int k = 0; k < f.nvars; ++k)
            for (int e = 0; e < m.e[k]; ++e) t = ring.mul(t, x[k]);
        acc = ring.add(acc, t);
    }
    return acc;
}

// Real-coefficient polynomial evaluated at a complex point (used for
// residuals of possibly-complex solutions).
inline std::complex<double> evaluate_complex(const Polynomial<double>& f,
                                             const std::vector<std::complex<double>>& x) {
    if (static_cast<int>(x.size()) != f.nvars)
        throw InvalidArgument("evaluate_complex: wrong number of variable values");
    std::complex<double> acc = 0.0;
    for (const auto& [m, c] : f.terms) {
        std::complex<double> t = c;
        for (int k = 0; k < f.nvars; ++k)
            for (int e = 0; e < m.e[k]; ++e) t *= x[k];
        acc += t;
    }
    return acc;
}

template <typename C>
bool poly_equal(const Polynomial<C>& a, const Polynomial<C>& b) {
    return a.nvars == b.nvars && a.terms == b.terms;
}

}  // namespace gaps

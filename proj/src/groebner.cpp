#include "gaps/groebner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "gaps/errors.hpp"

namespace gaps {

namespace {

// Divides q by the monic generators, preferring the lowest index at each
// step. Returns remainder and per-generator cofactors; `skip` excludes one
// generator (used during inter-reduction).
NormalFormResult divide(const ZpPoly& q, const std::vector<ZpPoly>& gens, const ZpRing& ring,
                        const MonomialOrder& order, int skip = -1) {
    NormalFormResult res;
    res.remainder.nvars = q.nvars;
    res.cofactors.assign(gens.size(), ZpPoly{q.nvars, {}});

    ZpPoly work = q;
    while (!work.is_zero()) {
        const Monomial& lm = work.leading_monomial();
        const FieldElem lc = work.leading_coeff();
        int hit = -1;
        for (int i = 0; i < static_cast<int>(gens.size()); ++i) {
            if (i == skip || gens[i].is_zero()) continue;
            if (gens[i].leading_monomial().divides(lm)) {
                hit = i;
                break;
            }
        }
        if (hit < 0) {
            res.remainder.terms.emplace_back(lm, lc);
            work.terms.erase(work.terms.begin());
            continue;
        }
        const Monomial t = gens[hit].leading_monomial().quotient_of(lm);
        // work -= lc * t * gens[hit]; generators are monic.
        work = poly_axpy(work, ring.neg(lc), poly_mul_monomial(gens[hit], t, ring.one(), ring),
                         ring, order);
        res.cofactors[hit] =
            poly_axpy(res.cofactors[hit], ring.one(), poly_monomial(t, lc, ring), ring, order);
    }
    return res;
}

// cofF += c * q * rows[k] for every component; composes generator-space
// cofactors into F-space.
void accumulate_f_cofactors(std::vector<ZpPoly>& cof_f, const ZpPoly& q,
                            const std::vector<ZpPoly>& gen_row, const ZpRing& ring,
                            const MonomialOrder& order) {
    if (q.is_zero()) return;
    for (size_t j = 0; j < cof_f.size(); ++j) {
        if (gen_row[j].is_zero()) continue;
        cof_f[j] = poly_add(cof_f[j], poly_mul(q, gen_row[j], ring, order), ring, order);
    }
}

struct Pair {
    int i, j;
    Monomial lcm_m;
    int deg;
};

}  // namespace

TrackedBasis buchberger(const std::vector<ZpPoly>& F, const MonomialOrder& order,
                        const FieldSpec& field) {
    if (F.empty()) throw InvalidArgument("buchberger: empty input system");
    const int nvars = F.front().nvars;
    for (const auto& f : F) {
        if (f.is_zero()) throw InvalidArgument("buchberger: zero polynomial in input");
        if (f.nvars != nvars) throw InvalidArgument("buchberger: arity mismatch in input");
    }
    const ZpRing ring{field};
    const int m = static_cast<int>(F.size());

    TrackedBasis basis{field, order, nvars, m, {}, {}};
    auto add_gen = [&](ZpPoly g, std::vector<ZpPoly> cof) {
        const FieldElem inv = zp_inv(g.leading_coeff(), field);
        g = poly_scale(g, inv, ring);
        for (auto& c : cof) c = poly_scale(c, inv, ring);
        basis.gens.push_back(std::move(g));
        basis.cofactors.push_back(std::move(cof));
    };

    for (int j = 0; j < m; ++j) {
        std::vector<ZpPoly> cof(m, ZpPoly{nvars, {}});
        cof[j] = poly_constant(nvars, ring.one(), ring);
        add_gen(F[j], std::move(cof));
    }

    auto make_pair = [&](int i, int j) {
        Pair p{i, j, lcm(basis.gens[i].leading_monomial(), basis.gens[j].leading_monomial()), 0};
        p.deg = p.lcm_m.degree();
        return p;
    };

    std::vector<Pair> pending;
    std::set<std::pair<int, int>> pending_keys;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            pending.push_back(make_pair(i, j));
            pending_keys.insert({i, j});
        }

    auto pop_next = [&]() {
        // Normal selection: smallest lcm degree first, ties by index.
        size_t best = 0;
        for (size_t k = 1; k < pending.size(); ++k) {
            const auto &a = pending[k], &b = pending[best];
            if (a.deg < b.deg || (a.deg == b.deg && std::tie(a.i, a.j) < std::tie(b.i, b.j)))
                best = k;
        }
        Pair p = pending[best];
        pending.erase(pending.begin() + best);
        pending_keys.erase({p.i, p.j});
        return p;
    };

    while (!pending.empty()) {
        const Pair p = pop_next();
        const ZpPoly &ga = basis.gens[p.i], &gb = basis.gens[p.j];

        // Buchberger's first criterion.
        if (coprime(ga.leading_monomial(), gb.leading_monomial())) continue;
        // Second (chain) criterion: some k divides the lcm and both side
        // pairs are already settled.
        bool chained = false;
        for (int k = 0; k < static_cast<int>(basis.gens.size()) && !chained; ++k) {
            if (k == p.i || k == p.j) continue;
            if (!basis.gens[k].leading_monomial().divides(p.lcm_m)) continue;
            const auto key_ik = std::minmax(p.i, k);
            const auto key_jk = std::minmax(p.j, k);
            if (!pending_keys.count({key_ik.first, key_ik.second}) &&
                !pending_keys.count({key_jk.first, key_jk.second}))
                chained = true;
        }
        if (chained) continue;

        const Monomial ta = ga.leading_monomial().quotient_of(p.lcm_m);
        const Monomial tb = gb.leading_monomial().quotient_of(p.lcm_m);
        ZpPoly s = poly_sub(poly_mul_monomial(ga, ta, ring.one(), ring),
                            poly_mul_monomial(gb, tb, ring.one(), ring), ring, order);

        std::vector<ZpPoly> cof_f(m, ZpPoly{nvars, {}});
        accumulate_f_cofactors(cof_f, poly_monomial(ta, ring.one(), ring), basis.cofactors[p.i],
                               ring, order);
        {
            auto neg_tb = poly_monomial(tb, ring.neg(ring.one()), ring);
            accumulate_f_cofactors(cof_f, neg_tb, basis.cofactors[p.j], ring, order);
        }

        auto nf = divide(s, basis.gens, ring, order);
        if (nf.remainder.is_zero()) continue;
        for (size_t k = 0; k < basis.gens.size(); ++k) {
            auto negq = poly_neg(nf.cofactors[k], ring);
            accumulate_f_cofactors(cof_f, negq, basis.cofactors[k], ring, order);
        }

        const int idx = static_cast<int>(basis.gens.size());
        add_gen(std::move(nf.remainder), std::move(cof_f));
        for (int i = 0; i < idx; ++i) {
            pending.push_back(make_pair(i, idx));
            pending_keys.insert({i, idx});
        }
    }

    // Minimalize: drop generators whose leading monomial is divisible by
    // another's. Later generators are never divisible by earlier leading
    // terms, so scan keeps the newest witnesses.
    std::vector<bool> keep(basis.gens.size(), true);
    for (size_t i = 0; i < basis.gens.size(); ++i)
        for (size_t j = 0; j < basis.gens.size(); ++j) {
            if (i == j || !keep[i] || !keep[j]) continue;
            if (basis.gens[j].leading_monomial().divides(basis.gens[i].leading_monomial()) &&
                (basis.gens[j].leading_monomial() != basis.gens[i].leading_monomial() || j < i)) {
                keep[i] = false;
                break;
            }
        }
    std::vector<ZpPoly> min_gens;
    std::vector<std::vector<ZpPoly>> min_cof;
    for (size_t i = 0; i < basis.gens.size(); ++i)
        if (keep[i]) {
            min_gens.push_back(std::move(basis.gens[i]));
            min_cof.push_back(std::move(basis.cofactors[i]));
        }
    basis.gens = std::move(min_gens);
    basis.cofactors = std::move(min_cof);

    // Tail-reduce to the reduced basis; repeat until stable.
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < basis.gens.size(); ++i) {
            auto nf = divide(basis.gens[i], basis.gens, ring, order, static_cast<int>(i));
            if (poly_equal(nf.remainder, basis.gens[i])) continue;
            changed = true;
            std::vector<ZpPoly> cof = basis.cofactors[i];
            for (size_t k = 0; k < basis.gens.size(); ++k) {
                if (k == i || nf.cofactors[k].is_zero()) continue;
                auto negq = poly_neg(nf.cofactors[k], ring);
                accumulate_f_cofactors(cof, negq, basis.cofactors[k], ring, order);
            }
            basis.gens[i] = std::move(nf.remainder);
            basis.cofactors[i] = std::move(cof);
        }
    }

    // Deterministic presentation: descending leading monomials.
    std::vector<size_t> perm(basis.gens.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
        return order.greater(basis.gens[a].leading_monomial(), basis.gens[b].leading_monomial());
    });
    std::vector<ZpPoly> sg;
    std::vector<std::vector<ZpPoly>> sc;
    for (size_t i : perm) {
        sg.push_back(std::move(basis.gens[i]));
        sc.push_back(std::move(basis.cofactors[i]));
    }
    basis.gens = std::move(sg);
    basis.cofactors = std::move(sc);
    return basis;
}

NormalFormResult normal_form(const ZpPoly& q, const TrackedBasis& basis) {
    if (q.nvars != basis.nvars) throw InvalidArgument("normal_form: arity mismatch");
    return divide(q, basis.gens, ZpRing{basis.field}, basis.order);
}

std::vector<Monomial> normal_set(const TrackedBasis& basis,
                                 const std::vector<std::string>& var_names) {
    const int n = basis.nvars;
    std::vector<int> bound(n, -1);
    for (const auto& g : basis.gens) {
        const Monomial& lm = g.leading_monomial();
        int nz = -1;
        bool pure = true;
        for (int k = 0; k < n; ++k) {
            if (lm.e[k] == 0) continue;
            if (nz >= 0) {
                pure = false;
                break;
            }
            nz = k;
        }
        if (pure && nz >= 0 && (bound[nz] < 0 || lm.e[nz] < bound[nz])) bound[nz] = lm.e[nz];
        if (pure && nz < 0) return {};  // 1 in the ideal: empty variety
    }
    for (int k = 0; k < n; ++k)
        if (bound[k] < 0) {
            const std::string vn =
                k < static_cast<int>(var_names.size()) ? var_names[k] : "x" + std::to_string(k);
            throw GenerationFailure(
                "ideal is not zero-dimensional: no leading term is a pure power of " + vn);
        }

    long long box = 1;
    for (int k = 0; k < n; ++k) {
        box *= bound[k];
        if (box > 1000000) throw GenerationFailure("normal set enumeration bound exceeded");
    }

    std::vector<Monomial> out;
    Monomial cur = Monomial::one(n);
    // Enumerate the exponent box and keep monomials not divisible by any
    // leading term.
    std::vector<int> idx(n, 0);
    while (true) {
        for (int k = 0; k < n; ++k) cur.e[k] = static_cast<std::uint16_t>(idx[k]);
        bool divisible = false;
        for (const auto& g : basis.gens)
            if (g.leading_monomial().divides(cur)) {
                divisible = true;
                break;
            }
        if (!divisible) out.push_back(cur);
        int k = 0;
        while (k < n && ++idx[k] >= bound[k]) idx[k++] = 0;
        if (k == n) break;
    }
    std::sort(out.begin(), out.end(),
              [&](const Monomial& a, const Monomial& b) { return basis.order.greater(a, b); });
    return out;
}

int quotient_dimension(const TrackedBasis& basis, const std::vector<std::string>& var_names) {
    return static_cast<int>(normal_set(basis, var_names).size());
}

ZpMatrix action_matrix_zp(const TrackedBasis& basis, const std::vector<Monomial>& B,
                          const Monomial& alpha) {
    const int m = static_cast<int>(B.size());
    std::map<Monomial, int> col;
    for (int i = 0; i < m; ++i) col[B[i]] = i;

    ZpMatrix M(m, m);
    const ZpRing ring{basis.field};
    for (int i = 0; i < m; ++i) {
        const Monomial r = alpha * B[i];
        auto it = col.find(r);
        if (it != col.end()) {
            M.at(i, it->second) = 1;
            continue;
        }
        auto nf = normal_form(poly_monomial(r, ring.one(), ring), basis);
        for (const auto& [mon, c] : nf.remainder.terms) {
            auto jt = col.find(mon);
            if (jt == col.end())
                throw GenerationFailure("action matrix: normal form leaves the basis span");
            M.at(i, jt->second) = c;
        }
    }
    return M;
}

// ---------------------------------------------------------------------------
// Syzygy module machinery (position-over-term order).

namespace {

struct ModTerm {
    int comp;
    Monomial mon;
    FieldElem c;
};

// Sorted descending under POT: lower component index is more significant,
// ties broken by the ambient order.
struct ModPoly {
    std::vector<ModTerm> terms;
    bool is_zero() const { return terms.empty(); }
    const ModTerm& lead() const { return terms.front(); }
};

int mod_cmp(const ModTerm& a, const ModTerm& b, const MonomialOrder& order) {
    if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
    return order.cmp(a.mon, b.mon);
}

ModPoly mod_from_vec(const std::vector<ZpPoly>& v, const MonomialOrder& order) {
    ModPoly r;
    for (int j = 0; j < static_cast<int>(v.size()); ++j)
        for (const auto& [m, c] : v[j].terms) r.terms.push_back({j, m, c});
    std::sort(r.terms.begin(), r.terms.end(),
              [&](const ModTerm& a, const ModTerm& b) { return mod_cmp(a, b, order) > 0; });
    return r;
}

std::vector<ZpPoly> mod_to_vec(const ModPoly& m, int ncomp, int nvars,
                               const MonomialOrder& order) {
    std::vector<ZpPoly> v(ncomp, ZpPoly{nvars, {}});
    for (const auto& t : m.terms) v[t.comp].terms.emplace_back(t.mon, t.c);
    // Terms arrive in POT order, which is ambient-descending within each
    // component already.
    (void)order;
    return v;
}

// r = a - c * mon * b
ModPoly mod_submul(const ModPoly& a, FieldElem c, const Monomial& mon, const ModPoly& b,
                   const ZpRing& ring, const MonomialOrder& order) {
    ModPoly r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    size_t i = 0, j = 0;
    const FieldElem nc = ring.neg(c);
    auto shifted = [&](size_t k) { return ModTerm{b.terms[k].comp, b.terms[k].mon * mon, ring.mul(nc, b.terms[k].c)}; };
    while (i < a.terms.size() || j < b.terms.size()) {
        int cmp;
        ModTerm bt;
        if (i >= a.terms.size()) {
            bt = shifted(j);
            cmp = -1;
        } else if (j >= b.terms.size()) {
            cmp = 1;
        } else {
            bt = shifted(j);
            cmp = mod_cmp(a.terms[i], bt, order);
        }
        if (cmp > 0) {
            r.terms.push_back(a.terms[i++]);
        } else if (cmp < 0) {
            if (bt.c != 0) r.terms.push_back(bt);
            ++j;
        } else {
            const FieldElem v = ring.add(a.terms[i].c, bt.c);
            if (v != 0) r.terms.push_back({a.terms[i].comp, a.terms[i].mon, v});
            ++i;
            ++j;
        }
    }
    return r;
}

ModPoly mod_monic(ModPoly m, const ZpRing& ring) {
    if (m.is_zero()) return m;
    const FieldElem inv = zp_inv(m.lead().c, ring.field);
    for (auto& t : m.terms) t.c = ring.mul(t.c, inv);
    return m;
}

// Remainder of m on division by the (monic) module generators.
ModPoly mod_reduce(ModPoly work, const std::vector<ModPoly>& gens, const ZpRing& ring,
                   const MonomialOrder& order) {
    ModPoly rem;
    while (!work.is_zero()) {
        const ModTerm& lt = work.lead();
        int hit = -1;
        for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
            if (gens[g].is_zero()) continue;
            const ModTerm& gl = gens[g].lead();
            if (gl.comp == lt.comp && gl.mon.divides(lt.mon)) {
                hit = g;
                break;
            }
        }
        if (hit < 0) {
            rem.terms.push_back(lt);
            work.terms.erase(work.terms.begin());
            continue;
        }
        const Monomial t = gens[hit].lead().mon.quotient_of(lt.mon);
        work = mod_submul(work, lt.c, t, gens[hit], ring, order);
    }
    return rem;
}

std::vector<ModPoly> module_groebner(std::vector<ModPoly> gens, const ZpRing& ring,
                                     const MonomialOrder& order) {
    for (auto& g : gens) g = mod_monic(std::move(g), ring);
    gens.erase(std::remove_if(gens.begin(), gens.end(), [](const ModPoly& g) { return g.is_zero(); }),
               gens.end());

    std::deque<std::pair<int, int>> pairs;
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j)
            if (gens[i].lead().comp == gens[j].lead().comp)
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));

    while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        const ModTerm &la = gens[i].lead(), &lb = gens[j].lead();
        const Monomial l = lcm(la.mon, lb.mon);
        ModPoly s = mod_submul(ModPoly{}, ring.neg(ring.one()), la.mon.quotient_of(l), gens[i],
                               ring, order);
        s = mod_submul(s, ring.one(), lb.mon.quotient_of(l), gens[j], ring, order);
        s = mod_reduce(std::move(s), gens, ring, order);
        if (s.is_zero()) continue;
        s = mod_monic(std::move(s), ring);
        const int idx = static_cast<int>(gens.size());
        gens.push_back(std::move(s));
        for (int k = 0; k < idx; ++k)
            if (gens[k].lead().comp == gens[idx].lead().comp) pairs.emplace_back(k, idx);
    }
    return gens;
}

}  // namespace

SyzygyBasis syzygy_basis(const std::vector<ZpPoly>& F, const TrackedBasis& basis) {
    const ZpRing ring{basis.field};
    const MonomialOrder& order = basis.order;
    const int m = static_cast<int>(F.size());
    const int nvars = basis.nvars;

    SyzygyBasis syz{basis.field, order, nvars, m, {}, {}};

    auto push_if_nonzero = [&](std::vector<ZpPoly> s) {
        for (const auto& c : s)
            if (!c.is_zero()) {
                syz.generators.push_back(std::move(s));
                return;
            }
    };

    // Relations from the redundancy of F against the basis: for each input,
    // f_j - sum_k a_k g_k = 0 composes to e_j - sum_k a_k cof[k].
    for (int j = 0; j < m; ++j) {
        auto nf = normal_form(F[j], basis);
        if (!nf.remainder.is_zero())
            throw GenerationFailure("syzygy_basis: input does not reduce to zero against its own basis");
        std::vector<ZpPoly> s(m, ZpPoly{nvars, {}});
        s[j] = poly_constant(nvars, ring.one(), ring);
        for (size_t k = 0; k < basis.gens.size(); ++k) {
            if (nf.cofactors[k].is_zero()) continue;
            auto negq = poly_neg(nf.cofactors[k], ring);
            accumulate_f_cofactors(s, negq, basis.cofactors[k], ring, order);
        }
        push_if_nonzero(std::move(s));
    }

    // Schreyer-style relations: every S-pair of the final basis reduces to
    // zero; its tracked cofactors compose to a syzygy of F.
    for (size_t a = 0; a < basis.gens.size(); ++a)
        for (size_t b = a + 1; b < basis.gens.size(); ++b) {
            const Monomial l =
                lcm(basis.gens[a].leading_monomial(), basis.gens[b].leading_monomial());
            const Monomial ta = basis.gens[a].leading_monomial().quotient_of(l);
            const Monomial tb = basis.gens[b].leading_monomial().quotient_of(l);
            ZpPoly s = poly_sub(poly_mul_monomial(basis.gens[a], ta, ring.one(), ring),
                                poly_mul_monomial(basis.gens[b], tb, ring.one(), ring), ring,
                                order);
            auto nf = divide(s, basis.gens, ring, order);
            if (!nf.remainder.is_zero())
                throw GenerationFailure("syzygy_basis: S-pair of a Groebner basis did not reduce to zero");
            std::vector<ZpPoly> sv(m, ZpPoly{nvars, {}});
            accumulate_f_cofactors(sv, poly_monomial(ta, ring.one(), ring), basis.cofactors[a],
                                   ring, order);
            {
                auto neg_tb = poly_monomial(tb, ring.neg(ring.one()), ring);
                accumulate_f_cofactors(sv, neg_tb, basis.cofactors[b], ring, order);
            }
            for (size_t k = 0; k < basis.gens.size(); ++k) {
                if (nf.cofactors[k].is_zero()) continue;
                auto negq = poly_neg(nf.cofactors[k], ring);
                accumulate_f_cofactors(sv, negq, basis.cofactors[k], ring, order);
            }
            push_if_nonzero(std::move(sv));
        }

    std::vector<ModPoly> mod_gens;
    mod_gens.reserve(syz.generators.size());
    for (const auto& s : syz.generators) mod_gens.push_back(mod_from_vec(s, order));
    auto gb = module_groebner(std::move(mod_gens), ring, order);
    for (const auto& g : gb) syz.module_gb.push_back(mod_to_vec(g, m, nvars, order));
    return syz;
}

std::vector<ZpPoly> syzygy_reduce(const std::vector<ZpPoly>& h, const SyzygyBasis& syz) {
    if (static_cast<int>(h.size()) != syz.ncomp)
        throw InvalidArgument("syzygy_reduce: component count mismatch");
    if (syz.module_gb.empty()) return h;
    const ZpRing ring{syz.field};

    std::vector<ModPoly> gb;
    gb.reserve(syz.module_gb.size());
    for (const auto& g : syz.module_gb) gb.push_back(mod_from_vec(g, syz.order));

    ModPoly reduced = mod_reduce(mod_from_vec(h, syz.order), gb, ring, syz.order);
    auto out = mod_to_vec(reduced, syz.ncomp, syz.nvars, syz.order);

    auto measure = [](const std::vector<ZpPoly>& v) {
        int deg = -1;
        size_t count = 0;
        for (const auto& c : v) {
            deg = std::max(deg, c.degree());
            count += c.terms.size();
        }
        return std::make_pair(deg, count);
    };
    return measure(out) < measure(h) ? out : h;
}

MultiplierSets multiplier_sets(const std::vector<ZpPoly>& F, const TrackedBasis& basis,
                               const std::vector<Monomial>& B, const Monomial& alpha,
                               const SyzygyBasis* syz) {
    const ZpRing ring{basis.field};
    const MonomialOrder& order = basis.order;
    const int m = static_cast<int>(F.size());

    std::set<Monomial> in_b(B.begin(), B.end());
    MultiplierSets out;
    out.per_equation.assign(m, {});
    std::vector<std::set<Monomial>> sets(m);

    for (const auto& b : B) {
        const Monomial r = alpha * b;
        if (in_b.count(r)) continue;
        out.reducibles.push_back(r);

        auto nf = normal_form(poly_monomial(r, ring.one(), ring), basis);
        std::vector<ZpPoly> h(m, ZpPoly{basis.nvars, {}});
        for (size_t k = 0; k < basis.gens.size(); ++k)
            accumulate_f_cofactors(h, nf.cofactors[k], basis.cofactors[k], ring, order);
        if (syz) h = syzygy_reduce(h, *syz);
        for (int j = 0; j < m; ++j)
            for (const auto& [mon, c] : h[j].terms) sets[j].insert(mon);
    }

    std::sort(out.reducibles.begin(), out.reducibles.end(),
              [&](const Monomial& a, const Monomial& b) { return order.greater(a, b); });
    for (int j = 0; j < m; ++j) {
        out.per_equation[j].assign(sets[j].begin(), sets[j].end());
        std::sort(out.per_equation[j].begin(), out.per_equation[j].end(),
                  [&](const Monomial& a, const Monomial& b) { return order.greater(a, b); });
    }
    return out;
}

}  // namespace gaps

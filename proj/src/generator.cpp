#include "gaps/generator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "gaps/errors.hpp"

namespace gaps {

namespace {

Monomial default_action(const ProblemSpec& problem) {
    return Monomial::var(problem.nvars(), 0);
}

// Index map for the template columns.
std::map<Monomial, int> column_index(const SolverTemplate& t) {
    std::map<Monomial, int> idx;
    int j = 0;
    for (const auto& m : t.excessive) idx[m] = j++;
    for (const auto& m : t.reducible) idx[m] = j++;
    for (const auto& m : t.basis) idx[m] = j++;
    return idx;
}

struct Trial {
    std::vector<ZpPoly> F;
    std::optional<TrackedBasis> basis;
    int dim = -1;
    std::optional<std::vector<FieldElem>> truth;
};

}  // namespace

CoeffProgram build_coeff_program(const ProblemSpec& problem) {
    return build_coeff_program(problem.pool, problem.equations, problem.num_input_scalars(),
                               problem.nvars());
}

std::optional<SymmetryDescriptor> detect_symmetries(const ProblemSpec& problem) {
    const int n = problem.nvars();
    if (n <= 0 || n > 20) return std::nullopt;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        std::vector<int> parity(problem.equations.size(), 0);
        for (size_t e = 0; e < problem.equations.size() && ok; ++e) {
            int cls = -1;
            for (const auto& [mon, c] : problem.equations[e].terms) {
                int w = 0;
                for (int k = 0; k < n; ++k)
                    if (mask & (1u << k)) w += mon.e[k];
                w &= 1;
                if (cls < 0)
                    cls = w;
                else if (cls != w) {
                    ok = false;
                    break;
                }
            }
            parity[e] = std::max(cls, 0);
        }
        if (!ok) continue;
        SymmetryDescriptor sym;
        sym.flip.resize(n);
        for (int k = 0; k < n; ++k) sym.flip[k] = (mask & (1u << k)) != 0;
        sym.fold = 2;
        sym.equation_parity = std::move(parity);
        return sym;
    }
    return std::nullopt;
}

ZpMatrix assemble_zp(const SolverTemplate& t, const Bindings<FieldElem>& knowns,
                     const FieldSpec& field) {
    const ZpRing ring{field};
    std::vector<FieldElem> flat;
    for (const auto& arg : t.knowns) {
        auto it = knowns.find(arg.name);
        if (it == knowns.end())
            throw InvalidArgument("missing binding for known argument '" + arg.name + "'");
        if (static_cast<int>(it->second.size()) != arg.size())
            throw InvalidArgument("binding for '" + arg.name + "' has wrong size");
        flat.insert(flat.end(), it->second.begin(), it->second.end());
    }
    const auto slots = t.program.run(flat, ring);

    const auto idx = column_index(t);
    ZpMatrix C(t.num_rows(), t.num_columns());
    for (int r = 0; r < t.num_rows(); ++r) {
        const auto& [mult, eq] = t.recipe[r];
        for (const auto& [mon, slot] : t.program.equations[eq]) {
            auto it = idx.find(mult * mon);
            if (it == idx.end())
                throw GenerationFailure("template column list does not cover all row monomials");
            C.at(r, it->second) = field.add(C.at(r, it->second), slots[slot]);
        }
    }
    return C;
}

ZpMatrix eliminate_zp(const ZpMatrix& C, const SolverTemplate& t, const FieldSpec& field) {
    const int ne = static_cast<int>(t.excessive.size());
    const int nr = static_cast<int>(t.reducible.size());
    const int nb = static_cast<int>(t.basis.size());
    ZpMatrix R = C;

    std::vector<int> pivot_row_of_col(ne + nr, -1);
    std::vector<bool> used(R.rows, false);
    for (int col = 0; col < ne + nr; ++col) {
        int piv = -1;
        for (int i = 0; i < R.rows; ++i)
            if (!used[i] && R.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) {
            if (col >= ne)
                throw GenerationFailure("Z_p validation: reducible column has no pivot");
            continue;
        }
        used[piv] = true;
        pivot_row_of_col[col] = piv;
        const FieldElem inv = zp_inv(R.at(piv, col), field);
        for (int j = col; j < R.cols; ++j) R.at(piv, j) = field.mul(R.at(piv, j), inv);
        for (int i = 0; i < R.rows; ++i) {
            if (i == piv || R.at(i, col) == 0) continue;
            const FieldElem f = R.at(i, col);
            for (int j = col; j < R.cols; ++j)
                R.at(i, j) = field.sub(R.at(i, j), field.mul(f, R.at(piv, j)));
        }
    }

    // Reducible rows must realize [0 I -M'] exactly: zero on all excessive
    // columns (pivot columns are zero by construction of the RREF).
    for (int rcol = 0; rcol < nr; ++rcol) {
        const int row = pivot_row_of_col[ne + rcol];
        for (int j = 0; j < ne; ++j)
            if (pivot_row_of_col[j] < 0 && R.at(row, j) != 0)
                throw GenerationFailure(
                    "Z_p validation: reducible row has residue on an excessive column");
    }

    std::map<Monomial, int> bidx;
    for (int i = 0; i < nb; ++i) bidx[t.basis[i]] = i;

    ZpMatrix M(nb, nb);
    for (int i = 0; i < nb; ++i) {
        const Monomial r = t.action * t.basis[i];
        auto it = bidx.find(r);
        if (it != bidx.end()) {
            M.at(i, it->second) = 1;
            continue;
        }
        int rcol = -1;
        for (int k = 0; k < nr; ++k)
            if (t.reducible[k] == r) {
                rcol = k;
                break;
            }
        if (rcol < 0) throw GenerationFailure("action times basis monomial missing from template");
        const int row = pivot_row_of_col[ne + rcol];
        for (int b = 0; b < nb; ++b) M.at(i, b) = field.neg(R.at(row, ne + nr + b));
    }
    return M;
}

std::vector<FieldElem> zp_charpoly(const ZpMatrix& M, const FieldSpec& field) {
    const int n = M.rows;
    ZpMatrix A = M;
    std::vector<std::vector<FieldElem>> block_polys;

    int hi = n;  // rows [0, hi) remain to be reduced
    int k = hi - 1;
    while (k >= 1) {
        // Ensure pivot A[k][k-1] != 0, swapping among columns j < k.
        if (A.at(k, k - 1) == 0) {
            int j = -1;
            for (int c = 0; c < k - 1; ++c)
                if (A.at(k, c) != 0) {
                    j = c;
                    break;
                }
            if (j < 0) {
                // Rows k..hi-1 are already in companion form over columns
                // k..hi-1: emit that block and recurse on the leading block.
                std::vector<FieldElem> poly;  // ascending
                const int m = hi - k;
                poly.resize(m + 1, 0);
                poly[m] = 1;
                for (int c = 0; c < m; ++c)
                    poly[m - 1 - c] = field.neg(A.at(k, k + c));
                block_polys.push_back(poly);
                hi = k;
                k = hi - 1;
                continue;
            }
            for (int r = 0; r < n; ++r) std::swap(A.at(r, j), A.at(r, k - 1));
            for (int c = 0; c < n; ++c) std::swap(A.at(j, c), A.at(k - 1, c));
        }
        const FieldElem piv = A.at(k, k - 1);
        const FieldElem inv = zp_inv(piv, field);
        // B = A * S where S scales column k-1 by 1/piv and subtracts
        // multiples to zero out the rest of row k.
        std::vector<FieldElem> row_k(A.a.begin() + static_cast<size_t>(k) * n,
                                     A.a.begin() + static_cast<size_t>(k + 1) * n);
        for (int r = 0; r < hi; ++r) {
            const FieldElem v = field.mul(A.at(r, k - 1), inv);
            for (int c = 0; c < hi; ++c) {
                if (c == k - 1) continue;
                A.at(r, c) = field.sub(A.at(r, c), field.mul(v, row_k[c]));
            }
            A.at(r, k - 1) = v;
        }
        // A = S^{-1} * B: row k-1 becomes row_k * B.
        std::vector<FieldElem> new_row(n, 0);
        for (int c = 0; c < hi; ++c) {
            FieldElem acc = 0;
            for (int r = 0; r < hi; ++r) acc = field.add(acc, field.mul(row_k[r], A.at(r, c)));
            new_row[c] = acc;
        }
        for (int c = 0; c < hi; ++c) A.at(k - 1, c) = new_row[c];
        // Row k is now e_{k-1} by construction.
        for (int c = 0; c < hi; ++c) A.at(k, c) = (c == k - 1) ? 1 : 0;
        --k;
    }
    {
        // Remaining leading block is companion with top row A[0][0..hi).
        std::vector<FieldElem> poly(hi + 1, 0);
        poly[hi] = 1;
        for (int c = 0; c < hi; ++c) poly[hi - 1 - c] = field.neg(A.at(0, c));
        if (hi > 0) block_polys.push_back(poly);
    }

    std::vector<FieldElem> acc{1};
    for (const auto& b : block_polys) {
        std::vector<FieldElem> next(acc.size() + b.size() - 1, 0);
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                next[i + j] = field.add(next[i + j], field.mul(acc[i], b[j]));
        acc = std::move(next);
    }
    return acc;
}

std::vector<FieldElem> zp_poly_roots(const std::vector<FieldElem>& coeffs, const FieldSpec& field) {
    std::vector<FieldElem> roots;
    for (FieldElem x = 0; x < field.p; ++x) {
        FieldElem acc = 0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = field.add(field.mul(acc, x), coeffs[i]);
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

namespace {

// End-to-end exact checks of a template on one Z_p instance.
void validate_on_instance(const SolverTemplate& t, const ProblemSpec& problem,
                          const ZpInstance& inst, const std::vector<ZpPoly>& F,
                          const TrackedBasis& basis, const FieldSpec& field) {
    const ZpRing ring{field};
    const ZpMatrix C = assemble_zp(t, inst.knowns, field);
    const ZpMatrix M = eliminate_zp(C, t, field);
    const int nb = static_cast<int>(t.basis.size());

    // When this instance's normal set matches the template basis, the action
    // matrix from an independent Groebner computation must agree exactly.
    if (normal_set(basis, t.var_names) == t.basis) {
        const ZpMatrix M_gb = action_matrix_zp(basis, t.basis, t.action);
        if (!(M == M_gb))
            throw GenerationFailure(
                "validation: template action matrix disagrees with Groebner action matrix");
    }

    // Eigen relation at the sampled ground truth: M b(x*) = alpha(x*) b(x*).
    if (inst.truth) {
        const auto& x = *inst.truth;
        std::vector<FieldElem> b(nb);
        for (int i = 0; i < nb; ++i)
            b[i] = evaluate(poly_monomial(t.basis[i], ring.one(), ring), x, ring);
        const FieldElem a =
            evaluate(poly_monomial(t.action, ring.one(), ring), x, ring);
        for (int i = 0; i < nb; ++i) {
            FieldElem lhs = 0;
            for (int j = 0; j < nb; ++j) lhs = field.add(lhs, field.mul(M.at(i, j), b[j]));
            if (lhs != field.mul(a, b[i]))
                throw GenerationFailure("validation: eigen relation fails at ground truth");
        }
    }

    // Every Z_p-rational eigenvalue with a 1-dimensional eigenspace and a
    // finite representative must decode to an exact solution of F.
    const auto cp = zp_charpoly(M, field);
    int one_idx = -1;
    for (int i = 0; i < nb; ++i)
        if (t.basis[i].is_one()) one_idx = i;
    if (one_idx < 0) throw GenerationFailure("validation: basis does not contain 1");

    for (FieldElem lam : zp_poly_roots(cp, field)) {
        ZpMatrix K = M;
        for (int i = 0; i < nb; ++i) K.at(i, i) = field.sub(K.at(i, i), lam);
        const ZpMatrix null = zp_nullspace(K, field);
        if (null.cols != 1) continue;
        std::vector<FieldElem> v(nb);
        for (int i = 0; i < nb; ++i) v[i] = null.at(i, 0);
        if (v[one_idx] == 0) continue;
        const FieldElem scale = zp_inv(v[one_idx], field);
        for (auto& e : v) e = field.mul(e, scale);

        std::vector<FieldElem> x(t.nvars());
        bool extractable = true;
        for (int k = 0; k < t.nvars() && extractable; ++k) {
            const Monomial xk = Monomial::var(t.nvars(), k);
            int direct = -1;
            for (int i = 0; i < nb; ++i)
                if (t.basis[i] == xk) direct = i;
            if (direct >= 0) {
                x[k] = v[direct];
                continue;
            }
            bool found = false;
            for (int a = 0; a < nb && !found; ++a)
                for (int b2 = 0; b2 < nb && !found; ++b2) {
                    if (v[b2] == 0) continue;
                    if (xk * t.basis[b2] == t.basis[a]) {
                        x[k] = field.mul(v[a], zp_inv(v[b2], field));
                        found = true;
                    }
                }
            extractable = found;
        }
        if (!extractable) continue;
        for (const auto& f : F)
            if (evaluate(f, x, ZpRing{field}) != 0)
                throw GenerationFailure(
                    "validation: decoded Z_p eigen-solution does not satisfy the system");
    }
}

}  // namespace

SolverTemplate generate_template(const ProblemSpec& problem, const GenerateOptions& opts) {
    if (!problem.sample_zp)
        throw InvalidArgument("problem '" + problem.name + "' has no Z_p sampler");
    if (opts.trials < 1) throw InvalidArgument("generate_template: trials must be >= 1");

    const FieldSpec field(opts.prime);
    const ZpRing ring{field};
    Rng rng(opts.seed);
    const Monomial alpha = opts.action.value_or(default_action(problem));
    if (alpha.nvars() != problem.nvars() || alpha.is_one())
        throw InvalidArgument("action monomial must be a non-unit monomial in the unknowns");
    const int m = static_cast<int>(problem.equations.size());

    // Z_p trials.
    std::vector<Trial> trials(opts.trials);
    std::string last_error = "";
    for (auto& tr : trials) {
        const ZpInstance inst = problem.sample_zp(field, rng);
        try {
            tr.F = instantiate_zp(problem, inst.knowns, field);
            tr.basis = buchberger(tr.F, problem.order, field);
            tr.dim = quotient_dimension(*tr.basis, problem.var_names);
            tr.truth = inst.truth;
        } catch (const Error& e) {
            tr.dim = -1;
            last_error = e.what();
        }
    }

    // Majority vote on the quotient dimension; discard disagreeing trials.
    std::map<int, int> votes;
    for (const auto& tr : trials)
        if (tr.dim > 0) ++votes[tr.dim];
    int best_dim = -1, best_count = 0;
    for (auto [d, c] : votes)
        if (c > best_count) {
            best_dim = d;
            best_count = c;
        }
    if (best_dim < 0)
        throw GenerationFailure("generate_template: every Z_p trial failed" +
                                (last_error.empty() ? "" : " (" + last_error + ")"));
    if (best_count * 2 <= opts.trials)
        throw GenerationFailure("generate_template: unstable quotient dimension, no majority in " +
                                std::to_string(opts.trials) + " trials");

    // Union of normal sets over the kept trials.
    std::set<Monomial> basis_union;
    int kept = 0;
    for (const auto& tr : trials) {
        if (tr.dim != best_dim) continue;
        ++kept;
        for (const auto& b : normal_set(*tr.basis, problem.var_names)) basis_union.insert(b);
    }
    std::vector<Monomial> B(basis_union.begin(), basis_union.end());
    std::sort(B.begin(), B.end(),
              [&](const Monomial& a, const Monomial& b) { return problem.order.greater(a, b); });

    // Union of multiplier sets over the kept trials.
    std::vector<std::set<Monomial>> mult_union(m);
    std::vector<Monomial> reducibles;
    for (const auto& tr : trials) {
        if (tr.dim != best_dim) continue;
        std::optional<SyzygyBasis> syz;
        if (opts.syzygy_reduction) syz = syzygy_basis(tr.F, *tr.basis);
        const MultiplierSets ms =
            multiplier_sets(tr.F, *tr.basis, B, alpha, syz ? &*syz : nullptr);
        reducibles = ms.reducibles;
        for (int j = 0; j < m; ++j)
            mult_union[j].insert(ms.per_equation[j].begin(), ms.per_equation[j].end());
    }

    SolverTemplate t;
    t.problem = problem.name;
    t.knowns = problem.knowns;
    t.var_names = problem.var_names;
    t.order = problem.order;
    t.action = alpha;
    t.basis = B;
    t.reducible = reducibles;
    t.solution_count = best_dim;
    t.program = build_coeff_program(problem);
    t.symmetry = detect_symmetries(problem);
    t.generator = {opts.prime, opts.seed, opts.trials, kept, opts.syzygy_reduction};

    for (int j = 0; j < m; ++j)
        for (const auto& mult : mult_union[j]) t.recipe.emplace_back(mult, j);
    std::sort(t.recipe.begin(), t.recipe.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return problem.order.greater(a.first, b.first);
    });
    if (t.recipe.empty())
        throw GenerationFailure("generate_template: empty row recipe (no reducible monomials?)");

    // Column list: symbolic supports of every recipe row, plus the basis and
    // reducible monomials themselves.
    std::set<Monomial> in_b(B.begin(), B.end());
    std::set<Monomial> in_r(reducibles.begin(), reducibles.end());
    std::set<Monomial> excessive;
    for (const auto& [mult, eq] : t.recipe)
        for (const auto& [mon, id] : problem.equations[eq].terms) {
            const Monomial c = mult * mon;
            if (!in_b.count(c) && !in_r.count(c)) excessive.insert(c);
        }
    t.excessive.assign(excessive.begin(), excessive.end());
    std::sort(t.excessive.begin(), t.excessive.end(),
              [&](const Monomial& a, const Monomial& b) { return problem.order.greater(a, b); });

    // Held-out validation, retrying only when the fresh instance is not
    // dimension-generic.
    bool validated = false;
    for (int attempt = 0; attempt < 3 && !validated; ++attempt) {
        const ZpInstance inst = problem.sample_zp(field, rng);
        const auto F = instantiate_zp(problem, inst.knowns, field);
        TrackedBasis basis = buchberger(F, problem.order, field);
        int dim = -1;
        try {
            dim = quotient_dimension(basis, problem.var_names);
        } catch (const Error&) {
            continue;
        }
        if (dim != best_dim) continue;
        validate_on_instance(t, problem, inst, F, basis, field);
        validated = true;
    }
    if (!validated)
        throw GenerationFailure(
            "generate_template: could not validate on a held-out Z_p instance");

    if (opts.triangular_reduction) t = reduce_triangular(t, problem, opts.seed + 0x517CC1B7ull);
    return t;
}

SolverTemplate reduce_triangular(const SolverTemplate& t, const ProblemSpec& problem,
                                 std::uint64_t probe_seed) {
    const int ne = static_cast<int>(t.excessive.size());
    const int rows = t.num_rows();
    SolverTemplate out = t;
    out.triangular.reset();
    if (ne == 0 || rows == 0) return out;

    const FieldSpec field(t.generator.prime);
    Rng rng(probe_seed);
    const ZpInstance inst = problem.sample_zp(field, rng);
    const ZpMatrix C = assemble_zp(t, inst.knowns, field);

    std::vector<bool> row_taken(rows, false), col_taken(ne, false);
    std::vector<int> sel_rows, sel_cols;
    // Greedy: repeatedly claim a column whose nonzero support among the
    // remaining rows is a single row; ties go to the earliest column, which
    // also favors the sparsest remaining rows.
    while (true) {
        int pick_col = -1, pick_row = -1;
        for (int c = 0; c < ne && pick_col < 0; ++c) {
            if (col_taken[c]) continue;
            int nz = 0, r_hit = -1;
            for (int r = 0; r < rows; ++r) {
                if (row_taken[r] || C.at(r, c) == 0) continue;
                ++nz;
                r_hit = r;
                if (nz > 1) break;
            }
            if (nz == 1) {
                pick_col = c;
                pick_row = r_hit;
            }
        }
        if (pick_col < 0) break;
        col_taken[pick_col] = true;
        row_taken[pick_row] = true;
        sel_cols.push_back(pick_col);
        sel_rows.push_back(pick_row);
    }

    if (sel_cols.empty()) return out;

    TriangularPlan plan;
    plan.k = static_cast<int>(sel_cols.size());
    plan.row_order = sel_rows;
    for (int r = 0; r < rows; ++r)
        if (!row_taken[r]) plan.row_order.push_back(r);
    plan.ecol_order = sel_cols;
    for (int c = 0; c < ne; ++c)
        if (!col_taken[c]) plan.ecol_order.push_back(c);
    out.triangular = std::move(plan);
    return out;
}

}  // namespace gaps

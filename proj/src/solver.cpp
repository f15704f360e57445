#include "gaps/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "gaps/errors.hpp"

namespace gaps {

namespace {

std::vector<double> flatten_inputs(const SolverTemplate& t, const Bindings<double>& inputs) {
    std::vector<double> flat;
    for (const auto& arg : t.knowns) {
        auto it = inputs.find(arg.name);
        if (it == inputs.end())
            throw InvalidArgument("missing binding for known argument '" + arg.name + "'");
        if (static_cast<int>(it->second.size()) != arg.size())
            throw InvalidArgument("binding for '" + arg.name + "' has " +
                                  std::to_string(it->second.size()) + " values, expected " +
                                  std::to_string(arg.size()));
        for (double v : it->second)
            if (!std::isfinite(v))
                throw DegenerateInstance("non-finite value in binding '" + arg.name + "'");
        flat.insert(flat.end(), it->second.begin(), it->second.end());
    }
    return flat;
}

std::map<Monomial, int> column_index(const SolverTemplate& t) {
    std::map<Monomial, int> idx;
    int j = 0;
    for (const auto& m : t.excessive) idx[m] = j++;
    for (const auto& m : t.reducible) idx[m] = j++;
    for (const auto& m : t.basis) idx[m] = j++;
    return idx;
}

}  // namespace

std::vector<Polynomial<double>> instantiate_from_program(const SolverTemplate& t,
                                                         const Bindings<double>& inputs) {
    const RealRing ring;
    const auto slots = t.program.run(flatten_inputs(t, inputs), ring);
    return t.program.equations_from_slots(slots, ring, t.order);
}

NumericMatrix assemble(const SolverTemplate& t, const Bindings<double>& inputs) {
    const RealRing ring;
    const auto slots = t.program.run(flatten_inputs(t, inputs), ring);
    for (double v : slots)
        if (!std::isfinite(v))
            throw DegenerateInstance("coefficient program produced a non-finite value");

    const auto idx = column_index(t);
    NumericMatrix C = NumericMatrix::Zero(t.num_rows(), t.num_columns());
    for (int r = 0; r < t.num_rows(); ++r) {
        const auto& [mult, eq] = t.recipe[r];
        for (const auto& [mon, slot] : t.program.equations[eq]) {
            auto it = idx.find(mult * mon);
            if (it == idx.end())
                throw InvalidArgument("template column list does not cover all row monomials");
            C(r, it->second) += slots[slot];
        }
    }
    return C;
}

Eigen::MatrixXd eliminate(const NumericMatrix& C_in, const SolverTemplate& t,
                          const SolveOptions& opts) {
    int ne = static_cast<int>(t.excessive.size());
    const int nr = static_cast<int>(t.reducible.size());
    const int nb = static_cast<int>(t.basis.size());

    NumericMatrix C;
    if (t.triangular && opts.use_triangular && t.triangular->k > 0) {
        // Apply the offline plan: permute, then eliminate the upper
        // triangular leading block by substitution.
        const TriangularPlan& plan = *t.triangular;
        const int k = plan.k;
        const int rows = C_in.rows();
        NumericMatrix P(rows, C_in.cols());
        for (int r = 0; r < rows; ++r) {
            const int src = plan.row_order[r];
            for (int c = 0; c < ne; ++c) P(r, c) = C_in(src, plan.ecol_order[c]);
            for (int c = ne; c < C_in.cols(); ++c) P(r, c) = C_in(src, c);
        }
        const double scale = P.topLeftCorner(k, k).cwiseAbs().maxCoeff();
        for (int i = 0; i < k; ++i)
            if (std::abs(P(i, i)) <= opts.pivot_tol * scale)
                throw DegenerateInstance("triangular reduction: vanishing diagonal entry");

        // Y = U^{-1} V by back substitution, then C' = X - W Y.
        const int rest_cols = C_in.cols() - k;
        NumericMatrix Y(k, rest_cols);
        for (int i = k - 1; i >= 0; --i) {
            Y.row(i) = P.row(i).tail(rest_cols);
            for (int j = i + 1; j < k; ++j) Y.row(i) -= P(i, j) * Y.row(j);
            Y.row(i) /= P(i, i);
        }
        C = P.bottomRightCorner(rows - k, rest_cols);
        C -= P.bottomLeftCorner(rows - k, k) * Y;
        ne -= k;
    } else {
        C = C_in;
    }

    // Gauss-Jordan over the excessive and reducible columns only.
    const int rows = static_cast<int>(C.rows());
    std::vector<int> pivot_row_of_col(ne + nr, -1);
    std::vector<bool> used(rows, false);
    for (int col = 0; col < ne + nr; ++col) {
        double colmax = 0;
        for (int i = 0; i < rows; ++i) colmax = std::max(colmax, std::abs(C(i, col)));
        int piv = -1;
        double best = 0;
        for (int i = 0; i < rows; ++i) {
            if (used[i]) continue;
            const double v = std::abs(C(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv < 0 || colmax == 0.0 || best <= opts.pivot_tol * colmax) {
            if (col >= ne)
                throw DegenerateInstance("degenerate instance: no pivot for reducible monomial");
            continue;
        }
        used[piv] = true;
        pivot_row_of_col[col] = piv;
        C.row(piv) /= C(piv, col);
        for (int i = 0; i < rows; ++i) {
            if (i == piv || C(i, col) == 0.0) continue;
            C.row(i) -= C(i, col) * C.row(piv);
        }
    }

    std::map<Monomial, int> bidx;
    for (int i = 0; i < nb; ++i) bidx[t.basis[i]] = i;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nb, nb);
    for (int i = 0; i < nb; ++i) {
        const Monomial r = t.action * t.basis[i];
        auto it = bidx.find(r);
        if (it != bidx.end()) {
            M(i, it->second) = 1.0;
            continue;
        }
        int rcol = -1;
        for (int k = 0; k < nr; ++k)
            if (t.reducible[k] == r) {
                rcol = k;
                break;
            }
        if (rcol < 0)
            throw InvalidArgument("template reducible list does not cover action products");
        const int row = pivot_row_of_col[ne + rcol];
        M.row(i) = -C.row(row).tail(nb);
    }
    return M;
}

std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> eigen_solve(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw InvalidArgument("eigen_solve: matrix must be square");
    if (!M.allFinite()) throw NumericFailure("eigen_solve: non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw NumericFailure("eigen_solve: QR iteration did not converge");
    const Eigen::VectorXcd vals = es.eigenvalues();
    const Eigen::MatrixXcd vecs = es.eigenvectors();
    const double scale = std::max(M.norm(), 1e-300);
    for (int i = 0; i < vals.size(); ++i) {
        const double res = (M.cast<std::complex<double>>() * vecs.col(i) - vals(i) * vecs.col(i)).norm();
        if (res > 1e-8 * scale)
            throw NumericFailure("eigen_solve: eigenpair residual exceeds tolerance");
    }
    return {vals, vecs};
}

std::vector<double> charpoly_danilevsky(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw InvalidArgument("charpoly: matrix must be square");
    const int n = static_cast<int>(M.rows());
    if (n == 0) return {1.0};
    Eigen::MatrixXd A = M;
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);

    std::vector<std::vector<double>> blocks;
    int hi = n;
    int k = hi - 1;
    while (k >= 1) {
        // Choose the largest pivot in row k among columns < k (similarity
        // swap), splitting off a companion block when the whole subrow is
        // negligible.
        int jmax = -1;
        double vmax = 0;
        for (int j = 0; j < k; ++j) {
            const double v = std::abs(A(k, j));
            if (v > vmax) {
                vmax = v;
                jmax = j;
            }
        }
        if (jmax < 0 || vmax <= 1e-13 * scale) {
            const int m = hi - k;
            std::vector<double> poly(m + 1, 0.0);
            poly[m] = 1.0;
            for (int c = 0; c < m; ++c) poly[m - 1 - c] = -A(k, k + c);
            blocks.push_back(std::move(poly));
            hi = k;
            k = hi - 1;
            continue;
        }
        if (jmax != k - 1) {
            A.col(jmax).swap(A.col(k - 1));
            A.row(jmax).swap(A.row(k - 1));
        }

        const double piv = A(k, k - 1);
        const Eigen::VectorXd row_k = A.row(k).head(hi);
        // A <- S^{-1} A S with S the Danilevsky elimination built from row k.
        for (int r = 0; r < hi; ++r) {
            const double v = A(r, k - 1) / piv;
            for (int c = 0; c < hi; ++c) {
                if (c == k - 1) continue;
                A(r, c) -= v * row_k(c);
            }
            A(r, k - 1) = v;
        }
        Eigen::VectorXd new_row = Eigen::VectorXd::Zero(hi);
        for (int c = 0; c < hi; ++c) {
            double acc = 0;
            for (int r = 0; r < hi; ++r) acc += row_k(r) * A(r, c);
            new_row(c) = acc;
        }
        A.row(k - 1).head(hi) = new_row;
        for (int c = 0; c < hi; ++c) A(k, c) = (c == k - 1) ? 1.0 : 0.0;
        --k;
    }
    {
        std::vector<double> poly(hi + 1, 0.0);
        poly[hi] = 1.0;
        for (int c = 0; c < hi; ++c) poly[hi - 1 - c] = -A(0, c);
        blocks.push_back(std::move(poly));
    }

    std::vector<double> acc{1.0};
    for (const auto& b : blocks) {
        std::vector<double> next(acc.size() + b.size() - 1, 0.0);
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) next[i + j] += acc[i] * b[j];
        acc = std::move(next);
    }
    return acc;
}

namespace {

double horner(const std::vector<double>& c, double x) {
    double acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    return d;
}

// Remainder of a / b (ascending coefficients), with tiny-leading-coefficient
// stripping relative to each polynomial's own scale.
std::vector<double> poly_rem(std::vector<double> a, const std::vector<double>& b) {
    const int db = static_cast<int>(b.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= db) {
        const int da = static_cast<int>(a.size()) - 1;
        const double f = a[da] / b[db];
        for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
        a.pop_back();
        while (!a.empty()) {
            double amax = 0;
            for (double v : a) amax = std::max(amax, std::abs(v));
            if (amax == 0.0 || std::abs(a.back()) > 1e-14 * amax) break;
            a.pop_back();
        }
    }
    return a;
}

std::vector<double> normalize_max(std::vector<double> p) {
    double m = 0;
    for (double v : p) m = std::max(m, std::abs(v));
    if (m > 0)
        for (double& v : p) v /= m;
    return p;
}

int sign_changes(const std::vector<std::vector<double>>& chain, double x) {
    int changes = 0, prev = 0;
    for (const auto& p : chain) {
        const double v = horner(p, x);
        const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace

std::vector<double> sturm_real_roots(const std::vector<double>& coeffs,
                                     std::optional<std::pair<double, double>> interval) {
    std::vector<double> p = coeffs;
    double pmax = 0;
    for (double v : p) pmax = std::max(pmax, std::abs(v));
    if (p.empty() || pmax == 0.0)
        throw InvalidArgument("sturm_real_roots: zero polynomial");
    while (!p.empty() && std::abs(p.back()) <= 1e-14 * pmax) p.pop_back();
    if (p.size() <= 1) return {};

    // Sturm chain by negated polynomial remainders.
    std::vector<std::vector<double>> chain;
    chain.push_back(normalize_max(p));
    chain.push_back(normalize_max(derivative(p)));
    while (chain.back().size() > 1) {
        auto rem = poly_rem(chain[chain.size() - 2], chain.back());
        double rmax = 0;
        for (double v : rem) rmax = std::max(rmax, std::abs(v));
        if (rem.empty() || rmax == 0.0) break;
        for (double& v : rem) v = -v;
        chain.push_back(normalize_max(rem));
    }

    double lo, hi;
    if (interval) {
        lo = interval->first;
        hi = interval->second;
    } else {
        const int deg = static_cast<int>(p.size()) - 1;
        double bound = 0;
        for (int i = 0; i < deg; ++i) bound = std::max(bound, std::abs(p[i] / p[deg]));
        bound += 1.0;
        lo = -bound;
        hi = bound;
    }
    if (!(lo < hi)) throw InvalidArgument("sturm_real_roots: empty interval");

    const int total = sign_changes(chain, lo) - sign_changes(chain, hi);
    std::vector<double> roots;

    struct Seg {
        double a, b;
        int va, vb;
    };
    std::vector<Seg> stack{{lo, hi, sign_changes(chain, lo), sign_changes(chain, hi)}};
    const auto dp = derivative(p);
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const int count = s.va - s.vb;
        if (count <= 0) continue;
        if (count == 1) {
            // Bisect on sign-change counts down to the target width.
            double a = s.a, b = s.b;
            int va = s.va, vb = s.vb;
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                const int vm = sign_changes(chain, mid);
                if (va - vm >= 1) {
                    b = mid;
                    vb = vm;
                } else {
                    a = mid;
                    va = vm;
                }
            }
            double root = 0.5 * (a + b);
            // Newton polish, kept only while it stays bracketed and improves.
            double x = root;
            for (int it = 0; it < 50; ++it) {
                const double fx = horner(p, x);
                const double dfx = horner(dp, x);
                if (dfx == 0.0) break;
                const double nx = x - fx / dfx;
                if (!(nx >= s.a && nx <= s.b)) break;
                if (std::abs(nx - x) <= 1e-16 * (1.0 + std::abs(x))) {
                    x = nx;
                    break;
                }
                x = nx;
            }
            if (std::abs(horner(p, x)) <= std::abs(horner(p, root))) root = x;
            roots.push_back(root);
            continue;
        }
        const double mid = 0.5 * (s.a + s.b);
        if (s.b - s.a <= 1e-14) {
            // Cluster narrower than resolvable width: report once.
            roots.push_back(mid);
            continue;
        }
        const int vm = sign_changes(chain, mid);
        stack.push_back({s.a, mid, s.va, vm});
        stack.push_back({mid, s.b, vm, s.vb});
    }

    std::sort(roots.begin(), roots.end());
    if (static_cast<int>(roots.size()) != total)
        throw NumericFailure("sturm_real_roots: isolation count mismatch");
    return roots;
}

namespace {

std::vector<std::complex<double>> apply_flip(const std::vector<std::complex<double>>& x,
                                             const SymmetryDescriptor& sym) {
    auto y = x;
    for (size_t k = 0; k < y.size(); ++k)
        if (sym.flip[k]) y[k] = -y[k];
    return y;
}

bool same_point(const std::vector<std::complex<double>>& a,
                const std::vector<std::complex<double>>& b) {
    for (size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k] - b[k]) > 1e-6 * (1.0 + std::abs(b[k]))) return false;
    return true;
}

std::complex<double> eval_monomial(const Monomial& m,
                                   const std::vector<std::complex<double>>& x) {
    std::complex<double> acc = 1.0;
    for (int k = 0; k < m.nvars(); ++k)
        for (int e = 0; e < m.e[k]; ++e) acc *= x[k];
    return acc;
}

}  // namespace

SolutionSet extract_solutions(const Eigen::VectorXcd& eigvals, const Eigen::MatrixXcd& eigvecs,
                              const SolverTemplate& t,
                              const std::vector<Polynomial<double>>& equations,
                              const SolveOptions& opts) {
    const int nb = static_cast<int>(t.basis.size());
    const int n = t.nvars();

    int one_idx = -1;
    for (int i = 0; i < nb; ++i)
        if (t.basis[i].is_one()) one_idx = i;
    if (one_idx < 0) throw InvalidArgument("template basis does not contain the monomial 1");

    // Extraction plan per variable: direct basis position, or ratio pairs
    // (a, b) with basis[a] = x_k * basis[b].
    std::vector<int> direct(n, -1);
    std::vector<std::vector<std::pair<int, int>>> ratios(n);
    for (int k = 0; k < n; ++k) {
        const Monomial xk = Monomial::var(n, k);
        for (int i = 0; i < nb; ++i)
            if (t.basis[i] == xk) direct[k] = i;
        if (direct[k] >= 0) continue;
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b)
                if (a != b && xk * t.basis[b] == t.basis[a]) ratios[k].emplace_back(a, b);
        if (ratios[k].empty() && !(t.action == xk))
            throw InvalidArgument("unknown '" + t.var_names[k] +
                                  "' is not recoverable from the basis");
    }

    SolutionSet out;
    for (int col = 0; col < eigvals.size(); ++col) {
        Eigen::VectorXcd v = eigvecs.col(col);
        v /= v.norm();
        if (std::abs(v(one_idx)) <= 1e-12) {
            ++out.skipped_at_infinity;
            continue;
        }
        v /= v(one_idx);

        Solution sol;
        sol.eigenvalue = eigvals(col);
        sol.unknowns.resize(n);
        bool usable = true;
        for (int k = 0; k < n && usable; ++k) {
            if (direct[k] >= 0) {
                sol.unknowns[k] = v(direct[k]);
            } else if (!ratios[k].empty()) {
                int best = -1;
                double mag = 0;
                for (int r = 0; r < static_cast<int>(ratios[k].size()); ++r) {
                    const double m = std::abs(v(ratios[k][r].second));
                    if (m > mag) {
                        mag = m;
                        best = r;
                    }
                }
                if (best < 0 || mag <= 1e-12) {
                    usable = false;
                    break;
                }
                sol.unknowns[k] = v(ratios[k][best].first) / v(ratios[k][best].second);
            } else {
                sol.unknowns[k] = sol.eigenvalue;  // action monomial is x_k itself
            }
        }
        if (!usable) {
            ++out.skipped_at_infinity;
            continue;
        }

        sol.is_real = true;
        for (const auto& u : sol.unknowns)
            if (std::abs(u.imag()) > opts.real_tol * (1.0 + std::abs(u.real()))) sol.is_real = false;

        sol.residuals.reserve(equations.size());
        for (const auto& f : equations)
            sol.residuals.push_back(std::abs(evaluate_complex(f, sol.unknowns)));
        out.solutions.push_back(std::move(sol));
    }

    if (t.symmetry) {
        // Keep one representative per flip orbit.
        std::vector<Solution> reps;
        for (auto& s : out.solutions) {
            bool dup = false;
            for (const auto& r : reps)
                if (same_point(r.unknowns, apply_flip(s.unknowns, *t.symmetry))) {
                    dup = true;
                    break;
                }
            if (!dup) reps.push_back(std::move(s));
        }
        if (opts.expand_symmetry) {
            const size_t nreps = reps.size();
            for (size_t i = 0; i < nreps; ++i) {
                auto flipped = apply_flip(reps[i].unknowns, *t.symmetry);
                if (same_point(flipped, reps[i].unknowns)) continue;  // self-symmetric
                Solution s;
                s.unknowns = flipped;
                s.eigenvalue = eval_monomial(t.action, flipped);
                s.is_real = reps[i].is_real;
                s.residuals.reserve(equations.size());
                for (const auto& f : equations)
                    s.residuals.push_back(std::abs(evaluate_complex(f, flipped)));
                reps.push_back(std::move(s));
            }
        }
        out.solutions = std::move(reps);
    }
    return out;
}

SolutionSet solve(const SolverTemplate& t, const Bindings<double>& inputs,
                  const SolveOptions& opts) {
    const NumericMatrix C = assemble(t, inputs);
    const Eigen::MatrixXd M = eliminate(C, t, opts);
    const auto equations = instantiate_from_program(t, inputs);

    if (opts.method == SolveMethod::EigenQR) {
        auto [vals, vecs] = eigen_solve(M);
        return extract_solutions(vals, vecs, t, equations, opts);
    }

    // Characteristic-polynomial path: Danilevsky, Sturm isolation, then an
    // eigenvector per real root by inverse iteration.
    const auto cp = charpoly_danilevsky(M);
    const auto roots = sturm_real_roots(cp);
    const int nb = static_cast<int>(t.basis.size());
    Eigen::VectorXcd vals(roots.size());
    Eigen::MatrixXcd vecs(nb, roots.size());
    const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
    for (size_t r = 0; r < roots.size(); ++r) {
        const double shift = roots[r] * (1.0 + 1e-12) + 1e-14 * scale;
        Eigen::MatrixXd K = M - shift * Eigen::MatrixXd::Identity(nb, nb);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
        Eigen::VectorXd v = Eigen::VectorXd::Ones(nb) / std::sqrt(double(nb));
        for (int it = 0; it < 2; ++it) {
            Eigen::VectorXd w = lu.solve(v);
            const double nw = w.norm();
            if (!std::isfinite(nw) || nw == 0.0) break;
            v = w / nw;
        }
        vals(r) = roots[r];
        vecs.col(r) = v.cast<std::complex<double>>();
    }
    return extract_solutions(vals, vecs, t, equations, opts);
}

}  // namespace gaps

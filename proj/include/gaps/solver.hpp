#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "gaps/problem.hpp"
#include "gaps/solver_template.hpp"

namespace gaps {

using NumericMatrix = Eigen::MatrixXd;

enum class SolveMethod { EigenQR, Charpoly };

struct SolveOptions {
    SolveMethod method = SolveMethod::EigenQR;
    // When the template records a sign symmetry the solver returns one
    // representative per orbit; this flag additionally emits the flipped
    // partners.
    bool expand_symmetry = false;
    // Apply the stored triangular-reduction plan when present.
    bool use_triangular = true;
    double pivot_tol = 1e-10;
    double real_tol = 1e-6;
};

struct Solution {
    std::vector<std::complex<double>> unknowns;
    std::complex<double> eigenvalue;
    std::vector<double> residuals;  // |f_i| at the solution, original equations
    bool is_real = false;

    double max_residual() const {
        double r = 0;
        for (double v : residuals) r = std::max(r, v);
        return r;
    }
};

struct SolutionSet {
    std::vector<Solution> solutions;
    int skipped_at_infinity = 0;
};

// Numeric template matrix from the coefficient program. Throws
// DegenerateInstance on non-finite inputs or program outputs.
NumericMatrix assemble(const SolverTemplate& t, const Bindings<double>& inputs);

// Gauss-Jordan elimination with scaled partial pivoting restricted to the
// excessive/reducible columns (after the triangular plan, when enabled);
// returns the action matrix. Throws DegenerateInstance when a reducible
// column has no usable pivot.
Eigen::MatrixXd eliminate(const NumericMatrix& C, const SolverTemplate& t,
                          const SolveOptions& opts = {});

// Full complex spectrum and eigenvectors (columns). Throws NumericFailure if
// the QR iteration fails or an eigenpair residual exceeds 1e-8 * |M|.
std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> eigen_solve(const Eigen::MatrixXd& M);

// Characteristic polynomial via Danilevsky similarity reduction to companion
// form; ascending coefficients, monic. Zero pivots are handled by row/column
// swaps and, when a full subrow vanishes, by block splitting.
std::vector<double> charpoly_danilevsky(const Eigen::MatrixXd& M);

// All real roots (distinct; multiple roots reported once) via a Sturm chain,
// bisection to width 1e-12 and a Newton polish. Default interval is the
// Cauchy bound. Throws InvalidArgument for the zero polynomial.
std::vector<double> sturm_real_roots(const std::vector<double>& coeffs,
                                     std::optional<std::pair<double, double>> interval = {});

// Reads solutions off scaled eigenvectors, attaches residuals against the
// instantiated equations, classifies realness and applies the symmetry
// policy.
SolutionSet extract_solutions(const Eigen::VectorXcd& eigvals, const Eigen::MatrixXcd& eigvecs,
                              const SolverTemplate& t,
                              const std::vector<Polynomial<double>>& equations,
                              const SolveOptions& opts = {});

// assemble -> eliminate -> eigen (QR or charpoly+Sturm) -> extract.
SolutionSet solve(const SolverTemplate& t, const Bindings<double>& inputs,
                  const SolveOptions& opts = {});

// The instantiated equations the solver computes residuals against.
std::vector<Polynomial<double>> instantiate_from_program(const SolverTemplate& t,
                                                         const Bindings<double>& inputs);

}  // namespace gaps

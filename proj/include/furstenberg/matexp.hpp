// matexp.hpp — Matrix exponential and logarithm kernels: generic
// scaling-and-squaring expm, the closed-form exponential of the block matrix
// [[0, I], [M, 0]], and the principal log near the identity.
#pragma once

#include "furstenberg/model.hpp"

namespace furstenberg {

// Symmetric eigendecomposition M = Q diag(values) Q^T, eigenvalues ascending.
struct EigenDecomposition {
    Vector values;
    Matrix vectors;
};

// Wraps the solver and checks orthogonality / reconstruction of the result.
// Throws NumericalError on non-convergence.
EigenDecomposition eigh(const Matrix& M);

// Generic matrix exponential: Pade(13,13) with norm-based scaling and
// squaring.  Throws NumericalError when the result leaves double range.
Matrix expm(const Matrix& A);

// Operator 2-norm (largest singular value).
double operator_norm(const Matrix& A);

// Scalar propagators of u'' = mu u over length ell:
//   c(mu) = cosh(ell sqrt(mu)) (mu > 0), cos(ell sqrt(-mu)) (mu < 0), 1 (mu = 0)
//   s(mu) = sinh(ell sqrt(mu))/sqrt(mu), sin(ell sqrt(-mu))/sqrt(-mu), ell.
// Below |mu| < mu_tol both switch to Taylor expansions in mu, which keeps s
// continuous across the removable singularity at mu = 0.
double propagator_c(double mu, double ell, double mu_tol = 1e-8);
double propagator_s(double mu, double ell, double mu_tol = 1e-8);

// exp(ell * [[0, I], [M, 0]]) through the eigendecomposition of symmetric M:
// [[Q c Q^T, Q s Q^T], [Q mu.s Q^T, Q c Q^T]].  Equals expm(ell X).
SpMatrix structured_transfer(const Matrix& M, double ell);

// Principal matrix logarithm for ||T - I||_2 < 1 (inverse scaling and
// squaring with Denman-Beavers square roots), projected onto sp_N(R).
// Throws std::invalid_argument outside the log neighborhood.
SpAlgebraElement logm_near_identity(const SpMatrix& T);

}  // namespace furstenberg

#include "furstenberg/matexp.hpp"

#include "furstenberg/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace furstenberg {

namespace {

double max_abs(const Matrix& A) {
    return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

// Pade(13,13) numerator/denominator split: U odd part, V even part.
void pade13(const Matrix& A, Matrix& U, Matrix& V) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
    const Matrix I = Matrix::Identity(A.rows(), A.cols());
    const Matrix A2 = A * A;
    const Matrix A4 = A2 * A2;
    const Matrix A6 = A4 * A2;
    Matrix tmp = A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2);
    tmp += b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I;
    U = A * tmp;
    V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2);
    V += b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

// Principal square root by the Denman-Beavers iteration; valid for matrices
// with no eigenvalues on the closed negative real axis.
Matrix sqrtm_db(const Matrix& A) {
    Matrix Y = A;
    Matrix Z = Matrix::Identity(A.rows(), A.cols());
    for (int it = 0; it < 60; ++it) {
        const Matrix Yn = 0.5 * (Y + Z.inverse());
        const Matrix Zn = 0.5 * (Z + Y.inverse());
        const double change = max_abs(Yn - Y);
        Y = Yn;
        Z = Zn;
        if (change <= 1e-15 * (1.0 + max_abs(Y))) return Y;
    }
    throw NumericalError("sqrtm: Denman-Beavers iteration did not converge");
}

}  // namespace

EigenDecomposition eigh(const Matrix& M) {
    if (M.rows() != M.cols() || M.rows() == 0)
        throw std::invalid_argument("eigh: matrix must be square and nonempty");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(M);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigh: eigendecomposition did not converge for M =\n" << M;
        throw NumericalError(msg.str());
    }
    EigenDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
    const int n = static_cast<int>(M.rows());
    const double orth =
        max_abs(dec.vectors * dec.vectors.transpose() - Matrix::Identity(n, n));
    const double recon = max_abs(
        dec.vectors * dec.values.asDiagonal() * dec.vectors.transpose() - M);
    if (orth > 1e-10 || recon > 1e-9 * (1.0 + max_abs(M))) {
        std::ostringstream msg;
        msg << "eigh: decomposition failed its residual checks for M =\n" << M;
        throw NumericalError(msg.str());
    }
    return dec;
}

double operator_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

Matrix expm(const Matrix& A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw std::invalid_argument("expm: matrix must be square and nonempty");
    if (!A.allFinite()) throw std::invalid_argument("expm: non-finite entries");

    // Scale so the 1-norm is below the Pade(13,13) threshold.
    const double theta13 = 5.371920351148152;
    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    Matrix As = A;
    if (norm1 > theta13) {
        std::frexp(norm1 / theta13, &squarings);
        As = A * std::ldexp(1.0, -squarings);
    }

    Matrix U, V;
    pade13(As, U, V);
    Matrix result = (V - U).partialPivLu().solve(V + U);
    for (int i = 0; i < squarings; ++i) result = result * result;

    if (!result.allFinite()) {
        std::ostringstream msg;
        msg << "expm: exponential overflows double range (||A||_1 = " << norm1 << ")";
        throw NumericalError(msg.str());
    }
    return result;
}

double propagator_c(double mu, double ell, double mu_tol) {
    if (std::abs(mu) < mu_tol) {
        const double l2 = ell * ell;
        return 1.0 + mu * l2 / 2.0 + mu * mu * l2 * l2 / 24.0 +
               mu * mu * mu * l2 * l2 * l2 / 720.0;
    }
    if (mu > 0.0) return std::cosh(ell * std::sqrt(mu));
    return std::cos(ell * std::sqrt(-mu));
}

double propagator_s(double mu, double ell, double mu_tol) {
    if (std::abs(mu) < mu_tol) {
        const double l2 = ell * ell;
        return ell * (1.0 + mu * l2 / 6.0 + mu * mu * l2 * l2 / 120.0 +
                      mu * mu * mu * l2 * l2 * l2 / 5040.0);
    }
    if (mu > 0.0) {
        const double r = std::sqrt(mu);
        return std::sinh(ell * r) / r;
    }
    const double r = std::sqrt(-mu);
    return std::sin(ell * r) / r;
}

SpMatrix structured_transfer(const Matrix& M, double ell) {
    if (!(ell > 0.0)) throw std::invalid_argument("structured_transfer: ell must be > 0");
    if (M.rows() != M.cols() || M.rows() == 0)
        throw std::invalid_argument("structured_transfer: M must be square and nonempty");
    if (max_abs(M - M.transpose()) > 1e-10 * (1.0 + max_abs(M)))
        throw std::invalid_argument("structured_transfer: M is not symmetric");

    const EigenDecomposition dec = eigh(0.5 * (M + M.transpose()));
    const int n = static_cast<int>(M.rows());
    const double mu_tol = 1e-8 * (1.0 + dec.values.cwiseAbs().maxCoeff());

    Vector c(n), s(n), mus(n);
    for (int i = 0; i < n; ++i) {
        const double mu = dec.values(i);
        c(i) = propagator_c(mu, ell, mu_tol);
        s(i) = propagator_s(mu, ell, mu_tol);
        mus(i) = mu * s(i);
    }

    const Matrix& Q = dec.vectors;
    Matrix T(2 * n, 2 * n);
    T.topLeftCorner(n, n) = Q * c.asDiagonal() * Q.transpose();
    T.topRightCorner(n, n) = Q * s.asDiagonal() * Q.transpose();
    T.bottomLeftCorner(n, n) = Q * mus.asDiagonal() * Q.transpose();
    T.bottomRightCorner(n, n) = T.topLeftCorner(n, n);
    return SpMatrix(std::move(T));
}

SpAlgebraElement logm_near_identity(const SpMatrix& T) {
    const int n2 = static_cast<int>(T.mat().rows());
    const Matrix I = Matrix::Identity(n2, n2);
    const double dist = operator_norm(T.mat() - I);
    if (!(dist < 1.0)) {
        std::ostringstream msg;
        msg << "logm_near_identity: ||T - I||_2 = " << dist
            << " is outside the log neighborhood";
        throw std::invalid_argument(msg.str());
    }

    // Inverse scaling and squaring: square-root until the series converges fast.
    Matrix A = T.mat();
    int sqrt_steps = 0;
    while ((A - I).norm() > 0.25 && sqrt_steps < 60) {
        A = sqrtm_db(A);
        ++sqrt_steps;
    }

    // Mercator series log(I + S) = S - S^2/2 + S^3/3 - ...
    const Matrix S = A - I;
    Matrix X = S;
    Matrix P = S;
    bool converged = max_abs(P) == 0.0;
    for (int k = 2; k <= 120 && !converged; ++k) {
        P = P * S;
        X += (k % 2 == 0 ? -1.0 : 1.0) / k * P;
        converged = max_abs(P) / k <= 1e-17 * (1.0 + max_abs(X));
    }
    if (!converged) throw NumericalError("logm_near_identity: series did not converge");

    X *= std::ldexp(1.0, sqrt_steps);

    // Round-off pushes the log off sp_N(R); project back (symmetrize J X).
    const Matrix J = symplectic_form(n2 / 2);
    X = 0.5 * (X + J * X.transpose() * J);
    return SpAlgebraElement(std::move(X));
}

}  // namespace furstenberg

#include "furstenberg/liealg.hpp"

#include "furstenberg/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace furstenberg {

namespace {

double max_abs(const Matrix& A) {
    return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

// Geometric mean of the nonzero generator Frobenius norms; 1 when all vanish.
double generator_scale(const std::vector<SpAlgebraElement>& generators) {
    double log_sum = 0.0;
    int count = 0;
    for (const auto& g : generators) {
        const double norm = g.mat().norm();
        if (norm > 0.0) {
            log_sum += std::log(norm);
            ++count;
        }
    }
    return count == 0 ? 1.0 : std::exp(log_sum / count);
}

// Incremental orthonormal span of vectorized matrices with a scale-aware
// acceptance threshold and the near-threshold indeterminacy flag.
class Span {
  public:
    Span(int n2, int capacity, double threshold)
        : n2_(n2), threshold_(threshold), vecs_(n2 * n2, capacity) {}

    // Projects the candidate out of the current span; adjoins the residual
    // direction when it clears the threshold.  Returns true when added.
    bool try_add(const Matrix& candidate) {
        Eigen::VectorXd v =
            Eigen::Map<const Eigen::VectorXd>(candidate.data(), candidate.size());
        for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
            for (int i = 0; i < dim_; ++i)
                v -= vecs_.col(i).dot(v) * vecs_.col(i);
        }
        const double residual = v.norm();
        if (residual >= 0.1 * threshold_ && residual <= 10.0 * threshold_)
            indeterminate_ = true;
        if (residual <= threshold_) return false;
        vecs_.col(dim_) = v / residual;
        mats_.push_back(
            Eigen::Map<const Matrix>(vecs_.col(dim_).data(), n2_, n2_));
        ++dim_;
        return true;
    }

    int dim() const { return dim_; }
    bool indeterminate() const { return indeterminate_; }
    const std::vector<Matrix>& mats() const { return mats_; }

  private:
    int n2_;
    double threshold_;
    int dim_ = 0;
    bool indeterminate_ = false;
    Matrix vecs_;
    std::vector<Matrix> mats_;
};

}  // namespace

int sp_dimension(int N) {
    if (N < 1) throw std::invalid_argument("sp_dimension: N must be >= 1");
    return N * (2 * N + 1);
}

SpAlgebraElement bracket(const SpAlgebraElement& A, const SpAlgebraElement& B) {
    if (A.mat().rows() != B.mat().rows())
        throw std::invalid_argument("bracket: dimension mismatch");
    return SpAlgebraElement(A.mat() * B.mat() - B.mat() * A.mat());
}

bool is_in_sp(const Matrix& X, double tol) {
    if (X.rows() != X.cols() || X.rows() == 0 || X.rows() % 2 != 0)
        throw std::invalid_argument("is_in_sp: matrix must be square with even size");
    const Matrix J = symplectic_form(static_cast<int>(X.rows()) / 2);
    return max_abs(X.transpose() * J + J * X) <= tol * (1.0 + max_abs(X));
}

LieSpan lie_closure(const std::vector<SpAlgebraElement>& generators, double tol) {
    if (generators.empty())
        throw std::invalid_argument("lie_closure: generator list is empty");
    if (!(tol > 0.0)) throw std::invalid_argument("lie_closure: tol must be > 0");
    const int n2 = static_cast<int>(generators.front().mat().rows());
    for (const auto& g : generators) {
        if (g.mat().rows() != n2)
            throw std::invalid_argument("lie_closure: generators differ in size");
    }

    const int N = n2 / 2;
    const int target = sp_dimension(N);
    const double scale = generator_scale(generators);
    const Matrix J = symplectic_form(N);
    // Exact-arithmetic no-op that strips the out-of-algebra round-off from a
    // candidate before the rank decision.
    auto project_sp = [&J](const Matrix& X) -> Matrix {
        return 0.5 * (X + J * X.transpose() * J);
    };

    Span span(n2, target, tol * scale);
    for (const auto& g : generators) span.try_add(project_sp(g.mat()));

    bool closed = span.dim() == target;
    int passes = 0;
    while (!closed) {
        if (++passes > 4 * target) {
            std::ostringstream msg;
            msg << "lie_closure: no stabilization after " << passes - 1
                << " passes (dim " << span.dim() << " of " << target << ")";
            throw NumericalError(msg.str());
        }
        bool added = false;
        const int snapshot = span.dim();
        for (int i = 0; i < snapshot && span.dim() < target; ++i) {
            const Matrix& B = span.mats()[i];
            for (const auto& g : generators) {
                added |= span.try_add(project_sp(B * g.mat() - g.mat() * B));
                if (span.dim() == target) break;
            }
        }
        closed = span.dim() == target || !added;
    }

    LieSpan result;
    result.basis = span.mats();
    result.dim = span.dim();
    result.target_dim = target;
    result.closed = closed;
    result.indeterminate = span.indeterminate();
    return result;
}

bool generates_sp(const std::vector<SpAlgebraElement>& generators) {
    const LieSpan span = lie_closure(generators);
    return span.dim == span.target_dim;
}

}  // namespace furstenberg

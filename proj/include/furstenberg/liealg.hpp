// liealg.hpp — Bracket-closure rank test: does a finite family of sp_N(R)
// elements generate the full Lie algebra?
#pragma once

#include "furstenberg/model.hpp"

namespace furstenberg {

// Default relative residual threshold for rank growth in lie_closure.
inline constexpr double kClosureTol = 1e-9;

// dim sp_N(R) = N(2N+1).
int sp_dimension(int N);

// Orthonormal basis (Frobenius inner product) of the Lie subalgebra spanned
// by a generator family together with its iterated brackets.
struct LieSpan {
    std::vector<Matrix> basis;  // unit Frobenius norm, pairwise orthogonal
    int dim = 0;
    int target_dim = 0;
    bool closed = false;
    // Some candidate residual fell within a decade of the acceptance
    // threshold; the dimension verdict is tolerance-sensitive there.
    bool indeterminate = false;
};

// Commutator AB - BA.
SpAlgebraElement bracket(const SpAlgebraElement& A, const SpAlgebraElement& B);

// Seeds the span with the generators, then repeatedly brackets every basis
// element with every generator, adjoining directions whose residual after
// projection exceeds tol * scale (scale = geometric mean of the nonzero
// generator Frobenius norms).  Left-normed brackets span the generated
// subalgebra, so generator-side bracketing is complete.  Stops when a full
// pass adds nothing or dim reaches N(2N+1).
LieSpan lie_closure(const std::vector<SpAlgebraElement>& generators,
                    double tol = kClosureTol);

// True iff the closure reaches dim sp_N(R) at the default tolerance.
bool generates_sp(const std::vector<SpAlgebraElement>& generators);

// Membership test ||X^T J + J X||_max <= tol * (1 + ||X||_max).
bool is_in_sp(const Matrix& X, double tol);

}  // namespace furstenberg

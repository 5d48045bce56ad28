// model.hpp — Parameters of the random operator and the per-cell matrices:
// M_omega(E), the Hamiltonian block matrix X_omega(E,V), and the transfer
// matrix T_omega(E) = exp(ell * X).
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace furstenberg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Standard symplectic form J = [[0, I_n], [-I_n, 0]].
Matrix symplectic_form(int n);

// One cell's Bernoulli configuration, omega in {0,1}^N.
class CellConfig {
  public:
    explicit CellConfig(std::vector<int> omega);

    int size() const { return static_cast<int>(omega_.size()); }
    int operator[](int i) const { return omega_[i]; }
    const std::vector<int>& values() const { return omega_; }

    // Position of this configuration in the lexicographic vertex enumeration
    // (first coordinate most significant).
    std::uint64_t index() const;

    std::string to_string() const;  // e.g. "(1,0)"

    bool operator==(const CellConfig& other) const = default;
    bool operator<(const CellConfig& other) const { return omega_ < other.omega_; }

  private:
    std::vector<int> omega_;
};

// Element of sp_N(R): 2N x 2N real X with X^T J + J X = 0.
// The constructor enforces the defining identity to a scale-aware tolerance.
class SpAlgebraElement {
  public:
    static constexpr double kFormTol = 1e-10;

    explicit SpAlgebraElement(Matrix entries);

    const Matrix& mat() const { return entries_; }
    int half_dim() const { return static_cast<int>(entries_.rows()) / 2; }

  private:
    Matrix entries_;
};

// Real symplectic matrix: T^T J T = J and det T = 1, both checked on
// construction to the documented tolerances.
class SpMatrix {
  public:
    static constexpr double kFormTol = 1e-9;
    static constexpr double kDetTol = 1e-8;

    explicit SpMatrix(Matrix entries);

    const Matrix& mat() const { return entries_; }
    int half_dim() const { return static_cast<int>(entries_.rows()) / 2; }

  private:
    Matrix entries_;
};

// Full description of the operator: channel count N, cell length ell,
// interaction potential V (symmetric N x N), and the Bernoulli parameter p
// of the coupling law nu = (1-p) delta_0 + p delta_1.
struct ModelSpec {
    static constexpr double kSymTol = 1e-12;

    int N = 1;
    double ell = 1.0;
    Matrix V;
    double bernoulli_p = 0.5;

    // Throws std::invalid_argument when a field is out of contract.
    void validate() const;

    // JSON document with keys "N", "ell", "V" (row-major array of rows) and
    // optional "bernoulli_p" (default 0.5).  Symmetry is validated on load;
    // parse errors carry line/column positions.
    static ModelSpec from_json(const std::string& text);
    static ModelSpec load(const std::string& path);
    std::string to_json() const;
};

// V + diag(omega_1 - E, ..., omega_N - E).
Matrix build_M(const ModelSpec& spec, const CellConfig& omega, double E);

// The block matrix [[0, I_N], [M_omega(E), 0]].
SpAlgebraElement build_X(const ModelSpec& spec, const CellConfig& omega, double E);

// exp(ell * X_omega(E,V)), computed by the structured spectral route.
SpMatrix transfer_matrix(const ModelSpec& spec, const CellConfig& omega, double E);

// All 2^N configurations in lexicographic order.  N must be in [1, 20].
std::vector<CellConfig> vertex_configs(int N);

// Tridiagonal matrix with zero diagonal and unit off-diagonals.
Matrix canonical_V0(int N);

// Symmetric matrix with independent standard Gaussian entries on and above
// the diagonal; deterministic given the seed.
Matrix sample_symmetric(int N, std::uint64_t seed);

}  // namespace furstenberg

#include "furstenberg/model.hpp"

#include "furstenberg/matexp.hpp"
#include "furstenberg/seeds.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace furstenberg {

namespace {

double max_abs(const Matrix& A) {
    return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

}  // namespace

Matrix symplectic_form(int n) {
    if (n < 1) throw std::invalid_argument("symplectic_form: n must be >= 1");
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = Matrix::Identity(n, n);
    J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return J;
}

CellConfig::CellConfig(std::vector<int> omega) : omega_(std::move(omega)) {
    if (omega_.empty()) throw std::invalid_argument("CellConfig: empty configuration");
    for (int v : omega_) {
        if (v != 0 && v != 1)
            throw std::invalid_argument("CellConfig: entries must be 0 or 1");
    }
}

std::uint64_t CellConfig::index() const {
    std::uint64_t idx = 0;
    for (int v : omega_) idx = (idx << 1) | static_cast<std::uint64_t>(v);
    return idx;
}

std::string CellConfig::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        if (i > 0) s += ',';
        s += omega_[i] ? '1' : '0';
    }
    s += ')';
    return s;
}

SpAlgebraElement::SpAlgebraElement(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() % 2 != 0 || entries_.rows() == 0)
        throw std::invalid_argument("SpAlgebraElement: matrix must be square with even size");
    const int n = static_cast<int>(entries_.rows()) / 2;
    const Matrix J = symplectic_form(n);
    const double residual = max_abs(entries_.transpose() * J + J * entries_);
    if (!(residual <= kFormTol * (1.0 + max_abs(entries_)))) {
        std::ostringstream msg;
        msg << "SpAlgebraElement: X^T J + J X residual " << residual
            << " exceeds tolerance";
        throw std::invalid_argument(msg.str());
    }
}

SpMatrix::SpMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() % 2 != 0 || entries_.rows() == 0)
        throw std::invalid_argument("SpMatrix: matrix must be square with even size");
    const int n = static_cast<int>(entries_.rows()) / 2;
    const Matrix J = symplectic_form(n);
    const double m = max_abs(entries_);
    const double residual = max_abs(entries_.transpose() * J * entries_ - J);
    if (!(residual <= kFormTol * (1.0 + m * m))) {
        std::ostringstream msg;
        msg << "SpMatrix: T^T J T - J residual " << residual << " exceeds tolerance";
        throw std::invalid_argument(msg.str());
    }
    const double det = entries_.determinant();
    if (!(std::abs(det - 1.0) <= kDetTol)) {
        std::ostringstream msg;
        msg << "SpMatrix: det " << det << " is not 1 within tolerance";
        throw std::invalid_argument(msg.str());
    }
}

void ModelSpec::validate() const {
    if (N < 1) throw std::invalid_argument("ModelSpec: N must be >= 1");
    if (!(ell > 0.0)) throw std::invalid_argument("ModelSpec: ell must be > 0");
    if (V.rows() != N || V.cols() != N)
        throw std::invalid_argument("ModelSpec: V must be N x N");
    if (!V.allFinite()) throw std::invalid_argument("ModelSpec: V has non-finite entries");
    if (max_abs(V - V.transpose()) > kSymTol)
        throw std::invalid_argument("ModelSpec: V is not symmetric within tolerance");
    if (!(bernoulli_p >= 0.0 && bernoulli_p <= 1.0))
        throw std::invalid_argument("ModelSpec: bernoulli_p must lie in [0,1]");
}

ModelSpec ModelSpec::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into line/column for the error message.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << "spec parse error at line " << line << ", column " << col << ": "
            << e.what();
        throw std::invalid_argument(msg.str());
    }

    ModelSpec spec;
    try {
        spec.N = doc.at("N").get<int>();
        spec.ell = doc.at("ell").get<double>();
        const auto& rows = doc.at("V");
        if (!rows.is_array())
            throw std::invalid_argument("spec field V must be an array of rows");
        spec.V = Matrix::Zero(spec.N < 0 ? 0 : spec.N, spec.N < 0 ? 0 : spec.N);
        if (static_cast<int>(rows.size()) != spec.N)
            throw std::invalid_argument("spec field V has wrong row count");
        for (int i = 0; i < spec.N; ++i) {
            const auto& row = rows.at(i);
            if (!row.is_array() || static_cast<int>(row.size()) != spec.N)
                throw std::invalid_argument("spec field V has wrong column count");
            for (int j = 0; j < spec.N; ++j) spec.V(i, j) = row.at(j).get<double>();
        }
        spec.bernoulli_p = doc.value("bernoulli_p", 0.5);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec field error: ") + e.what());
    }
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string ModelSpec::to_json() const {
    nlohmann::json doc;
    doc["N"] = N;
    doc["ell"] = ell;
    auto rows = nlohmann::json::array();
    for (int i = 0; i < N; ++i) {
        auto row = nlohmann::json::array();
        for (int j = 0; j < N; ++j) row.push_back(V(i, j));
        rows.push_back(std::move(row));
    }
    doc["V"] = std::move(rows);
    doc["bernoulli_p"] = bernoulli_p;
    return doc.dump();
}

Matrix build_M(const ModelSpec& spec, const CellConfig& omega, double E) {
    spec.validate();
    if (omega.size() != spec.N)
        throw std::invalid_argument("build_M: omega length does not match spec.N");
    Matrix M = spec.V;
    for (int i = 0; i < spec.N; ++i) M(i, i) += static_cast<double>(omega[i]) - E;
    return M;
}

SpAlgebraElement build_X(const ModelSpec& spec, const CellConfig& omega, double E) {
    const Matrix M = build_M(spec, omega, E);
    const int n = spec.N;
    Matrix X = Matrix::Zero(2 * n, 2 * n);
    X.topRightCorner(n, n) = Matrix::Identity(n, n);
    X.bottomLeftCorner(n, n) = M;
    return SpAlgebraElement(std::move(X));
}

SpMatrix transfer_matrix(const ModelSpec& spec, const CellConfig& omega, double E) {
    return structured_transfer(build_M(spec, omega, E), spec.ell);
}

std::vector<CellConfig> vertex_configs(int N) {
    if (N < 1 || N > 20)
        throw std::invalid_argument("vertex_configs: N must lie in [1, 20]");
    std::vector<CellConfig> configs;
    configs.reserve(std::size_t{1} << N);
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << N); ++idx) {
        std::vector<int> omega(N);
        for (int j = 0; j < N; ++j)
            omega[j] = static_cast<int>((idx >> (N - 1 - j)) & 1);
        configs.emplace_back(std::move(omega));
    }
    return configs;
}

Matrix canonical_V0(int N) {
    if (N < 1) throw std::invalid_argument("canonical_V0: N must be >= 1");
    Matrix V = Matrix::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) {
        V(i, i + 1) = 1.0;
        V(i + 1, i) = 1.0;
    }
    return V;
}

Matrix sample_symmetric(int N, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("sample_symmetric: N must be >= 1");
    std::mt19937_64 rng(seed);
    // Box-Muller on explicit 53-bit uniforms; std distributions are avoided
    // so output depends only on the mt19937_64 stream.
    auto gaussian = [&rng]() {
        const double u1 = 1.0 - to_unit_interval(rng());  // (0, 1]
        const double u2 = to_unit_interval(rng());
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    Matrix V(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
            const double g = gaussian();
            V(i, j) = g;
            V(j, i) = g;
        }
    }
    return V;
}

}  // namespace furstenberg

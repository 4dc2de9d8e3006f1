#include "superengine/dicke.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace superengine {

DickeBasis DickeBasis::make(int n_emitters) {
    if (n_emitters < 1) {
        throw std::invalid_argument("DickeBasis: n_emitters must be >= 1");
    }
    DickeBasis b;
    b.n_emitters = n_emitters;
    b.j = 0.5 * n_emitters;
    b.dim = n_emitters + 1;
    b.m_values.resize(b.dim);
    for (int i = 0; i < b.dim; ++i) {
        b.m_values[i] = -b.j + i;
    }
    return b;
}

void DensityMatrix::validate(double pos_floor) const {
    const auto d = elements.rows();
    if (d != elements.cols() || d != basis.dim) {
        throw std::invalid_argument("DensityMatrix: dimension mismatch with basis");
    }
    const double herm = (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) {
        throw std::runtime_error("DensityMatrix: Hermiticity defect " + std::to_string(herm));
    }
    const double tr_err = std::abs(elements.trace() - Complex(1.0, 0.0));
    if (tr_err > 1e-10) {
        throw std::runtime_error("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_err));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(elements, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("DensityMatrix: eigenvalue check failed");
    }
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -pos_floor) {
        throw std::runtime_error("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
}

double lowering_amplitude(const DickeBasis& basis, int level) {
    if (level <= 0 || level >= basis.dim) return 0.0;
    const double j = basis.j;
    const double m = basis.m_values[level];
    return std::sqrt(j * (j + 1.0) - m * (m - 1.0));
}

CollectiveOps build_collective_operators(const DickeBasis& basis) {
    const int d = basis.dim;
    Matrix jz = Matrix::Zero(d, d);
    Matrix jp = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        jz(i, i) = basis.m_values[i];
    }
    // J+|J,m> = sqrt(J(J+1) - m(m+1)) |J,m+1>; with ascending m this puts the
    // amplitudes one band below the diagonal.
    for (int i = 1; i < d; ++i) {
        jp(i, i - 1) = lowering_amplitude(basis, i);
    }
    Matrix jm = jp.adjoint();
    const Complex im(0.0, 1.0);
    CollectiveOps ops;
    ops.jz = {basis, jz, "Jz"};
    ops.jp = {basis, jp, "J+"};
    ops.jm = {basis, jm, "J-"};
    ops.jx = {basis, 0.5 * (jp + jm), "Jx"};
    ops.jy = {basis, (jp - jm) / (2.0 * im), "Jy"};
    return ops;
}

Operator build_hamiltonian(const DickeBasis& basis, double omega0) {
    if (omega0 <= 0.0) {
        throw std::invalid_argument("build_hamiltonian: omega0 must be > 0");
    }
    Matrix h = Matrix::Zero(basis.dim, basis.dim);
    for (int i = 0; i < basis.dim; ++i) {
        h(i, i) = omega0 * basis.m_values[i];
    }
    return {basis, h, "H"};
}

DensityMatrix thermal_state(const DickeBasis& basis, double omega0, double temperature) {
    if (temperature == 0.0) {
        throw std::invalid_argument("thermal_state: T must be nonzero; use ground_state/top_state");
    }
    if (omega0 <= 0.0) {
        throw std::invalid_argument("thermal_state: omega0 must be > 0");
    }
    const double beta = 1.0 / temperature;
    // Weights exp(-beta*omega0*m) in log space with max subtraction; beta*J
    // can otherwise overflow the double exponent range for large N.
    std::vector<double> logw(basis.dim);
    double max_logw = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < basis.dim; ++i) {
        logw[i] = -beta * omega0 * basis.m_values[i];
        max_logw = std::max(max_logw, logw[i]);
    }
    double norm = 0.0;
    for (double& w : logw) {
        w = std::exp(w - max_logw);
        norm += w;
    }
    Matrix rho = Matrix::Zero(basis.dim, basis.dim);
    for (int i = 0; i < basis.dim; ++i) {
        rho(i, i) = logw[i] / norm;
    }
    return {basis, rho};
}

static DensityMatrix pure_level(const DickeBasis& basis, int level) {
    Matrix rho = Matrix::Zero(basis.dim, basis.dim);
    rho(level, level) = 1.0;
    return {basis, rho};
}

DensityMatrix ground_state(const DickeBasis& basis) { return pure_level(basis, 0); }
DensityMatrix top_state(const DickeBasis& basis) { return pure_level(basis, basis.dim - 1); }

Complex expectation(const Operator& op, const DensityMatrix& rho) {
    if (!op.basis.same_as(rho.basis)) {
        throw std::invalid_argument("expectation: basis mismatch");
    }
    // Tr(A*B) = sum_ij A_ij B_ji without forming the product.
    return (op.elements.array() * rho.elements.transpose().array()).sum();
}

double real_expectation(const Operator& op, const DensityMatrix& rho) {
    return expectation(op, rho).real();
}

static void append_g12(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

std::string matrix_to_csv(const Matrix& mat) {
    std::string out;
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index k = 0; k < mat.cols(); ++k) {
            if (k > 0) out += ',';
            append_g12(out, mat(i, k).real());
            out += ',';
            append_g12(out, mat(i, k).imag());
        }
        out += '\n';
    }
    return out;
}

std::string matrix_to_json(const Matrix& mat) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        out += (i == 0) ? "[" : ",[";
        for (Eigen::Index k = 0; k < mat.cols(); ++k) {
            if (k > 0) out += ',';
            out += '[';
            append_g12(out, mat(i, k).real());
            out += ',';
            append_g12(out, mat(i, k).imag());
            out += ']';
        }
        out += ']';
    }
    out += ']';
    return out;
}

} // namespace superengine

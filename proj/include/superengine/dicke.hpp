// dicke.hpp — collective-spin basis, operators and states on the symmetric
// subspace J = N/2 (dimension N+1 instead of 2^N).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace superengine {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Symmetric-subspace basis |J,m>, m ascending from -J to +J.
struct DickeBasis {
    int n_emitters{0};
    double j{0.0};                // J = N/2
    int dim{0};                   // N + 1
    std::vector<double> m_values; // -J, -J+1, ..., +J

    static DickeBasis make(int n_emitters);
    bool same_as(const DickeBasis& other) const {
        return n_emitters == other.n_emitters;
    }
};

struct Operator {
    DickeBasis basis;
    Matrix elements;
    std::string label;
};

// Density matrix over a DickeBasis. validate() enforces Hermiticity, unit
// trace and numerical positivity of the eigenvalues.
struct DensityMatrix {
    DickeBasis basis;
    Matrix elements;

    void validate(double pos_floor = 1e-9) const;
};

struct CollectiveOps {
    Operator jx, jy, jz, jp, jm;
};

// Ladder amplitude <J,m-1|J-|J,m> = sqrt(J(J+1) - m(m-1)).
double lowering_amplitude(const DickeBasis& basis, int level);

CollectiveOps build_collective_operators(const DickeBasis& basis);

// H = omega0 * Jz (diagonal, entries omega0*m).
Operator build_hamiltonian(const DickeBasis& basis, double omega0);

// Gibbs state over the symmetric subspace, weights ~ exp(-omega0*m/T).
// Negative T yields an inverted population; T == 0 is rejected (use
// ground_state / top_state instead).
DensityMatrix thermal_state(const DickeBasis& basis, double omega0, double temperature);

DensityMatrix ground_state(const DickeBasis& basis); // |J,-J><J,-J|
DensityMatrix top_state(const DickeBasis& basis);    // |J,+J><J,+J|

// Tr(op * rho). For Hermitian op the imaginary part is a numerical defect.
Complex expectation(const Operator& op, const DensityMatrix& rho);
double real_expectation(const Operator& op, const DensityMatrix& rho);

// Debug dumps: one matrix row per line, elements as "re,im" pairs.
std::string matrix_to_csv(const Matrix& mat);
std::string matrix_to_json(const Matrix& mat);

} // namespace superengine

// mean_field.hpp — closed-form single-spin model of the collective pulse:
// sech/tanh Bloch trajectories, sech^2 intensity, and the self-consistency
// residual of the closed forms against their generating Hamiltonian.

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace superengine {

enum class Branch { emission, absorption };

struct MeanFieldParams {
    double omega0{1.0};
    int n_emitters{0};
    double gamma_up{0.0};
    double gamma_down{0.0};
    double r{0.0};      // Bloch radius, |tanh(omega0/(2T))|
    double theta0{0.0}; // tipping angle from the starting pole
    double phi0{0.0};
    double tau{0.0};    // pulse width, 2/(r N |gamma_down - gamma_up|)
    double t_d{0.0};    // delay of the pulse peak, tau * ln(cot(theta0/2))
    Branch branch{Branch::emission};

    double gamma_eff_abs() const; // |gamma_down - gamma_up|
};

struct BlochSample {
    double t{0.0};
    double sx{0.0};
    double sy{0.0};
    double sz{0.0};
};

// Pulse parameters from the thermal ignition state at temperature T_c.
// The sign of T_c selects the starting pole (T_c < 0: inverted population);
// theta0 is always measured from that pole.
MeanFieldParams derive_params(int n_emitters, double omega0, double T_c,
                              double gamma_up, double gamma_down, Branch branch);

BlochSample bloch_trajectory(const MeanFieldParams& params, double t);

// (N/2)^2 r |gamma_down - gamma_up| omega0 sech^2((t-t_d)/tau), always
// positive; params.branch records the energy direction.
double intensity(const MeanFieldParams& params, double t);
double intensity_peak(const MeanFieldParams& params);

// Representative two-level Hamiltonian driven by the transverse polarization,
// (omega0/2) sigma_z + (N/2)(gamma_down-gamma_up)(<sx> sigma_y - <sy> sigma_x).
Eigen::Matrix2cd h_mf(const MeanFieldParams& params, const BlochSample& sample);

// Max element-wise residual of d(rho)/dt + i[H(t), rho] over the grid, with
// rho built from the closed forms and the derivative taken by central finite
// difference; normalized by (N/2) |gamma_down - gamma_up| r.
double mf_residual(const MeanFieldParams& params, const std::vector<double>& t_grid);

} // namespace superengine

// lindblad.hpp — time-dependent Lindblad master-equation integration with
// collective jump operators.
//
// Two right-hand-side paths are kept deliberately:
//  * lindblad_rhs / integrate_channels: dense matrix products for arbitrary
//    channel operators. Serial; the reference the tests check against.
//  * CollectiveKernel / integrate: band-structure kernel for the collective
//    channels (J-, J+, Jz) and a diagonal Hamiltonian, O(dim^2) elementwise
//    with OpenMP over columns. This is the production path.

#pragma once

#include "superengine/dicke.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace superengine {

// Smooth pump window S_on(t) * (1 - S_off(t)), two tanh steps centred at
// t_on and t_off; x scales the pump rate relative to gamma_down.
struct SwitchingProfile {
    double t_on{0.0};
    double t_off{0.0};
    double tau_switch{0.0};
    double x{0.0};

    void validate() const;
};

double switching_value(const SwitchingProfile& profile, double t);

// Channel rates over one integration span. gamma_down drives J- always;
// the pump drives J+ at gamma_up_const + x * S(t) * gamma_down.
struct RateSchedule {
    double gamma_down{0.0};
    std::optional<SwitchingProfile> pump;
    double gamma_up_const{0.0};
    double gamma_phi{0.0};

    double pump_rate(double t) const;
    void validate() const;
};

struct IntegratorConfig {
    enum class Method { rk4 };
    double dt{0.0};
    Method method{Method::rk4};
    bool renormalize_trace{true};
    int sample_stride{1};
    bool store_states{false};
};

// Sampled observables of one integration. Times are strictly increasing;
// trace is recorded after renormalization, the pre-renormalization defect
// goes into max_trace_drift_rate.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> jz;      // <Jz>
    std::vector<double> jpjm;    // <J+J->
    std::vector<double> jmjp;    // <J-J+>
    std::vector<double> trace;
    std::vector<double> energy;  // omega0 * <Jz>
    std::vector<Matrix> states;  // only if store_states
    double max_trace_drift_rate{0.0};
    double max_hermiticity_defect{0.0};
    DensityMatrix final_state;

    std::string to_csv() const;
};

struct Channel {
    Operator op;
    std::function<double(double)> rate; // gamma(t) >= 0
};

// -i[H, rho] + sum_j gamma_j(t) (c rho c^dag - 1/2 {c^dag c, rho}).
// Dense reference implementation for arbitrary channel operators.
Matrix lindblad_rhs(const DensityMatrix& rho, const Operator& hamiltonian,
                    const std::vector<Channel>& channels, double t);

// Elementwise RHS for a diagonal Hamiltonian with the collective channels.
// All terms are gathers from rho shifted by at most one index in each
// direction, so the kernel is data-parallel over matrix elements.
class CollectiveKernel {
public:
    CollectiveKernel(const DickeBasis& basis, const std::vector<double>& h_diag);

    // out = rhs(rho) at rates (gamma_down, gamma_up, gamma_phi).
    void apply(const Matrix& rho, Matrix& out,
               double g_down, double g_up, double g_phi, bool parallel) const;

    double obs_jz(const Matrix& rho) const;
    double obs_jpjm(const Matrix& rho) const; // <J+J->
    double obs_jmjp(const Matrix& rho) const; // <J-J+>

    int dim() const { return dim_; }

private:
    int dim_;
    std::vector<double> h_;   // diagonal Hamiltonian entries
    std::vector<double> m_;   // Jz eigenvalues
    std::vector<double> low_; // low_[i]: amplitude i -> i-1 under J- (low_[0] = 0)
    std::vector<double> a2_;  // low_^2 = (J+J-) diagonal
    std::vector<double> b2_;  // (J-J+) diagonal
};

// Fixed-step RK4 over the collective kernel. H must be diagonal in the Dicke
// basis (it is omega0*Jz everywhere in this project); channels come from the
// schedule. Rates are evaluated at the RK substep times.
Trajectory integrate(const DensityMatrix& rho0, const Operator& hamiltonian,
                     const RateSchedule& schedule, double t_a, double t_b,
                     const IntegratorConfig& config);

// Same stepping on the dense reference RHS; arbitrary channels, serial.
Trajectory integrate_channels(const DensityMatrix& rho0, const Operator& hamiltonian,
                              const std::vector<Channel>& channels, double t_a, double t_b,
                              const IntegratorConfig& config);

struct EffectiveRates {
    double gamma_down{0.0};
    double gamma_up{0.0};
    double gamma_eff{0.0};
    std::optional<double> n_bar_eff; // undefined when gamma_eff == 0
};

// Two-reservoir (attenuator Gamma1/n1, amplifier Gamma2/n2) dressed rates.
EffectiveRates effective_rates(double Gamma1, double Gamma2, double n1, double n2);

// Asymptotic excited-state population gamma_up / (gamma_up + gamma_down).
double steady_state_tls(double gamma_up, double gamma_down);

} // namespace superengine

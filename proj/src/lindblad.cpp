#include "superengine/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace superengine {

void SwitchingProfile::validate() const {
    if (!(t_on < t_off)) throw std::invalid_argument("SwitchingProfile: t_on must precede t_off");
    if (!(tau_switch > 0.0)) throw std::invalid_argument("SwitchingProfile: tau_switch must be > 0");
    if (!(x > 0.0)) throw std::invalid_argument("SwitchingProfile: x must be > 0");
}

double switching_value(const SwitchingProfile& profile, double t) {
    const double s_on = 0.5 * (1.0 + std::tanh((t - profile.t_on) / profile.tau_switch));
    const double s_off = 0.5 * (1.0 + std::tanh((t - profile.t_off) / profile.tau_switch));
    return s_on * (1.0 - s_off);
}

double RateSchedule::pump_rate(double t) const {
    double g = gamma_up_const;
    if (pump) {
        g += pump->x * switching_value(*pump, t) * gamma_down;
    }
    return g;
}

void RateSchedule::validate() const {
    if (gamma_down < 0.0) throw std::invalid_argument("RateSchedule: gamma_down must be >= 0");
    if (gamma_up_const < 0.0) throw std::invalid_argument("RateSchedule: gamma_up_const must be >= 0");
    if (gamma_phi < 0.0) throw std::invalid_argument("RateSchedule: gamma_phi must be >= 0");
    if (pump) pump->validate();
}

// ---------------------------- dense reference --------------------------------

Matrix lindblad_rhs(const DensityMatrix& rho, const Operator& hamiltonian,
                    const std::vector<Channel>& channels, double t) {
    if (!rho.basis.same_as(hamiltonian.basis)) {
        throw std::invalid_argument("lindblad_rhs: basis mismatch");
    }
    const Complex im(0.0, 1.0);
    const Matrix& r = rho.elements;
    Matrix out = -im * (hamiltonian.elements * r - r * hamiltonian.elements);
    for (const auto& ch : channels) {
        const double g = ch.rate(t);
        if (g < 0.0) {
            throw std::invalid_argument("lindblad_rhs: negative rate at t=" + std::to_string(t));
        }
        if (g == 0.0) continue;
        const Matrix& c = ch.op.elements;
        const Matrix cdc = c.adjoint() * c;
        out += g * (c * r * c.adjoint() - 0.5 * (cdc * r + r * cdc));
    }
    return out;
}

// ---------------------------- collective kernel ------------------------------

CollectiveKernel::CollectiveKernel(const DickeBasis& basis, const std::vector<double>& h_diag)
    : dim_(basis.dim), h_(h_diag), m_(basis.m_values) {
    if (static_cast<int>(h_diag.size()) != basis.dim) {
        throw std::invalid_argument("CollectiveKernel: diagonal size mismatch");
    }
    low_.resize(dim_);
    a2_.resize(dim_);
    b2_.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        low_[i] = lowering_amplitude(basis, i);
        a2_[i] = low_[i] * low_[i];
    }
    for (int i = 0; i < dim_; ++i) {
        b2_[i] = (i + 1 < dim_) ? a2_[i + 1] : 0.0;
    }
}

void CollectiveKernel::apply(const Matrix& rho, Matrix& out,
                             double g_down, double g_up, double g_phi, bool parallel) const {
    const int d = dim_;
    const Complex* src = rho.data(); // column-major: (i,j) -> src[j*d + i]
    Complex* dst = out.data();
    const double* h = h_.data();
    const double* m = m_.data();
    const double* lo = low_.data();
    const double* a2 = a2_.data();
    const double* b2 = b2_.data();

#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < d; ++j) {
        const Complex* col = src + static_cast<std::ptrdiff_t>(j) * d;
        const Complex* col_up = (j + 1 < d) ? col + d : nullptr;
        const Complex* col_dn = (j > 0) ? col - d : nullptr;
        Complex* o = dst + static_cast<std::ptrdiff_t>(j) * d;
        for (int i = 0; i < d; ++i) {
            // -i (h_i - h_j) rho_ij
            Complex v = Complex(0.0, -(h[i] - h[j])) * col[i];
            // gamma_down D[J-]: lowering gathers from (i+1, j+1)
            double decay = -0.5 * (g_down * (a2[i] + a2[j]) + g_up * (b2[i] + b2[j]));
            if (g_phi != 0.0) {
                const double dm = m[i] - m[j];
                decay -= 0.5 * g_phi * dm * dm;
            }
            v += decay * col[i];
            if (g_down != 0.0 && col_up && i + 1 < d) {
                v += g_down * lo[i + 1] * lo[j + 1] * col_up[i + 1];
            }
            // gamma_up D[J+]: raising gathers from (i-1, j-1)
            if (g_up != 0.0 && col_dn && i > 0) {
                v += g_up * lo[i] * lo[j] * col_dn[i - 1];
            }
            o[i] = v;
        }
    }
}

double CollectiveKernel::obs_jz(const Matrix& rho) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += m_[i] * rho(i, i).real();
    return s;
}

double CollectiveKernel::obs_jpjm(const Matrix& rho) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += a2_[i] * rho(i, i).real();
    return s;
}

double CollectiveKernel::obs_jmjp(const Matrix& rho) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += b2_[i] * rho(i, i).real();
    return s;
}

// ------------------------------- stepping ------------------------------------

namespace {

constexpr std::int64_t kMaxSteps = 100'000'000;
constexpr double kPositivityFloor = 1e-6;

struct StepContext {
    std::function<void(const Matrix&, Matrix&, double)> rhs;
    Matrix k1, k2, k3, k4, tmp;
};

void rk4_step(StepContext& ctx, Matrix& rho, double t, double dt) {
    ctx.rhs(rho, ctx.k1, t);
    ctx.tmp = rho + (0.5 * dt) * ctx.k1;
    ctx.rhs(ctx.tmp, ctx.k2, t + 0.5 * dt);
    ctx.tmp = rho + (0.5 * dt) * ctx.k2;
    ctx.rhs(ctx.tmp, ctx.k3, t + 0.5 * dt);
    ctx.tmp = rho + dt * ctx.k3;
    ctx.rhs(ctx.tmp, ctx.k4, t + dt);
    rho += (dt / 6.0) * (ctx.k1 + 2.0 * ctx.k2 + 2.0 * ctx.k3 + ctx.k4);
}

Trajectory run_fixed_step(const DensityMatrix& rho0, double omega0_scale,
                          const CollectiveKernel* kernel, StepContext& ctx,
                          double t_a, double t_b, const IntegratorConfig& config) {
    if (!(t_a < t_b)) throw std::invalid_argument("integrate: t_a must precede t_b");
    if (!(config.dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
    if (config.sample_stride < 1) throw std::invalid_argument("integrate: sample_stride must be >= 1");
    rho0.validate();

    const double span = t_b - t_a;
    const std::int64_t n_steps = std::llround(std::ceil(span / config.dt - 1e-12));
    if (n_steps <= 0 || n_steps > kMaxSteps) {
        throw std::runtime_error("integrate: step count " + std::to_string(n_steps) + " out of range");
    }
    const double dt = span / static_cast<double>(n_steps);

    Matrix rho = rho0.elements;
    const int d = static_cast<int>(rho.rows());
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n_steps / config.sample_stride) + 2);

    auto record = [&](double t) {
        double jz, jpjm, jmjp;
        if (kernel) {
            jz = kernel->obs_jz(rho);
            jpjm = kernel->obs_jpjm(rho);
            jmjp = kernel->obs_jmjp(rho);
        } else {
            // Dense path: derive the collective observables from the basis.
            jz = 0.0;
            jpjm = 0.0;
            jmjp = 0.0;
            const DickeBasis& b = rho0.basis;
            for (int i = 0; i < d; ++i) {
                const double amp_dn = lowering_amplitude(b, i);
                const double amp_up = (i + 1 < d) ? lowering_amplitude(b, i + 1) : 0.0;
                jz += b.m_values[i] * rho(i, i).real();
                jpjm += amp_dn * amp_dn * rho(i, i).real();
                jmjp += amp_up * amp_up * rho(i, i).real();
            }
        }
        const double tr = rho.trace().real();
        traj.times.push_back(t);
        traj.jz.push_back(jz);
        traj.jpjm.push_back(jpjm);
        traj.jmjp.push_back(jmjp);
        traj.trace.push_back(tr);
        traj.energy.push_back(omega0_scale * jz);
        if (config.store_states) traj.states.push_back(rho);

        double min_diag = 0.0;
        for (int i = 0; i < d; ++i) min_diag = std::min(min_diag, rho(i, i).real());
        if (min_diag < -kPositivityFloor) {
            throw std::runtime_error("integrate: positivity violation " + std::to_string(min_diag) +
                                     " at t=" + std::to_string(t));
        }
    };

    record(t_a);
    for (std::int64_t step = 0; step < n_steps; ++step) {
        const double t = t_a + static_cast<double>(step) * dt;
        rk4_step(ctx, rho, t, dt);

        // Re-symmetrize; the RHS is trace-free analytically, so the drift
        // measured here is pure floating-point noise unless dt is too large.
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, herm);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        const double tr = rho.trace().real();
        traj.max_trace_drift_rate = std::max(traj.max_trace_drift_rate, std::abs(tr - 1.0) / dt);
        if (config.renormalize_trace && tr != 0.0) {
            rho /= tr;
        }

        if ((step + 1) % config.sample_stride == 0 || step + 1 == n_steps) {
            record(t_a + static_cast<double>(step + 1) * dt);
        }
    }

    traj.final_state = DensityMatrix{rho0.basis, rho};
    traj.final_state.validate(kPositivityFloor);
    return traj;
}

bool is_diagonal(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
        }
    }
    return true;
}

} // namespace

Trajectory integrate(const DensityMatrix& rho0, const Operator& hamiltonian,
                     const RateSchedule& schedule, double t_a, double t_b,
                     const IntegratorConfig& config) {
    schedule.validate();
    if (!rho0.basis.same_as(hamiltonian.basis)) {
        throw std::invalid_argument("integrate: basis mismatch");
    }
    if (!is_diagonal(hamiltonian.elements)) {
        throw std::invalid_argument("integrate: collective path requires a diagonal Hamiltonian");
    }
    std::vector<double> h_diag(rho0.basis.dim);
    for (int i = 0; i < rho0.basis.dim; ++i) h_diag[i] = hamiltonian.elements(i, i).real();
    // omega0 scale for the energy column; falls back to 1 for H == 0.
    double omega0_scale = 1.0;
    if (rho0.basis.m_values.back() != 0.0 && h_diag.back() != 0.0) {
        omega0_scale = h_diag.back() / rho0.basis.m_values.back();
    }

    CollectiveKernel kernel(rho0.basis, h_diag);
    StepContext ctx;
    const int d = rho0.basis.dim;
    ctx.k1.resize(d, d); ctx.k2.resize(d, d); ctx.k3.resize(d, d); ctx.k4.resize(d, d);
    ctx.tmp.resize(d, d);
    ctx.rhs = [&](const Matrix& r, Matrix& out, double t) {
        kernel.apply(r, out, schedule.gamma_down, schedule.pump_rate(t), schedule.gamma_phi, true);
    };
    return run_fixed_step(rho0, omega0_scale, &kernel, ctx, t_a, t_b, config, nullptr, nullptr);
}

Trajectory integrate_channels(const DensityMatrix& rho0, const Operator& hamiltonian,
                              const std::vector<Channel>& channels, double t_a, double t_b,
                              const IntegratorConfig& config) {
    double omega0_scale = 1.0;
    if (rho0.basis.m_values.back() != 0.0 && hamiltonian.elements(rho0.basis.dim - 1, rho0.basis.dim - 1).real() != 0.0) {
        omega0_scale = hamiltonian.elements(rho0.basis.dim - 1, rho0.basis.dim - 1).real() /
                       rho0.basis.m_values.back();
    }
    StepContext ctx;
    DensityMatrix scratch{rho0.basis, Matrix()};
    ctx.rhs = [&](const Matrix& r, Matrix& out, double t) {
        scratch.elements = r;
        out = lindblad_rhs(scratch, hamiltonian, channels, t);
    };
    return run_fixed_step(rho0, omega0_scale, nullptr, ctx, t_a, t_b, config, &hamiltonian, &channels);
}

// ------------------------------ rate formulas ---------------------------------

EffectiveRates effective_rates(double Gamma1, double Gamma2, double n1, double n2) {
    if (Gamma1 < 0.0 || Gamma2 < 0.0) {
        throw std::invalid_argument("effective_rates: coupling rates must be >= 0");
    }
    if (n1 < 0.0 || n2 < 0.0) {
        throw std::invalid_argument("effective_rates: occupations must be >= 0");
    }
    EffectiveRates r;
    r.gamma_down = Gamma1 * (n1 + 1.0) + Gamma2 * n2;
    r.gamma_up = Gamma1 * n1 + Gamma2 * (n2 + 1.0);
    r.gamma_eff = r.gamma_down - r.gamma_up;
    if (r.gamma_eff != 0.0) {
        r.n_bar_eff = (r.gamma_down * n1 + r.gamma_up * (n2 + 1.0)) / r.gamma_eff;
    }
    return r;
}

double steady_state_tls(double gamma_up, double gamma_down) {
    if (gamma_up < 0.0 || gamma_down < 0.0) {
        throw std::invalid_argument("steady_state_tls: rates must be >= 0");
    }
    const double total = gamma_up + gamma_down;
    if (total <= 0.0) {
        throw std::invalid_argument("steady_state_tls: gamma_up + gamma_down must be > 0");
    }
    return gamma_up / total;
}

// ------------------------------- CSV export ----------------------------------

std::string Trajectory::to_csv() const {
    std::string out = "t,jz,jpjm,jmjp,trace,energy\n";
    char buf[160];
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      times[i], jz[i], jpjm[i], jmjp[i], trace[i], energy[i]);
        out += buf;
    }
    return out;
}

} // namespace superengine

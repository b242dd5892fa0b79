#pragma once

// Three-level master equation under rotating-wave drives.
//
// Component form (rates in GHz, applied as 2 pi x rate per ns):
//   d rho_ij/dt = -i [H, rho]_ij - c Gamma_ij (rho_ij - rhobar_ij),  i != j
//   d rho_11/dt = -i [H, rho]_11 + g12 r22 + g13 r33
//   d rho_22/dt = -i [H, rho]_22 - g12 r22 + g23 r33
//   d rho_33/dt = -i [H, rho]_33 - (g13 + g23) r33
// with r_ii = rho_ii - rhobar_ii and rhobar = |1><1|. The coherence factor c is
// 1 by default, the normalisation under which the closed-form susceptibilities
// are the exact second-order solution; c = 1/2 is available for the literal
// half-width reading.
//
// H/hbar = diag(0, w21, w31) + V(t), V_ij = i_ij Phi_l kappa e^{i w_l t} + h.c.,
// kappa = 2 pi E_J / h.

#include "fluxmix/response.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace fluxmix {

using density_matrix3 = Eigen::Matrix3cd;

inline density_matrix3 ground_state()
{
    density_matrix3 rho = density_matrix3::Zero();
    rho(0, 0) = 1.0;
    return rho;
}

struct density_check
{
    double hermiticity = 0.0; // max |rho - rho^dagger|
    double trace_error = 0.0; // |Tr rho - 1|
    double min_eigenvalue = 0.0;

    bool ok(double herm_tol = 1e-10, double trace_tol = 1e-9, double eig_tol = 1e-9) const
    {
        return hermiticity <= herm_tol && trace_error <= trace_tol &&
               min_eigenvalue >= -eig_tol;
    }
};

inline density_check check_density(const density_matrix3& rho)
{
    density_check c;
    c.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(rho.trace() - complex(1.0, 0.0));
    const density_matrix3 herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<density_matrix3> es(herm, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

enum class drive_config
{
    sum,       ///< drive 1 on 1<->2, drive 2 on 2<->3
    difference ///< drive 1 on 1<->3, drive 2 on 2<->3
};

struct drive_spec
{
    drive_config kind = drive_config::sum;
    double phi1 = 0.0; // Phi(omega_1) in Phi_0 units
    double phi2 = 0.0;
    double nu1 = 1.0; // GHz
    double nu2 = 1.0;
};

inline void validate(const drive_spec& d)
{
    if (d.phi1 < 0.0 || d.phi2 < 0.0)
        throw invalid_argument_error("drive amplitudes must be non-negative");
    if (!(d.nu1 > 0.0) || !(d.nu2 > 0.0))
        throw invalid_argument_error("drive frequencies must be positive");
}

enum class coherence_decay
{
    full_width, ///< coherences relax at 2 pi Gamma_ij
    half_width  ///< coherences relax at 2 pi Gamma_ij / 2
};

struct master_equation
{
    transition_data td;
    decoherence_rates rates;
    drive_spec drive;
    coherence_decay decay = coherence_decay::full_width;

    /// Level energies as angular frequencies (ground at zero).
    Eigen::Vector3d level_frequencies() const
    {
        return two_pi * Eigen::Vector3d(0.0, td.omega21, td.omega31);
    }

    /// Lab-frame drive operator V(t)/hbar in rad/ns.
    density_matrix3 drive_operator(double t) const
    {
        const double kappa = drive_coupling_scale(td);
        density_matrix3 v = density_matrix3::Zero();
        const complex e1 = std::polar(1.0, two_pi * drive.nu1 * t);
        const complex e2 = std::polar(1.0, two_pi * drive.nu2 * t);
        if (drive.kind == drive_config::sum) {
            v(0, 1) = td.i12 * drive.phi1 * kappa * e1;
            v(1, 2) = td.i23 * drive.phi2 * kappa * e2;
        } else {
            v(0, 2) = td.i13 * drive.phi1 * kappa * e1;
            v(1, 2) = td.i23 * drive.phi2 * kappa * e2;
        }
        v(1, 0) = std::conj(v(0, 1));
        v(2, 1) = std::conj(v(1, 2));
        v(2, 0) = std::conj(v(0, 2));
        return v;
    }

    /// Relaxation part of the right-hand side (frame independent).
    density_matrix3 relaxation(const density_matrix3& rho) const
    {
        const double c = decay == coherence_decay::full_width ? 1.0 : 0.5;
        density_matrix3 out = density_matrix3::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j)
                    out(i, j) = -c * two_pi * rates.Gamma(i + 1, j + 1) * rho(i, j);
        const complex r22 = rho(1, 1);
        const complex r33 = rho(2, 2);
        out(0, 0) = two_pi * (rates.gamma12 * r22 + rates.gamma13 * r33);
        out(1, 1) = two_pi * (-rates.gamma12 * r22 + rates.gamma23 * r33);
        out(2, 2) = -two_pi * (rates.gamma13 + rates.gamma23) * r33;
        return out;
    }

    /// d rho / dt in the lab frame (1/ns).
    density_matrix3 rhs(const density_matrix3& rho, double t) const
    {
        density_matrix3 h = drive_operator(t);
        h.diagonal() += level_frequencies().cast<complex>();
        const complex minus_i(0.0, -1.0);
        return minus_i * (h * rho - rho * h) + relaxation(rho);
    }

    /// d rho_I / dt in the frame rotating with the bare levels,
    /// rho_I = e^{iH0 t} rho e^{-iH0 t}.
    density_matrix3 rhs_interaction(const density_matrix3& rho_i, double t) const
    {
        const density_matrix3 v = to_interaction(drive_operator(t), t);
        const complex minus_i(0.0, -1.0);
        return minus_i * (v * rho_i - rho_i * v) + relaxation(rho_i);
    }

    density_matrix3 to_interaction(const density_matrix3& m, double t) const
    {
        return rotate(m, t, +1.0);
    }

    density_matrix3 to_lab(const density_matrix3& m, double t) const
    {
        return rotate(m, t, -1.0);
    }

private:
    density_matrix3 rotate(const density_matrix3& m, double t, double sign) const
    {
        const Eigen::Vector3d w = level_frequencies();
        density_matrix3 out;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out(i, j) = m(i, j) * std::polar(1.0, sign * (w[i] - w[j]) * t);
        return out;
    }
};

/// Free-function form of the lab-frame right-hand side.
inline density_matrix3 rhs(const density_matrix3& rho, double t, const transition_data& td,
                           const decoherence_rates& rates, const drive_spec& drive,
                           coherence_decay decay = coherence_decay::full_width)
{
    return master_equation{td, rates, drive, decay}.rhs(rho, t);
}

struct trajectory
{
    std::vector<double> times;           // ns
    std::vector<density_matrix3> states; // lab frame
};

struct evolve_options
{
    double t_final = 100.0; // ns
    double dt = 1e-3;       // ns
    int store_every = 1;
    coherence_decay decay = coherence_decay::full_width;
};

/// Fastest frequency (GHz) the integrator must resolve.
inline double fastest_frequency(const transition_data& td, const drive_spec& drive)
{
    return std::max({td.omega31, td.omega21, td.omega32, drive.nu1, drive.nu2});
}

/// Fixed-step RK4 integration from rho0.
///
/// Steps are taken in the frame rotating with the bare levels and every stored
/// state is mapped back to the lab frame with exact phases. The stored states
/// are checked against the density-matrix invariants; a violation aborts.
inline trajectory evolve(const density_matrix3& rho0, const transition_data& td,
                         const decoherence_rates& rates, const drive_spec& drive,
                         const evolve_options& opt = {})
{
    validate(rates);
    validate(drive);
    if (!(opt.dt > 0.0) || !(opt.t_final >= 0.0) || opt.store_every < 1)
        throw invalid_argument_error("evolve needs dt > 0, t_final >= 0, store_every >= 1");
    const double nu_max = fastest_frequency(td, drive);
    if (opt.dt > 1.0 / (20.0 * nu_max)) {
        std::ostringstream msg;
        msg << "time step " << opt.dt << " ns does not resolve " << nu_max
            << " GHz; need dt <= " << 1.0 / (20.0 * nu_max) << " ns";
        throw integration_error(msg.str());
    }
    const auto initial = check_density(rho0);
    if (!initial.ok())
        throw invalid_argument_error("initial state is not a valid density matrix");

    const master_equation eq{td, rates, drive, opt.decay};
    const auto steps = static_cast<long long>(std::llround(opt.t_final / opt.dt));

    trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps / opt.store_every + 2));
    traj.states.reserve(traj.times.capacity());
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    density_matrix3 y = rho0; // interaction frame; equal to the lab frame at t = 0
    const double h = opt.dt;
    for (long long s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * h;
        const density_matrix3 k1 = eq.rhs_interaction(y, t);
        const density_matrix3 k2 = eq.rhs_interaction(y + 0.5 * h * k1, t + 0.5 * h);
        const density_matrix3 k3 = eq.rhs_interaction(y + 0.5 * h * k2, t + 0.5 * h);
        const density_matrix3 k4 = eq.rhs_interaction(y + h * k3, t + h);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if ((s + 1) % opt.store_every == 0 || s + 1 == steps) {
            const double t_next = static_cast<double>(s + 1) * h;
            const density_matrix3 lab = eq.to_lab(y, t_next);
            const auto check = check_density(lab);
            if (!check.ok()) {
                std::ostringstream msg;
                msg << "density matrix invariant violated at t = " << t_next
                    << " ns (hermiticity " << check.hermiticity << ", trace error "
                    << check.trace_error << ", min eigenvalue " << check.min_eigenvalue
                    << "); reduce dt (currently " << h << " ns) or drive strength";
                throw integration_error(msg.str());
            }
            traj.times.push_back(t_next);
            traj.states.push_back(lab);
        }
    }
    return traj;
}

/// Fourier projection of rho_ij(t) onto e^{-i 2 pi nu t} over the last
/// `window_fraction` of the trajectory, truncated to an integer number of
/// periods ending at the final sample:
///   A = (1/T) int rho_ij(t) e^{+i 2 pi nu t} dt.
/// The demodulated signal is integrated with the trapezoid rule, so a pure
/// tone at nu is recovered exactly. nu may be negative; nu = 0 gives the mean.
inline complex extract_component(const trajectory& traj, int i, int j, double nu,
                                 double window_fraction = 0.2)
{
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw invalid_argument_error("element indices must be 0..2");
    if (traj.times.size() < 2)
        throw invalid_argument_error("trajectory too short for extraction");
    const double t_end = traj.times.back();
    const double window = window_fraction * (t_end - traj.times.front());
    double span = window;
    if (nu != 0.0) {
        const double period = 1.0 / std::abs(nu);
        const double periods = std::floor(window / period + 1e-9);
        if (periods < 1.0)
            throw invalid_argument_error("extraction window shorter than one period");
        span = periods * period;
    }
    if (!(span > 0.0))
        throw invalid_argument_error("empty extraction window");
    const double t_start = t_end - span;

    auto demod = [&](std::size_t k) {
        return traj.states[k](i, j) * std::polar(1.0, two_pi * nu * traj.times[k]);
    };

    // First stored sample strictly inside the window.
    const auto first = static_cast<std::size_t>(
        std::upper_bound(traj.times.begin(), traj.times.end(), t_start) -
        traj.times.begin());
    if (first == 0 || first >= traj.times.size())
        throw invalid_argument_error("extraction window outside trajectory");

    // Linear interpolation of the demodulated signal at t_start.
    const double ta = traj.times[first - 1];
    const double tb = traj.times[first];
    const double w = (t_start - ta) / (tb - ta);
    const complex g_start = (1.0 - w) * demod(first - 1) + w * demod(first);

    complex acc = 0.5 * (g_start + demod(first)) * (tb - t_start);
    for (std::size_t k = first; k + 1 < traj.times.size(); ++k)
        acc += 0.5 * (demod(k) + demod(k + 1)) * (traj.times[k + 1] - traj.times[k]);
    return acc / span;
}

struct oracle_options
{
    /// Each drive's coupling |i Phi kappa| as a fraction of 2 pi Gamma_min.
    double drive_fraction = 1.0 / 100.0;
    /// Samples per period of the fastest frequency.
    double samples_per_period = 20.0;
    int store_every = 4;
    /// Settling time in units of 1 / (2 pi Gamma_min), and in drive periods.
    double settle_decay_times = 10.0;
    double settle_periods = 50.0;
    double window_fraction = 0.2;
    double bilinearity_tolerance = 0.01;
    coherence_decay decay = coherence_decay::full_width;
};

/// Slowest coherence rate, GHz.
inline double slowest_coherence_rate(const decoherence_rates& r)
{
    return std::min({r.Gamma21(), r.Gamma31(), r.Gamma32()});
}

/// Drive amplitudes (Phi_0 units) whose couplings sit at the requested
/// fraction of the slowest coherence rate.
inline drive_spec weak_drive(const transition_data& td, const decoherence_rates& rates,
                             drive_config kind, double nu1, double nu2,
                             double fraction = 1.0 / 20.0)
{
    const double target = fraction * two_pi * slowest_coherence_rate(rates);
    const double kappa = drive_coupling_scale(td);
    const double e1 = std::abs(kind == drive_config::sum ? td.i12 : td.i13);
    const double e2 = std::abs(td.i23);
    constexpr double floor = 1e-300;
    drive_spec d;
    d.kind = kind;
    d.nu1 = nu1;
    d.nu2 = nu2;
    d.phi1 = target / (kappa * std::max(e1, floor));
    d.phi2 = target / (kappa * std::max(e2, floor));
    return d;
}

struct numeric_susceptibility
{
    susceptibility chi;
    complex coherence;         // extracted mixed-frequency coherence
    double bilinearity_error = 0.0;
    double max_coupling = 0.0; // rad/ns
    double duration = 0.0;     // ns
};

namespace detail {

struct mixed_tone
{
    int i;
    int j;
    double nu;
};

// Sum: P at +nu+ comes from rho_13 I_31. Difference: P at +nu- from rho_12 I_21.
inline mixed_tone mixed_coherence(const drive_spec& d)
{
    if (d.kind == drive_config::sum)
        return {0, 2, -(d.nu1 + d.nu2)};
    return {0, 1, -(d.nu1 - d.nu2)};
}

} // namespace detail

/// Master-equation estimate of the second-order susceptibility.
///
/// Integrates from the ground state, projects the coherence that radiates at
/// the mixed frequency, multiplies by the matching current element and divides
/// by Phi1 Phi2 kappa^2. The sign follows the closed-form convention
/// (chi = -P2 / (Phi1 Phi2 kappa^2)). A second run with Phi1 doubled measures
/// bilinearity; a relative defect above the tolerance sets regime_violation.
inline numeric_susceptibility chi2_numeric(const transition_data& td,
                                           const decoherence_rates& rates,
                                           const drive_spec& drive,
                                           const oracle_options& opt = {})
{
    validate(rates);
    validate(drive);
    if (drive.kind == drive_config::difference && !(drive.nu1 > drive.nu2))
        throw invalid_argument_error("difference configuration needs nu1 > nu2");
    if (!(drive.phi1 > 0.0) || !(drive.phi2 > 0.0))
        throw invalid_argument_error("both drive amplitudes must be positive");

    const double gamma_min = slowest_coherence_rate(rates);
    if (!(gamma_min > 0.0))
        throw invalid_argument_error("coherence rates must be positive for a steady state");

    const double nu_max = fastest_frequency(td, drive);
    const auto tone = detail::mixed_coherence(drive);
    const double nu_drive_min = std::min({drive.nu1, drive.nu2, std::abs(tone.nu)});
    const double settle = std::max(opt.settle_decay_times / (two_pi * gamma_min),
                                   opt.settle_periods / nu_drive_min);

    evolve_options ev;
    ev.dt = 1.0 / (opt.samples_per_period * nu_max);
    ev.t_final = settle / (1.0 - opt.window_fraction);
    ev.store_every = opt.store_every;
    ev.decay = opt.decay;

    const double kappa = drive_coupling_scale(td);
    const complex element = drive.kind == drive_config::sum ? td.i31() : td.i21();

    auto run = [&](const drive_spec& d) {
        const trajectory traj = evolve(ground_state(), td, rates, d, ev);
        return extract_component(traj, tone.i, tone.j, tone.nu, opt.window_fraction);
    };

    const complex a = run(drive);
    drive_spec doubled = drive;
    doubled.phi1 *= 2.0;
    const complex b = run(doubled);

    numeric_susceptibility out;
    out.coherence = a;
    out.duration = ev.t_final;
    const double e1 = std::abs(drive.kind == drive_config::sum ? td.i12 : td.i13);
    out.max_coupling = kappa * std::max(e1 * drive.phi1, std::abs(td.i23) * drive.phi2);
    const double scale = std::abs(a);
    out.bilinearity_error =
        scale > std::numeric_limits<double>::min() ? std::abs(b - 2.0 * a) / (2.0 * scale) : 0.0;

    out.chi.value = -a * element / (drive.phi1 * drive.phi2 * kappa * kappa);
    out.chi.kind = drive.kind == drive_config::sum ? mixing_kind::sum : mixing_kind::difference;
    out.chi.nu1 = drive.nu1;
    out.chi.nu2 = drive.nu2;
    out.chi.nu_out = std::abs(tone.nu);
    out.chi.regime_violation = out.bilinearity_error > opt.bilinearity_tolerance;
    return out;
}

struct oracle_check_result
{
    numeric_susceptibility numeric;
    susceptibility closed;
    double relative_error = 0.0;
};

/// Resonant (optionally detuned) oracle comparison at one flux point.
/// Sum: nu1 = nu21 + detune, nu2 = nu32. Difference: nu1 = nu31 + detune, nu2 = nu32.
inline oracle_check_result oracle_check(const circuit_params& params, const basis_spec& basis,
                                        const decoherence_rates& rates, drive_config kind,
                                        double detune = 0.0, const oracle_options& opt = {})
{
    const transition_data td = compute_transition_data(params, basis);
    double nu1 = 0.0;
    const double nu2 = td.omega32;
    oracle_check_result r;
    if (kind == drive_config::sum) {
        nu1 = td.omega21 + detune;
        r.closed = chi2_sum(td, rates, nu1, nu2);
    } else {
        nu1 = td.omega31 + detune;
        r.closed = chi2_diff(td, rates, nu1, nu2);
    }
    const drive_spec drive = weak_drive(td, rates, kind, nu1, nu2, opt.drive_fraction);
    r.numeric = chi2_numeric(td, rates, drive, opt);
    r.relative_error = std::abs(r.numeric.chi.value - r.closed.value) / std::abs(r.closed.value);
    return r;
}

} // namespace fluxmix

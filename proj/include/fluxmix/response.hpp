#pragma once

// Closed-form second-order response of the three-level reduction.
//
// Public inputs are ordinary frequencies nu in GHz; every formula works with
// angular frequencies omega = 2 pi nu (rad/ns), and rates enter as 2 pi Gamma.
// Susceptibilities are the printed perturbative expressions, without the
// 1/hbar^2 and overall minus sign carried by the output-field expression, so a
// value has units I_0^3 / (rad/ns)^2. The output field uses
// drive couplings i_ij * Phi * (2 pi E_J / h) in rad/ns with Phi in Phi_0.

#include "fluxmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>

namespace fluxmix {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Pure-dephasing (gamma_ii) and decay (gamma_ij) rates, GHz.
/// The defaults reproduce Gamma_21/2pi = 50 MHz and Gamma_31/2pi = 30 MHz.
struct decoherence_rates
{
    double gamma11 = 0.0;
    double gamma22 = 0.020;
    double gamma33 = 0.010;
    double gamma12 = 0.050;
    double gamma13 = 0.010;
    double gamma23 = 0.010;

    double Gamma21() const { return gamma12; }
    double Gamma31() const { return gamma13 + gamma23 + gamma33; }
    double Gamma32() const { return gamma12 + gamma13 + gamma23 + gamma22 + gamma33; }

    /// Total coherence rate for the (unordered) pair of 1-based levels.
    double Gamma(int i, int j) const
    {
        const int lo = std::min(i, j);
        const int hi = std::max(i, j);
        if (lo == 1 && hi == 2)
            return Gamma21();
        if (lo == 1 && hi == 3)
            return Gamma31();
        if (lo == 2 && hi == 3)
            return Gamma32();
        throw invalid_argument_error("Gamma(i, j) needs two distinct levels in 1..3");
    }

    bool operator==(const decoherence_rates&) const = default;
};

inline void validate(const decoherence_rates& r)
{
    for (const double g : {r.gamma11, r.gamma22, r.gamma33, r.gamma12, r.gamma13, r.gamma23})
        if (!(g >= 0.0) || !std::isfinite(g))
            throw invalid_argument_error("decoherence rates must be finite and non-negative");
}

/// Hook for flux-dependent rates. Empty by default: rates do not depend on f.
using rate_model = std::function<decoherence_rates(double f)>;

inline decoherence_rates rates_at(const decoherence_rates& base, const rate_model& model,
                                  double f)
{
    return model ? model(f) : base;
}

enum class mixing_kind
{
    sum,
    difference,
    second_harmonic
};

inline std::string to_string(mixing_kind k)
{
    switch (k) {
    case mixing_kind::sum:
        return "sum";
    case mixing_kind::difference:
        return "difference";
    case mixing_kind::second_harmonic:
        return "second-harmonic";
    }
    return "?";
}

struct susceptibility
{
    complex value;
    mixing_kind kind = mixing_kind::sum;
    double nu1 = 0.0;    // GHz
    double nu2 = 0.0;    // GHz
    double nu_out = 0.0; // generated frequency, GHz
    /// Difference generation evaluated at nu1 == nu2. The formula is only
    /// substituted; zero-frequency generation is not modelled further.
    bool zero_frequency = false;
    /// Set by the master-equation extraction when the response is not bilinear
    /// in the drive amplitudes.
    bool regime_violation = false;

    double modulus() const { return std::abs(value); }
};

/// Sum-frequency susceptibility for drive 1 on 1<->2 and drive 2 on 2<->3.
///   chi = i12 i23 i31 / [(i w1 - i w21 + 2pi G21)(i w+ - i w31 + 2pi G31)]
inline susceptibility chi2_sum(const transition_data& td, const decoherence_rates& rates,
                               double nu1, double nu2)
{
    if (!(nu1 > 0.0) || !(nu2 > 0.0))
        throw invalid_argument_error("sum-frequency drives need nu1, nu2 > 0");
    const complex i(0.0, 1.0);
    const double w1 = two_pi * nu1;
    const double w_plus = two_pi * (nu1 + nu2);
    const complex d1 = i * (w1 - two_pi * td.omega21) + two_pi * rates.Gamma21();
    const complex d2 = i * (w_plus - two_pi * td.omega31) + two_pi * rates.Gamma31();
    susceptibility chi;
    chi.value = td.i12 * td.i23 * td.i31() / (d1 * d2);
    chi.kind = mixing_kind::sum;
    chi.nu1 = nu1;
    chi.nu2 = nu2;
    chi.nu_out = nu1 + nu2;
    return chi;
}

/// Difference-frequency susceptibility for drive 1 on 1<->3 and drive 2 on
/// 2<->3. Under the rotating-wave pairing the generated tone is
/// nu- = nu1 - nu2, resonant when nu- = nu21 and nu1 = nu31.
///   chi = i13 i21 i32 / [(i w- - i w21 + 2pi G21)(i w1 - i w31 + 2pi G31)]
inline susceptibility chi2_diff(const transition_data& td, const decoherence_rates& rates,
                                double nu1, double nu2)
{
    if (!(nu2 > 0.0) || !(nu1 >= nu2))
        throw invalid_argument_error(
            "difference-frequency drives need nu1 >= nu2 > 0 (drive 1 on the 1<->3 gap)");
    const complex i(0.0, 1.0);
    const double w1 = two_pi * nu1;
    const double w_minus = two_pi * (nu1 - nu2);
    const complex d1 = i * (w_minus - two_pi * td.omega21) + two_pi * rates.Gamma21();
    const complex d2 = i * (w1 - two_pi * td.omega31) + two_pi * rates.Gamma31();
    susceptibility chi;
    chi.value = td.i13 * td.i21() * td.i32() / (d1 * d2);
    chi.kind = mixing_kind::difference;
    chi.nu1 = nu1;
    chi.nu2 = nu2;
    chi.nu_out = nu1 - nu2;
    chi.zero_frequency = (nu1 == nu2);
    return chi;
}

struct shg_response
{
    double delta = 0.0; // nu31/2 - nu21, GHz
    susceptibility chi;
};

/// Second-harmonic response at nu1 = nu2 = nu31/2:
///   chi = i12 i23 i31 / [(i 2pi delta + 2pi G12) 2pi G13]
/// whose modulus is |i12 i23 i31| / [2pi G13 sqrt((2pi delta)^2 + (2pi G12)^2)].
/// Only approximate near delta = 0, where correlated decay channels would
/// renormalise the rates.
inline shg_response chi2_shg(const transition_data& td, const decoherence_rates& rates)
{
    const complex i(0.0, 1.0);
    shg_response out;
    out.delta = 0.5 * td.omega31 - td.omega21;
    const complex d1 = i * two_pi * out.delta + two_pi * rates.Gamma21();
    const double d2 = two_pi * rates.Gamma31();
    out.chi.value = td.i12 * td.i23 * td.i31() / (d1 * d2);
    out.chi.kind = mixing_kind::second_harmonic;
    out.chi.nu1 = out.chi.nu2 = 0.5 * td.omega31;
    out.chi.nu_out = td.omega31;
    return out;
}

struct mixing_moduli_t
{
    double R = 0.0;  // |i12 i23 i31|
    double R1 = 0.0; // |i21 i32|
    double R2 = 0.0; // |i13 i32|
};

inline mixing_moduli_t mixing_moduli(const transition_data& td)
{
    return {std::abs(td.i12 * td.i23 * td.i31()), std::abs(td.i21() * td.i32()),
            std::abs(td.i13 * td.i32())};
}

/// Angular coupling rate (rad/ns) per unit i_ij * Phi, Phi in Phi_0 units.
inline double drive_coupling_scale(const transition_data& td)
{
    return two_pi * td.ej_over_h;
}

/// Coherent output amplitude at nu+ = nu1 + nu2 for vacuum input:
///   -sqrt(2pi g13) i21 i32 Phi1 Phi2 (2pi E_J/h)^2
///     / [(i w21 - i w1 + 2pi G21)(i w31 - i w+ + 2pi G31)]
/// `gamma13` is the radiative decay rate into the measured line (GHz).
inline complex output_field_sum(const transition_data& td, const decoherence_rates& rates,
                                double gamma13, double phi1, double phi2, double nu1,
                                double nu2)
{
    if (phi1 < 0.0 || phi2 < 0.0)
        throw invalid_argument_error("drive amplitudes must be non-negative");
    if (gamma13 < 0.0)
        throw invalid_argument_error("gamma13 must be non-negative");
    const complex i(0.0, 1.0);
    const double kappa = drive_coupling_scale(td);
    const complex d1 = i * two_pi * (td.omega21 - nu1) + two_pi * rates.Gamma21();
    const complex d2 = i * two_pi * (td.omega31 - nu1 - nu2) + two_pi * rates.Gamma31();
    return -std::sqrt(two_pi * gamma13) * td.i21() * td.i32() * phi1 * phi2 * kappa * kappa /
           (d1 * d2);
}

struct tunability_result
{
    double delta31_max = 0.0; // GHz
    double delta21_max = 0.0;
    double delta32_max = 0.0;
};

/// Largest excursion |nu_ij(f) - nu_ij(0.5)| over the supplied sweep points.
inline tunability_result tunability(std::span<const transition_data> sweep,
                                    const transition_data& optimal_point)
{
    tunability_result r;
    for (const auto& td : sweep) {
        r.delta31_max = std::max(r.delta31_max, std::abs(td.omega31 - optimal_point.omega31));
        r.delta21_max = std::max(r.delta21_max, std::abs(td.omega21 - optimal_point.omega21));
        r.delta32_max = std::max(r.delta32_max, std::abs(td.omega32 - optimal_point.omega32));
    }
    return r;
}

} // namespace fluxmix

#pragma once

// Flux sweeps and operating-point searches.

#include "fluxmix/parallel.hpp"
#include "fluxmix/response.hpp"
#include "fluxmix/search.hpp"
#include "fluxmix/spectral.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fluxmix {

struct sweep_columns
{
    bool detuning = false; ///< nu_ij(f) - nu_ij(0.5)
    bool chi = false;      ///< resonant |chi| for sum, difference and second harmonic
};

struct sweep_row
{
    double f = 0.0;
    std::array<double, 3> energies{};
    double nu21 = 0.0;
    double nu31 = 0.0;
    double nu32 = 0.0;
    double abs_i12 = 0.0;
    double abs_i23 = 0.0;
    double abs_i13 = 0.0;
    double R = 0.0;
    double R1 = 0.0;
    double R2 = 0.0;
    double delta = 0.0;
    std::optional<std::array<double, 3>> detuning; // 21, 31, 32
    std::optional<std::array<double, 3>> chi;      // sum, difference, second harmonic
    std::string status = "ok";
};

struct sweep_table
{
    std::vector<sweep_row> rows;
    sweep_columns columns;
};

struct sweep_request
{
    circuit_params params; // f is overwritten per row
    basis_spec basis;
    decoherence_rates rates;
    rate_model rates_model; // optional f-dependent rates
    double f_min = 0.47;
    double f_max = 0.53;
    int steps = 601;
    sweep_columns columns;
    unsigned threads = default_thread_count();
};

/// Grid point i of `steps` points spanning [lo, hi], symmetric in lo and hi.
inline double grid_point(double lo, double hi, int i, int steps)
{
    const double n = steps - 1;
    return ((n - i) * lo + i * hi) / n;
}

inline circuit_params at_flux(circuit_params p, double f)
{
    p.f = f;
    return p;
}

inline sweep_row evaluate_row(const circuit_params& params, const basis_spec& basis,
                              const decoherence_rates& rates, const sweep_columns& columns,
                              const transition_data* optimal)
{
    const spectrum s = solve_spectrum(params, basis, 3);
    const transition_data td = transition_data_from(s, build_current_operator(params, basis));
    const auto mm = mixing_moduli(td);

    sweep_row row;
    row.f = params.f;
    row.energies = {s.energies[0], s.energies[1], s.energies[2]};
    row.nu21 = td.omega21;
    row.nu31 = td.omega31;
    row.nu32 = td.omega32;
    row.abs_i12 = std::abs(td.i12);
    row.abs_i23 = std::abs(td.i23);
    row.abs_i13 = std::abs(td.i13);
    row.R = mm.R;
    row.R1 = mm.R1;
    row.R2 = mm.R2;
    row.delta = 0.5 * td.omega31 - td.omega21;
    if (columns.detuning && optimal)
        row.detuning = std::array<double, 3>{td.omega21 - optimal->omega21,
                                             td.omega31 - optimal->omega31,
                                             td.omega32 - optimal->omega32};
    if (columns.chi) {
        const double sum = chi2_sum(td, rates, td.omega21, td.omega32).modulus();
        const double diff = chi2_diff(td, rates, td.omega31, td.omega32).modulus();
        const double shg = chi2_shg(td, rates).chi.modulus();
        row.chi = std::array<double, 3>{sum, diff, shg};
    }
    if (s.degenerate)
        row.status = "degenerate";
    return row;
}

inline sweep_table sweep(const sweep_request& req)
{
    if (!(req.f_min < req.f_max))
        throw invalid_argument_error("sweep needs f_min < f_max");
    if (req.steps < 2)
        throw invalid_argument_error("sweep needs at least two steps");
    validate(at_flux(req.params, req.f_min));
    validate(at_flux(req.params, req.f_max));
    validate(req.rates);

    std::optional<transition_data> optimal;
    if (req.columns.detuning)
        optimal = compute_transition_data(at_flux(req.params, 0.5), req.basis);

    sweep_table table;
    table.columns = req.columns;
    table.rows.resize(static_cast<std::size_t>(req.steps));
    parallel_for(
        table.rows.size(),
        [&](std::size_t i) {
            const double f = grid_point(req.f_min, req.f_max, static_cast<int>(i), req.steps);
            const decoherence_rates rates = rates_at(req.rates, req.rates_model, f);
            table.rows[i] = evaluate_row(at_flux(req.params, f), req.basis, rates, req.columns,
                                         optimal ? &*optimal : nullptr);
        },
        req.threads);
    return table;
}

/// Golden-section maximisation of R(f) inside the bracket.
inline search_result find_r_max(const circuit_params& params, const basis_spec& basis,
                                double f_lo, double f_hi, double tol = 1e-5)
{
    auto objective = [&](double f) {
        return mixing_moduli(compute_transition_data(at_flux(params, f), basis)).R;
    };
    return golden_section_maximize(objective, f_lo, f_hi, tol);
}

/// Anharmonicity delta(f) = nu31/2 - nu21 in GHz.
inline double anharmonicity(const circuit_params& params, const basis_spec& basis)
{
    const spectrum s = solve_spectrum(params, basis, 3);
    return 0.5 * (s.energies[2] - s.energies[0]) - (s.energies[1] - s.energies[0]);
}

/// Flux where nu31 = 2 nu21, by bisection on delta(f) down to |delta| <=
/// value_tol (GHz; 1 kHz by default).
inline search_result find_harmonic_flux(const circuit_params& params, const basis_spec& basis,
                                        double f_lo, double f_hi, double value_tol = 1e-6)
{
    return bisect_root([&](double f) { return anharmonicity(at_flux(params, f), basis); },
                       f_lo, f_hi, value_tol);
}

/// Maximum excursions of the three transition frequencies from their values
/// at f = 0.5 over `steps` grid points in [f_min, f_max].
inline tunability_result tunability_report(const circuit_params& params, const basis_spec& basis,
                                           double f_min = 0.5, double f_max = 0.53,
                                           int steps = 301,
                                           unsigned threads = default_thread_count())
{
    if (f_min > f_max || f_min < 0.0 || f_max > 1.0)
        throw invalid_argument_error("tunability interval must satisfy 0 <= f_min <= f_max <= 1");
    if (steps < 1)
        throw invalid_argument_error("tunability needs at least one grid point");
    const transition_data optimal = compute_transition_data(at_flux(params, 0.5), basis);
    const int n = f_min == f_max ? 1 : std::max(steps, 2);
    std::vector<transition_data> points(static_cast<std::size_t>(n));
    parallel_for(
        points.size(),
        [&](std::size_t i) {
            const double f =
                n == 1 ? f_min : grid_point(f_min, f_max, static_cast<int>(i), n);
            points[i] = compute_transition_data(at_flux(params, f), basis);
        },
        threads);
    return tunability(points, optimal);
}

} // namespace fluxmix

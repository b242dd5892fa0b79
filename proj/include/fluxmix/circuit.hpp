#pragma once

// Three-junction flux circuit in the two-dimensional charge basis.
//
// Wavefunctions are expanded in plane waves exp(i(n phi_p + m phi_m)).
// 2pi-periodicity in the two junction phases phi_1 = phi_p - phi_m and
// phi_2 = phi_p + phi_m admits only pairs with n = m (mod 2); this sector is
// closed under every term of the Hamiltonian and of the current operator.
//
// All energies are E/h in GHz. Currents are in units of I_0 = 2 pi E_J / Phi_0.

#include "fluxmix/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace fluxmix {

using complex = std::complex<double>;

/// Charging-energy convention used to turn E_J/E_c into kinetic coefficients.
enum class charging_convention
{
    e2_over_2c, ///< E_c = e^2 / (2 C_J): kinetic terms 2 E_c n^2 and 2 E_c m^2 / (1 + 2 alpha)
    e2_over_c,  ///< E_c = e^2 / C_J: kinetic terms E_c n^2 and E_c m^2 / (1 + 2 alpha)
};

inline std::string to_string(charging_convention c)
{
    return c == charging_convention::e2_over_2c ? "e2_over_2c" : "e2_over_c";
}

struct circuit_params
{
    double ej_over_h = 192.0; // GHz
    double alpha = 0.8;
    double ej_over_ec = 48.0;
    double f = 0.5; // Phi_e / Phi_0
    charging_convention convention = charging_convention::e2_over_2c;

    double ec_over_h() const { return ej_over_h / ej_over_ec; }

    /// Coefficient of n^2 in the kinetic term (GHz).
    double kinetic_p() const
    {
        return convention == charging_convention::e2_over_2c ? 2.0 * ec_over_h()
                                                             : ec_over_h();
    }

    /// Coefficient of m^2 in the kinetic term (GHz).
    double kinetic_m() const { return kinetic_p() / (1.0 + 2.0 * alpha); }

    bool operator==(const circuit_params&) const = default;
};

/// Hard validation. Throws invalid_argument_error. The 0.5 < alpha < 1 window
/// is only advisory; see `alpha_warning`.
inline void validate(const circuit_params& p)
{
    if (!(p.ej_over_h > 0.0) || !std::isfinite(p.ej_over_h))
        throw invalid_argument_error("ej_over_h must be positive");
    if (!(p.ej_over_ec > 0.0) || !std::isfinite(p.ej_over_ec))
        throw invalid_argument_error("ej_over_ec must be positive");
    if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha))
        throw invalid_argument_error("alpha must be non-negative");
    if (!(p.f >= 0.0 && p.f <= 1.0))
        throw invalid_argument_error("reduced flux f must lie in [0, 1]");
}

/// Returns a warning message when alpha lies outside the usual 0.5<α<1 design
/// window, or an empty string.
inline std::string alpha_warning(const circuit_params& p)
{
    if (p.alpha > 0.5 && p.alpha < 1.0)
        return {};
    return "alpha = " + std::to_string(p.alpha) +
           " lies outside the flux-qubit design window 0.5<α<1";
}

struct basis_spec
{
    int n_max = 12;
    int m_max = 12;

    bool operator==(const basis_spec&) const = default;
};

inline constexpr int min_truncation = 4;

/// Enumerates the (n, m) charge states of a basis_spec and maps them to
/// matrix indices. Ordering is n-major, then m, both ascending.
class charge_basis
{
public:
    explicit charge_basis(basis_spec spec) : spec_(spec)
    {
        if (spec.n_max < min_truncation || spec.m_max < min_truncation)
            throw truncation_error(
                "charge basis truncation must satisfy n_max, m_max >= " +
                std::to_string(min_truncation) + " to host the coupling stencil");
        const int width = 2 * spec.m_max + 1;
        index_.assign(static_cast<std::size_t>((2 * spec.n_max + 1) * width), -1);
        for (int n = -spec.n_max; n <= spec.n_max; ++n) {
            for (int m = -spec.m_max; m <= spec.m_max; ++m) {
                if (((n - m) % 2) != 0)
                    continue;
                index_[slot(n, m)] = static_cast<int>(states_.size());
                states_.push_back({n, m});
            }
        }
    }

    struct state
    {
        int n;
        int m;
    };

    const basis_spec& spec() const { return spec_; }
    std::size_t size() const { return states_.size(); }
    const std::vector<state>& states() const { return states_; }

    /// Matrix index of (n, m), or -1 when outside the truncation/sector.
    int index(int n, int m) const
    {
        if (n < -spec_.n_max || n > spec_.n_max || m < -spec_.m_max ||
            m > spec_.m_max)
            return -1;
        return index_[slot(n, m)];
    }

private:
    std::size_t slot(int n, int m) const
    {
        return static_cast<std::size_t>((n + spec_.n_max) * (2 * spec_.m_max + 1) +
                                        (m + spec_.m_max));
    }

    basis_spec spec_;
    std::vector<state> states_;
    std::vector<int> index_;
};

struct operator_matrix
{
    Eigen::MatrixXcd entries;
    basis_spec basis;

    Eigen::Index dim() const { return entries.rows(); }
};

/// ||M - M^dagger||_F / ||M||_F (0 for the zero matrix).
inline double hermiticity_defect(const Eigen::MatrixXcd& m)
{
    const double norm = m.norm();
    if (norm == 0.0)
        return 0.0;
    return (m - m.adjoint()).norm() / norm;
}

namespace detail {

inline void add_hermitian_pair(Eigen::MatrixXcd& m, int to, int from, complex value)
{
    m(to, from) += value;
    m(from, to) += std::conj(value);
}

} // namespace detail

/// Static circuit Hamiltonian (GHz) including the constant 2E_J + alpha E_J.
inline operator_matrix build_hamiltonian(const circuit_params& params,
                                         const basis_spec& spec)
{
    validate(params);
    const charge_basis basis(spec);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

    const double ej = params.ej_over_h;
    const double kp = params.kinetic_p();
    const double km = params.kinetic_m();
    const double offset = 2.0 * ej + params.alpha * ej;
    const complex flux_phase = std::polar(1.0, 2.0 * std::numbers::pi * params.f);

    for (const auto& [n, m] : basis.states()) {
        const int j = basis.index(n, m);
        h(j, j) = kp * n * n + km * m * m + offset;

        // -2E_J cos(phi_p) cos(phi_m): each of the four shifts (±1, ±1) carries -E_J/2.
        // Only the "raising in n" half is visited; the Hermitian pair fills the rest.
        for (const int dm : {+1, -1}) {
            const int k = basis.index(n + 1, m + dm);
            if (k >= 0)
                detail::add_hermitian_pair(h, k, j, -0.5 * ej);
        }
        // -alpha E_J cos(2 pi f + 2 phi_m): (n, m) -> (n, m + 2) with -(alpha E_J/2) e^{i 2 pi f}.
        const int k = basis.index(n, m + 2);
        if (k >= 0)
            detail::add_hermitian_pair(h, k, j, -0.5 * params.alpha * ej * flux_phase);
    }
    return {std::move(h), spec};
}

/// Loop supercurrent in units of I_0:
///   I/I_0 = alpha/(2 alpha + 1) [sin(2 pi f + 2 phi_m) - 2 sin(phi_m) cos(phi_p)].
inline operator_matrix build_current_operator(const circuit_params& params,
                                              const basis_spec& spec)
{
    validate(params);
    const charge_basis basis(spec);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);

    const double prefactor = params.alpha / (2.0 * params.alpha + 1.0);
    const complex flux_phase = std::polar(1.0, 2.0 * std::numbers::pi * params.f);
    const complex i_unit(0.0, 1.0);

    for (const auto& [n, m] : basis.states()) {
        const int j = basis.index(n, m);
        // -2 sin(phi_m) cos(phi_p): (n±1, m+1) gets +i/2, (n±1, m-1) gets -i/2.
        for (const int dm : {+1, -1}) {
            const int k = basis.index(n + 1, m + dm);
            if (k >= 0)
                detail::add_hermitian_pair(op, k, j, prefactor * 0.5 * i_unit * double(dm));
        }
        // sin(2 pi f + 2 phi_m): (n, m) -> (n, m + 2) with -(i/2) e^{i 2 pi f}.
        const int k = basis.index(n, m + 2);
        if (k >= 0)
            detail::add_hermitian_pair(op, k, j, -prefactor * 0.5 * i_unit * flux_phase);
    }
    return {std::move(op), spec};
}

/// U(phi_p, phi_m, f)/h in GHz.
inline double eval_potential(const circuit_params& params, double phi_p, double phi_m)
{
    const double ej = params.ej_over_h;
    return 2.0 * ej * (1.0 - std::cos(phi_p) * std::cos(phi_m)) +
           params.alpha * ej *
               (1.0 - std::cos(2.0 * std::numbers::pi * params.f + 2.0 * phi_m));
}

/// Supercurrent I(phi_p, phi_m)/I_0, the real-space counterpart of
/// build_current_operator.
inline double eval_current(const circuit_params& params, double phi_p, double phi_m)
{
    const double prefactor = params.alpha / (2.0 * params.alpha + 1.0);
    return prefactor * (std::sin(2.0 * std::numbers::pi * params.f + 2.0 * phi_m) -
                        2.0 * std::sin(phi_m) * std::cos(phi_p));
}

/// Permutation (n, m) -> (n, -m) of the charge basis, as an index map.
/// Conjugates the Hamiltonian at f into the Hamiltonian at 1 - f.
inline std::vector<int> flux_reflection_map(const basis_spec& spec)
{
    const charge_basis basis(spec);
    std::vector<int> map(basis.size());
    for (const auto& [n, m] : basis.states())
        map[static_cast<std::size_t>(basis.index(n, m))] = basis.index(n, -m);
    return map;
}

/// Index map of the charge reflection (n, m) -> (-n, m). Both the Hamiltonian
/// and the current operator commute with it at every flux.
inline std::vector<int> charge_reflection_map(const basis_spec& spec)
{
    const charge_basis basis(spec);
    std::vector<int> map(basis.size());
    for (const auto& [n, m] : basis.states())
        map[static_cast<std::size_t>(basis.index(n, m))] = basis.index(-n, m);
    return map;
}

/// Returns P M P^T for the permutation given as an index map.
inline Eigen::MatrixXcd permute(const Eigen::MatrixXcd& m, const std::vector<int>& map)
{
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = m(i, j);
    return out;
}

} // namespace fluxmix

#pragma once

#include "fluxmix/circuit.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fluxmix {

/// Energy gap (GHz) below which two of the lowest three levels are reported
/// as degenerate; eigenvector phases are then not reproducible.
inline constexpr double degeneracy_threshold = 1e-6;

struct spectrum
{
    Eigen::VectorXd energies; // ascending, GHz
    Eigen::MatrixXcd vectors; // columns, gauge fixed
    basis_spec basis;
    circuit_params params; // echo; default-constructed when built from a bare matrix
    bool degenerate = false;

    Eigen::Index levels() const { return energies.size(); }
};

/// Rotates a vector so that its largest-modulus component is real and
/// positive. Components within a relative 1e-10 of the largest count as tied
/// and the first of them wins, so rounding cannot flip the choice between
/// symmetry-related components of equal modulus.
inline void fix_gauge(Eigen::Ref<Eigen::VectorXcd> v)
{
    const double top = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    if (!(top > 0.0))
        return;
    Eigen::Index best = 0;
    while (std::abs(v[best]) < top * (1.0 - 1e-10))
        ++best;
    const double a = std::abs(v[best]);
    v *= std::conj(v[best]) / a;
    v[best] = a;
}

inline spectrum solve_spectrum(const operator_matrix& h, int k = 3)
{
    if (k < 3)
        throw invalid_argument_error("solve_spectrum needs k >= 3 levels");
    if (h.dim() < k)
        throw invalid_argument_error("operator dimension smaller than requested levels");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries);
    if (solver.info() != Eigen::Success)
        throw error("eigensolver", "Hermitian eigendecomposition did not converge");

    spectrum out;
    out.basis = h.basis;
    out.energies = solver.eigenvalues().head(k);
    out.vectors = solver.eigenvectors().leftCols(k);
    for (Eigen::Index c = 0; c < k; ++c)
        fix_gauge(out.vectors.col(c));
    for (Eigen::Index i = 0; i + 1 < 3; ++i)
        if (out.energies[i + 1] - out.energies[i] < degeneracy_threshold)
            out.degenerate = true;
    return out;
}

/// Orthonormal real bases of the even and odd subspaces of the charge
/// reflection n -> -n: columns are |0,m>, (|n,m> + |-n,m>)/sqrt2 and
/// (|n,m> - |-n,m>)/sqrt2 for n > 0.
struct reflection_sectors
{
    Eigen::MatrixXd even;
    Eigen::MatrixXd odd;
};

inline reflection_sectors make_reflection_sectors(const basis_spec& spec)
{
    const charge_basis basis(spec);
    const double r = std::sqrt(0.5);
    std::vector<std::pair<int, int>> pairs; // (index of n >= 0, index of -n)
    for (const auto& [n, m] : basis.states())
        if (n >= 0)
            pairs.push_back({basis.index(n, m), basis.index(-n, m)});
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto n_odd = static_cast<Eigen::Index>(
        std::count_if(pairs.begin(), pairs.end(), [](auto p) { return p.first != p.second; }));
    reflection_sectors out{Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(pairs.size())),
                           Eigen::MatrixXd::Zero(dim, n_odd)};
    Eigen::Index e = 0;
    Eigen::Index o = 0;
    for (const auto& [a, b] : pairs) {
        if (a == b) {
            out.even(a, e++) = 1.0;
            continue;
        }
        out.even(a, e) = r;
        out.even(b, e++) = r;
        out.odd(a, o) = r;
        out.odd(b, o++) = -r;
    }
    return out;
}

/// Builds the Hamiltonian for `params` and solves it, echoing the parameters.
/// The two reflection sectors are diagonalised separately and merged, which
/// gives the same eigenpairs as the full matrix at about a quarter of the cost.
inline spectrum solve_spectrum(const circuit_params& params, const basis_spec& basis,
                               int k = 3)
{
    if (k < 3)
        throw invalid_argument_error("solve_spectrum needs k >= 3 levels");
    const operator_matrix h = build_hamiltonian(params, basis);
    const reflection_sectors sectors = make_reflection_sectors(basis);

    struct pair_t
    {
        double energy;
        Eigen::VectorXcd vector;
    };
    std::vector<pair_t> pairs;
    for (const Eigen::MatrixXd* u : {&sectors.even, &sectors.odd}) {
        // Each column of u has at most two nonzeros, so u^T H u is assembled
        // from index lists instead of dense products.
        std::vector<std::vector<std::pair<Eigen::Index, double>>> cols(
            static_cast<std::size_t>(u->cols()));
        for (Eigen::Index c = 0; c < u->cols(); ++c)
            for (Eigen::Index r = 0; r < u->rows(); ++r)
                if ((*u)(r, c) != 0.0)
                    cols[static_cast<std::size_t>(c)].push_back({r, (*u)(r, c)});
        Eigen::MatrixXcd block(u->cols(), u->cols());
        for (Eigen::Index j = 0; j < u->cols(); ++j)
            for (Eigen::Index i = 0; i < u->cols(); ++i) {
                complex acc = 0.0;
                for (const auto& [ri, wi] : cols[static_cast<std::size_t>(i)])
                    for (const auto& [rj, wj] : cols[static_cast<std::size_t>(j)])
                        acc += wi * wj * h.entries(ri, rj);
                block(i, j) = acc;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);
        if (solver.info() != Eigen::Success)
            throw error("eigensolver", "Hermitian eigendecomposition did not converge");
        const Eigen::Index take = std::min<Eigen::Index>(k, block.rows());
        for (Eigen::Index c = 0; c < take; ++c)
            pairs.push_back({solver.eigenvalues()[c],
                             u->cast<complex>() * solver.eigenvectors().col(c)});
    }
    if (static_cast<int>(pairs.size()) < k)
        throw invalid_argument_error("operator dimension smaller than requested levels");
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const pair_t& a, const pair_t& b) { return a.energy < b.energy; });

    spectrum out;
    out.basis = basis;
    out.params = params;
    out.energies.resize(k);
    out.vectors.resize(h.dim(), k);
    for (int c = 0; c < k; ++c) {
        out.energies[c] = pairs[static_cast<std::size_t>(c)].energy;
        out.vectors.col(c) = pairs[static_cast<std::size_t>(c)].vector;
        fix_gauge(out.vectors.col(c));
    }
    for (Eigen::Index i = 0; i + 1 < 3; ++i)
        if (out.energies[i + 1] - out.energies[i] < degeneracy_threshold)
            out.degenerate = true;
    return out;
}

/// Three-level reduction. Frequencies are nu_ij = (E_i - E_j)/h in GHz;
/// elements are <i|I|j>/I_0 with 1-based level labels.
struct transition_data
{
    double omega21 = 0.0;
    double omega31 = 0.0;
    double omega32 = 0.0;
    complex i12;
    complex i23;
    complex i13;
    double f = 0.0;
    double ej_over_h = 0.0;
    /// Diagonal elements I_ii/I_0. Diagnostics only; the response formulas
    /// neglect the longitudinal coupling.
    Eigen::Vector3d diagonal = Eigen::Vector3d::Zero();
    bool degenerate = false;

    complex i21() const { return std::conj(i12); }
    complex i32() const { return std::conj(i23); }
    complex i31() const { return std::conj(i13); }

    /// Full 3x3 element matrix (0-based), Hermitian.
    Eigen::Matrix3cd elements() const
    {
        Eigen::Matrix3cd m;
        m << diagonal[0], i12, i13, i21(), diagonal[1], i23, i31(), i32(), diagonal[2];
        return m;
    }
};

inline transition_data transition_data_from(const spectrum& spec,
                                            const operator_matrix& current)
{
    if (spec.levels() < 3)
        throw invalid_argument_error("transition data needs at least three levels");
    if (!(spec.basis == current.basis) || spec.vectors.rows() != current.dim())
        throw basis_mismatch_error("spectrum and current operator use different bases");

    const Eigen::MatrixXcd v = spec.vectors.leftCols(3);
    const Eigen::Matrix3cd m = v.adjoint() * current.entries * v;

    transition_data td;
    td.omega21 = spec.energies[1] - spec.energies[0];
    td.omega32 = spec.energies[2] - spec.energies[1];
    td.omega31 = spec.energies[2] - spec.energies[0];
    td.i12 = m(0, 1);
    td.i23 = m(1, 2);
    td.i13 = m(0, 2);
    td.diagonal = m.diagonal().real();
    td.f = spec.params.f;
    td.ej_over_h = spec.params.ej_over_h;
    td.degenerate = spec.degenerate;
    return td;
}

/// Full pipeline for one operating point.
inline transition_data compute_transition_data(const circuit_params& params,
                                               const basis_spec& basis)
{
    const spectrum s = solve_spectrum(params, basis, 3);
    return transition_data_from(s, build_current_operator(params, basis));
}

struct convergence_row
{
    basis_spec basis;
    Eigen::Vector3d energies;
    /// Max relative change of the lowest three levels against the previous row
    /// (0 for the first row).
    double drift = 0.0;
};

struct convergence_table
{
    std::vector<convergence_row> rows;
    double max_drift = 0.0;
};

inline convergence_table convergence_report(const circuit_params& params,
                                            const std::vector<basis_spec>& bases)
{
    if (bases.size() < 2)
        throw invalid_argument_error("convergence report needs at least two bases");
    convergence_table table;
    for (const auto& b : bases) {
        const spectrum s = solve_spectrum(params, b, 3);
        convergence_row row{b, s.energies.head<3>(), 0.0};
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back().energies;
            for (int i = 0; i < 3; ++i)
                row.drift = std::max(row.drift, std::abs(row.energies[i] - prev[i]) /
                                                    std::abs(row.energies[i]));
            table.max_drift = std::max(table.max_drift, row.drift);
        }
        table.rows.push_back(row);
    }
    return table;
}

} // namespace fluxmix

#include "fluxmix/circuit.hpp"
#include "fluxmix/spectral.hpp"
#include "grid_oracle.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace fluxmix;

namespace {

circuit_params paper_params(double f)
{
    circuit_params p;
    p.f = f;
    return p;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(ChargeBasis, SectorAndSize)
{
    const charge_basis basis({12, 12});
    EXPECT_EQ(basis.size(), 313u);
    for (const auto& [n, m] : basis.states())
        EXPECT_EQ((n - m) % 2, 0);
    EXPECT_EQ(basis.index(1, 0), -1);
    EXPECT_EQ(basis.index(13, 13), -1);
    EXPECT_GE(basis.index(12, -12), 0);
}

TEST(ChargeBasis, RejectsTinyTruncation)
{
    EXPECT_THROW(build_hamiltonian(paper_params(0.5), {3, 12}), truncation_error);
    EXPECT_THROW(build_current_operator(paper_params(0.5), {12, 2}), truncation_error);
    EXPECT_NO_THROW(build_hamiltonian(paper_params(0.5), {4, 4}));
}

TEST(CircuitParams, Validation)
{
    circuit_params p;
    p.ej_over_h = -1.0;
    EXPECT_THROW(validate(p), invalid_argument_error);
    p = {};
    p.f = 1.2;
    EXPECT_THROW(build_hamiltonian(p, {}), invalid_argument_error);
    p = {};
    p.alpha = 1.5;
    EXPECT_NO_THROW(validate(p));
    EXPECT_NE(alpha_warning(p).find("0.5<α<1"), std::string::npos);
    EXPECT_TRUE(alpha_warning(circuit_params{}).empty());
}

TEST(Hamiltonian, HermitianAtPaperPoint)
{
    const auto h = build_hamiltonian(paper_params(0.5), {10, 10});
    EXPECT_LE((h.entries - h.entries.adjoint()).norm(), 1e-12 * h.entries.norm());
}

TEST(Hamiltonian, HermitianProperty)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> alpha(0.5, 1.0);
    std::uniform_real_distribution<double> flux(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        circuit_params p;
        p.alpha = alpha(rng);
        p.f = flux(rng);
        EXPECT_LE(hermiticity_defect(build_hamiltonian(p, {8, 8}).entries), 1e-12);
        EXPECT_LE(hermiticity_defect(build_current_operator(p, {8, 8}).entries), 1e-12);
    }
}

TEST(Hamiltonian, FluxEntersOnlyThroughAlphaTerm)
{
    circuit_params a = paper_params(0.30);
    circuit_params b = paper_params(0.70);
    a.alpha = b.alpha = 0.0;
    EXPECT_EQ(max_abs(build_hamiltonian(a, {10, 10}).entries -
                      build_hamiltonian(b, {10, 10}).entries),
              0.0);
}

TEST(Hamiltonian, DiagonalKinetics)
{
    const auto p = paper_params(0.5);
    const auto h = build_hamiltonian(p, {6, 6});
    const charge_basis basis({6, 6});
    const double ec = 4.0;
    const double offset = 2.0 * 192.0 + 0.8 * 192.0;
    const int k = basis.index(3, -1);
    EXPECT_NEAR(h.entries(k, k).real(), 2 * ec * 9 + 2 * ec / 2.6 * 1 + offset, 1e-12);
    // Coupling stencil values.
    EXPECT_NEAR(std::abs(h.entries(basis.index(4, 0), k)), 96.0, 1e-12);
    EXPECT_NEAR(std::abs(h.entries(basis.index(3, 1), k)), 0.4 * 192.0, 1e-12);

    circuit_params alt = p;
    alt.convention = charging_convention::e2_over_c;
    const auto h_alt = build_hamiltonian(alt, {6, 6});
    EXPECT_NEAR(h_alt.entries(k, k).real(), ec * 9 + ec / 2.6 * 1 + offset, 1e-12);
}

TEST(Hamiltonian, PeriodicInFlux)
{
    // e^{2 pi i} is 1 only up to rounding, hence the tolerance.
    EXPECT_LE(max_abs(build_hamiltonian(paper_params(0.0), {8, 8}).entries -
                      build_hamiltonian(paper_params(1.0), {8, 8}).entries),
              1e-12);
    EXPECT_LE(max_abs(build_current_operator(paper_params(0.0), {8, 8}).entries -
                      build_current_operator(paper_params(1.0), {8, 8}).entries),
              1e-15);
}

TEST(Hamiltonian, FluxReflectionConjugacy)
{
    const basis_spec b{10, 10};
    const auto map = flux_reflection_map(b);
    for (const double f : {0.3, 0.47, 0.4992}) {
        const auto h = build_hamiltonian(paper_params(f), b);
        const auto h_reflected = build_hamiltonian(paper_params(1.0 - f), b);
        EXPECT_LE(max_abs(permute(h.entries, map) - h_reflected.entries), 1e-10) << f;
    }
}

TEST(Hamiltonian, MatchesRealSpaceGridOracle)
{
    const auto p = paper_params(0.48);
    const auto s = solve_spectrum(p, {12, 12});
    const auto grid = oracle::solve_grid(p, 40);
    for (int k = 0; k < 3; ++k)
        EXPECT_LT(std::abs(s.energies[k] - grid.energies[k]) / grid.energies[k], 1e-5) << k;
}

TEST(CurrentOperator, ZeroDiagonal)
{
    for (const double f : {0.0, 0.37, 0.5, 0.81}) {
        const auto op = build_current_operator(paper_params(f), {8, 8});
        EXPECT_EQ(op.entries.diagonal().cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(CurrentOperator, OddUnderParityAtOptimalPoint)
{
    const basis_spec b{10, 10};
    const auto op = build_current_operator(paper_params(0.5), b);
    const auto h = build_hamiltonian(paper_params(0.5), b);
    const auto map = flux_reflection_map(b);
    EXPECT_LE(max_abs(permute(op.entries, map) + op.entries), 1e-15);
    EXPECT_LE(max_abs(permute(h.entries, map) - h.entries), 1e-12);
}

TEST(CurrentOperator, MatchesGridQuadrature)
{
    const auto p = paper_params(0.49);
    const basis_spec b{12, 12};
    const auto td = compute_transition_data(p, b);
    const auto grid = oracle::solve_grid(p, 40);
    const double g12 = oracle::grid_current_element(p, grid, 0, 1);
    const double g23 = oracle::grid_current_element(p, grid, 1, 2);
    const double g13 = oracle::grid_current_element(p, grid, 0, 2);
    EXPECT_LT(std::abs(std::abs(td.i12) - g12) / g12, 1e-5);
    EXPECT_LT(std::abs(std::abs(td.i23) - g23) / g23, 1e-5);
    EXPECT_LT(std::abs(std::abs(td.i13) - g13) / g13, 1e-5);
}

TEST(CurrentOperator, ChargeReflectionSymmetry)
{
    const basis_spec b{10, 10};
    const auto map = charge_reflection_map(b);
    for (const double f : {0.21, 0.4992, 0.5}) {
        const auto h = build_hamiltonian(paper_params(f), b);
        const auto op = build_current_operator(paper_params(f), b);
        EXPECT_EQ(max_abs(permute(h.entries, map) - h.entries), 0.0) << f;
        EXPECT_EQ(max_abs(permute(op.entries, map) - op.entries), 0.0) << f;
    }
}

TEST(Potential, OriginValue)
{
    for (const double f : {0.0, 0.25, 0.5, 0.9}) {
        const auto p = paper_params(f);
        EXPECT_NEAR(eval_potential(p, 0.0, 0.0),
                    0.8 * 192.0 * (1.0 - std::cos(2.0 * std::numbers::pi * f)), 1e-12);
    }
}

TEST(Potential, Symmetries)
{
    const auto half = paper_params(0.5);
    const auto a = paper_params(0.47);
    const auto b = paper_params(0.53);
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            const double pp = -std::numbers::pi + i * std::numbers::pi / 12;
            const double pm = -std::numbers::pi + j * std::numbers::pi / 12;
            EXPECT_NEAR(eval_potential(half, pp, pm), eval_potential(half, pp, -pm), 1e-11);
            EXPECT_NEAR(eval_potential(a, pp, pm), eval_potential(b, pp, -pm), 1e-11);
        }
}

TEST(Truncation, ConvergenceAtDefault)
{
    for (const double f : {0.47, 0.5, 0.53}) {
        const auto table = convergence_report(paper_params(f), {{12, 12}, {16, 16}});
        EXPECT_LT(table.max_drift, 1e-6) << f;
    }
}

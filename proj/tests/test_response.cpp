#include "fluxmix/response.hpp"
#include "fluxmix/sweep.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fluxmix;

namespace {

circuit_params at(double f)
{
    circuit_params p;
    p.f = f;
    return p;
}

const transition_data& near_optimal()
{
    static const transition_data td = compute_transition_data(at(0.4992), {12, 12});
    return td;
}

double peak_scale(const decoherence_rates& r)
{
    return two_pi * two_pi * r.Gamma21() * r.Gamma31();
}

} // namespace

TEST(Rates, GammaIdentities)
{
    decoherence_rates r;
    r.gamma11 = 0.003;
    r.gamma22 = 0.021;
    r.gamma33 = 0.013;
    r.gamma12 = 0.047;
    r.gamma13 = 0.009;
    r.gamma23 = 0.011;
    EXPECT_DOUBLE_EQ(r.Gamma21(), r.gamma12);
    EXPECT_DOUBLE_EQ(r.Gamma31(), r.gamma13 + r.gamma23 + r.gamma33);
    EXPECT_DOUBLE_EQ(r.Gamma32(), r.gamma12 + r.gamma13 + r.gamma23 + r.gamma22 + r.gamma33);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            if (i != j)
                EXPECT_EQ(r.Gamma(i, j), r.Gamma(j, i));
    EXPECT_THROW(r.Gamma(2, 2), invalid_argument_error);
}

TEST(Rates, DefaultsMatchFigureCaption)
{
    const decoherence_rates r;
    EXPECT_NEAR(r.Gamma21(), 0.050, 1e-15);
    EXPECT_NEAR(r.Gamma31(), 0.030, 1e-15);
    EXPECT_NEAR(r.Gamma32(), 0.100, 1e-15);
}

TEST(Rates, Validation)
{
    decoherence_rates r;
    EXPECT_NO_THROW(validate(r));
    r.gamma23 = -0.001;
    EXPECT_THROW(validate(r), invalid_argument_error);
    r = {};
    r.gamma22 = std::nan("");
    EXPECT_THROW(validate(r), invalid_argument_error);
}

TEST(Rates, ModelHookDisabledByDefault)
{
    decoherence_rates base;
    base.gamma12 = 0.07;
    EXPECT_EQ(rates_at(base, {}, 0.49), base);
    const rate_model model = [](double f) {
        decoherence_rates r;
        r.gamma12 = f;
        return r;
    };
    EXPECT_DOUBLE_EQ(rates_at(base, model, 0.49).gamma12, 0.49);
}

TEST(ChiSum, ResonantPeak)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const auto chi = chi2_sum(td, r, td.omega21, td.omega32);
    const double expected = std::abs(td.i12 * td.i23 * td.i31()) / peak_scale(r);
    EXPECT_NEAR(chi.modulus(), expected, 1e-12 * expected);
    EXPECT_EQ(chi.kind, mixing_kind::sum);
    EXPECT_DOUBLE_EQ(chi.nu_out, td.omega31);
}

TEST(ChiSum, Preconditions)
{
    const auto& td = near_optimal();
    EXPECT_THROW(chi2_sum(td, {}, 0.0, 5.0), invalid_argument_error);
    EXPECT_THROW(chi2_sum(td, {}, 5.0, -1.0), invalid_argument_error);
}

TEST(ChiDiff, ResonantPeak)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const auto chi = chi2_diff(td, r, td.omega31, td.omega32);
    const double expected = std::abs(td.i13 * td.i21() * td.i32()) / peak_scale(r);
    EXPECT_NEAR(chi.modulus(), expected, 1e-12 * expected);
    EXPECT_NEAR(chi.nu_out, td.omega21, 1e-9);
    EXPECT_FALSE(chi.zero_frequency);
}

TEST(ChiDiff, ZeroFrequencyLimit)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const double nu = 30.0;
    const auto chi = chi2_diff(td, r, nu, nu);
    EXPECT_TRUE(chi.zero_frequency);
    const complex i(0.0, 1.0);
    const complex d1 = -i * two_pi * td.omega21 + two_pi * r.Gamma21();
    const complex d2 = i * two_pi * (nu - td.omega31) + two_pi * r.Gamma31();
    const complex expected = td.i13 * td.i21() * td.i32() / (d1 * d2);
    EXPECT_LE(std::abs(chi.value - expected), 1e-12 * std::abs(expected));
}

TEST(ChiDiff, Preconditions)
{
    const auto& td = near_optimal();
    EXPECT_THROW(chi2_diff(td, {}, 5.0, 6.0), invalid_argument_error);
    EXPECT_THROW(chi2_diff(td, {}, 5.0, 0.0), invalid_argument_error);
}

TEST(SelectionRule, BothVanishAtOptimalPoint)
{
    const auto td = compute_transition_data(at(0.5), {12, 12});
    const decoherence_rates r;
    for (const double nu1 : {td.omega21, td.omega31, 7.0, 40.0})
        for (const double nu2 : {td.omega32, 3.0, 11.5}) {
            EXPECT_LT(chi2_sum(td, r, nu1, nu2).modulus(), 1e-8);
            if (nu1 >= nu2)
                EXPECT_LT(chi2_diff(td, r, nu1, nu2).modulus(), 1e-8);
        }
    const auto m = mixing_moduli(td);
    EXPECT_LT(m.R, 1e-8);
    EXPECT_LT(m.R2, 1e-8);
    EXPECT_GT(m.R1, 0.01);
}

TEST(SelectionRule, ModulusBoundedByResonantValue)
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> flux(0.47, 0.53);
    std::uniform_real_distribution<double> detune(-0.5, 0.5);
    const decoherence_rates r;
    for (int trial = 0; trial < 8; ++trial) {
        const auto td = compute_transition_data(at(flux(rng)), {12, 12});
        const double bound = mixing_moduli(td).R / peak_scale(r);
        for (int k = 0; k < 20; ++k) {
            const double nu1 = td.omega21 + detune(rng);
            const double nu2 = td.omega32 + detune(rng);
            EXPECT_LE(chi2_sum(td, r, nu1, nu2).modulus(), bound * (1 + 1e-12));
            const double mu1 = td.omega31 + detune(rng);
            const double mu2 = td.omega32 + detune(rng);
            if (mu1 >= mu2)
                EXPECT_LE(chi2_diff(td, r, mu1, mu2).modulus(), bound * (1 + 1e-12));
        }
    }
}

TEST(ChiSum, ResonanceDominatesGrid)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const double step = 0.01;
    double best = -1.0;
    double best_nu1 = 0.0;
    double best_plus = 0.0;
    for (int a = -40; a <= 40; ++a)
        for (int b = -40; b <= 40; ++b) {
            const double nu1 = td.omega21 + 0.013 + a * step;
            const double nu_plus = td.omega31 - 0.007 + b * step;
            const double m = chi2_sum(td, r, nu1, nu_plus - nu1).modulus();
            if (m > best) {
                best = m;
                best_nu1 = nu1;
                best_plus = nu_plus;
            }
        }
    EXPECT_LE(std::abs(best_nu1 - td.omega21), step);
    EXPECT_LE(std::abs(best_plus - td.omega31), step);
}

// Negating both detunings conjugates the denominators, so value / numerator
// is conjugated.
TEST(Conjugation, NegatedDetunings)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const complex num_sum = td.i12 * td.i23 * td.i31();
    const complex num_diff = td.i13 * td.i21() * td.i32();
    for (const auto& [d1, d2] : {std::pair{0.03, -0.11}, std::pair{0.4, 0.25},
                                 std::pair{-0.07, 0.0}}) {
        const complex s_plus =
            chi2_sum(td, r, td.omega21 + d1, td.omega32 + d2 - d1).value / num_sum;
        const complex s_minus =
            chi2_sum(td, r, td.omega21 - d1, td.omega32 - d2 + d1).value / num_sum;
        EXPECT_LE(std::abs(s_minus - std::conj(s_plus)), 1e-12 * std::abs(s_plus));

        const complex q_plus =
            chi2_diff(td, r, td.omega31 + d2, td.omega32 + d2 - d1).value / num_diff;
        const complex q_minus =
            chi2_diff(td, r, td.omega31 - d2, td.omega32 - d2 + d1).value / num_diff;
        EXPECT_LE(std::abs(q_minus - std::conj(q_plus)), 1e-12 * std::abs(q_plus));
    }
}

TEST(Shg, HarmonicConditionMagnitude)
{
    transition_data td = near_optimal();
    td.omega31 = 2.0 * td.omega21;
    td.omega32 = td.omega21;
    const decoherence_rates r;
    const auto shg = chi2_shg(td, r);
    EXPECT_EQ(shg.delta, 0.0);
    const double expected =
        std::abs(td.i12 * td.i23 * td.i31()) / (two_pi * two_pi * r.Gamma31() * r.Gamma21());
    EXPECT_NEAR(shg.chi.modulus(), expected, 1e-12 * expected);
    EXPECT_EQ(shg.chi.kind, mixing_kind::second_harmonic);
}

TEST(Shg, ModulusFormula)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const auto shg = chi2_shg(td, r);
    EXPECT_NEAR(shg.delta, 0.5 * td.omega31 - td.omega21, 1e-12);
    const double expected =
        std::abs(td.i12 * td.i23 * td.i31()) /
        (two_pi * r.Gamma31() * std::hypot(two_pi * shg.delta, two_pi * r.Gamma21()));
    EXPECT_NEAR(shg.chi.modulus(), expected, 1e-12 * expected);
}

TEST(Shg, HarmonicFluxPoints)
{
    for (const double f : {0.4878, 0.5122}) {
        const auto td = compute_transition_data(at(f), {12, 12});
        EXPECT_LT(std::abs(chi2_shg(td, {}).delta), 0.05) << f;
    }
    // Far from the roots the detuning is large.
    EXPECT_GT(std::abs(chi2_shg(compute_transition_data(at(0.5), {12, 12}), {}).delta), 1.0);
}

TEST(Moduli, Definitions)
{
    const auto& td = near_optimal();
    const auto m = mixing_moduli(td);
    EXPECT_DOUBLE_EQ(m.R, std::abs(td.i12) * std::abs(td.i23) * std::abs(td.i13));
    EXPECT_NEAR(m.R1, std::abs(td.i12) * std::abs(td.i23), 1e-15);
    EXPECT_NEAR(m.R2, std::abs(td.i13) * std::abs(td.i23), 1e-15);
}

TEST(Moduli, MirrorSymmetry)
{
    for (const double f : {0.47, 0.4992, 0.496, 0.45}) {
        const auto a = mixing_moduli(compute_transition_data(at(f), {12, 12}));
        const auto b = mixing_moduli(compute_transition_data(at(1.0 - f), {12, 12}));
        EXPECT_NEAR(a.R, b.R, 1e-8) << f;
        EXPECT_NEAR(a.R1, b.R1, 1e-8) << f;
        EXPECT_NEAR(a.R2, b.R2, 1e-8) << f;
    }
}

TEST(OutputField, LinearInEachDrive)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    EXPECT_EQ(output_field_sum(td, r, 0.01, 0.0, 1e-6, td.omega21, td.omega32), complex(0.0));
    const complex a = output_field_sum(td, r, 0.01, 1e-6, 2e-6, td.omega21, td.omega32);
    const complex b = output_field_sum(td, r, 0.01, 3e-6, 2e-6, td.omega21, td.omega32);
    EXPECT_LE(std::abs(b - 3.0 * a), 1e-12 * std::abs(b));
}

TEST(OutputField, SquareRootOfDecayRate)
{
    const auto& td = near_optimal();
    const decoherence_rates r;
    const double a = std::abs(output_field_sum(td, r, 0.01, 1e-6, 1e-6, 9.0, 5.0));
    const double b = std::abs(output_field_sum(td, r, 0.02, 1e-6, 1e-6, 9.0, 5.0));
    EXPECT_NEAR(b / a, std::sqrt(2.0), 1e-12);
}

TEST(OutputField, Preconditions)
{
    const auto& td = near_optimal();
    EXPECT_THROW(output_field_sum(td, {}, 0.01, -1e-6, 1e-6, 9.0, 5.0), invalid_argument_error);
    EXPECT_THROW(output_field_sum(td, {}, -0.01, 1e-6, 1e-6, 9.0, 5.0), invalid_argument_error);
}

TEST(Tunability, DegenerateInterval)
{
    const auto td = compute_transition_data(at(0.5), {12, 12});
    const std::vector<transition_data> one{td};
    const auto t = tunability(one, td);
    EXPECT_EQ(t.delta31_max, 0.0);
    EXPECT_EQ(t.delta21_max, 0.0);
    EXPECT_EQ(t.delta32_max, 0.0);
}

TEST(Tunability, AbsoluteExcursion)
{
    transition_data ref;
    ref.omega21 = 10.0;
    ref.omega31 = 25.0;
    ref.omega32 = 15.0;
    transition_data a = ref;
    a.omega21 = 13.0;
    a.omega31 = 27.0;
    a.omega32 = 14.0;
    transition_data b = ref;
    b.omega21 = 11.0;
    b.omega32 = 9.5;
    const std::vector<transition_data> pts{a, b};
    const auto t = tunability(pts, ref);
    EXPECT_DOUBLE_EQ(t.delta21_max, 3.0);
    EXPECT_DOUBLE_EQ(t.delta31_max, 2.0);
    EXPECT_DOUBLE_EQ(t.delta32_max, 5.5);
}

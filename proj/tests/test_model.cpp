#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "piezobeam/errors.hpp"
#include "piezobeam/model.hpp"
#include "support/specs.hpp"

using namespace piezobeam;

namespace {

MaterialParams material(double c11, double g31, double eps3, double c55 = 1.0, double g15 = 0.0, double eps1 = 1.0) {
    MaterialParams m;
    m.rho = 1.0;
    m.c11 = c11;
    m.c55 = c55;
    m.gamma31 = g31;
    m.gamma15 = g15;
    m.eps1 = eps1;
    m.eps3 = eps3;
    m.mu = 1.0;
    return m;
}

std::vector<ErrorCode> violation_codes(const ModelSpec& spec) {
    try {
        validate_spec(spec);
    } catch (const ValidationError& e) {
        std::vector<ErrorCode> out;
        for (const auto& v : e.violations()) out.push_back(v.code);
        return out;
    }
    return {};
}

}  // namespace

TEST(DeriveCoefficients, ZeroCouplingReducesToElasticConstants) {
    const auto d = derive_coefficients(material(1.0, 0.0, 2.0, 1.0, 0.0, 1.0));
    EXPECT_EQ(d.alpha1, 1.0);
    EXPECT_EQ(d.beta3, 0.5);
    EXPECT_EQ(d.alpha3, 1.0);
}

TEST(DeriveCoefficients, DirectSubstitution) {
    const auto d = derive_coefficients(material(2.0, 1.0, 0.5));
    EXPECT_EQ(d.beta3, 2.0);
    EXPECT_EQ(d.alpha1, 4.0);
    // The condensed stiffness recovers the bare modulus.
    EXPECT_EQ(d.alpha1 - d.gamma3 * d.gamma3 * d.beta3, d.alpha11);
    EXPECT_EQ(d.alpha11, 2.0);
}

TEST(DeriveCoefficients, ShearStiffeningBuildsOnShearModulus) {
    const auto d = derive_coefficients(material(2.0, 1.0, 0.5, 0.25, 0.5, 0.5));
    EXPECT_EQ(d.alpha33, 0.25);
    EXPECT_DOUBLE_EQ(d.alpha3, 0.25 + 0.25 * 2.0);
}

TEST(DeriveCoefficients, RejectsNonPositiveConstants) {
    for (auto mutate : std::vector<std::function<void(MaterialParams&)>>{
             [](MaterialParams& m) { m.rho = 0.0; }, [](MaterialParams& m) { m.c11 = -1.0; },
             [](MaterialParams& m) { m.c55 = 0.0; }, [](MaterialParams& m) { m.eps1 = 0.0; },
             [](MaterialParams& m) { m.eps3 = -2.0; }}) {
        MaterialParams m = material(1.0, 1.0, 1.0);
        mutate(m);
        try {
            derive_coefficients(m);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NonPositiveParameter);
        }
    }
}

TEST(DeriveCoefficients, StretchingMatrixIsPositiveDefiniteForRandomMaterials) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> pos(0.1, 10.0), any(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const auto m = material(pos(rng), any(rng), pos(rng), pos(rng), any(rng), pos(rng));
        const auto d = derive_coefficients(m);
        const auto a = derive_coefficients(m);
        EXPECT_EQ(d.alpha1, a.alpha1);  // deterministic
        const Eigen::Matrix2d s = d.stretching_matrix();
        EXPECT_NEAR(s.determinant(), d.alpha11 * d.beta3, 1e-10 * d.alpha1 * d.beta3);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(s).eigenvalues().minCoeff(), 0.0);
        EXPECT_GE(d.alpha1, d.alpha11);
        EXPECT_GE(d.alpha3, d.alpha33);
    }
}

TEST(ValidateSpec, AcceptsSingleBeam) {
    EXPECT_NO_THROW(piezobeam::testing::make_validated(Variant::SingleEB, Regime::FullMagnetic));
}

TEST(ValidateSpec, PatchAtBeamEndIsInvalidGeometry) {
    ModelSpec s = piezobeam::testing::make_spec(Variant::PatchEB, Regime::FullMagnetic);
    s.geometry.patch_begin = 0.0;
    EXPECT_EQ(violation_codes(s), std::vector<ErrorCode>{ErrorCode::InvalidGeometry});
    s.geometry.patch_begin = 0.8;  // a > b
    EXPECT_EQ(violation_codes(s), std::vector<ErrorCode>{ErrorCode::InvalidGeometry});
}

TEST(ValidateSpec, SingleBeamWithTwoSignalsIsIllegal) {
    ModelSpec s = piezobeam::testing::make_spec(Variant::SingleEB, Regime::FullMagnetic);
    s.voltages.push_back(VoltageSignal::zero());
    EXPECT_EQ(violation_codes(s), std::vector<ErrorCode>{ErrorCode::IllegalRegime});
}

TEST(ValidateSpec, PatchNeedsMaterialAndBothSignals) {
    ModelSpec s = piezobeam::testing::make_spec(Variant::PatchMT, Regime::FullMagnetic);
    s.patch_material.reset();
    s.voltages.pop_back();
    const auto codes = violation_codes(s);
    EXPECT_NE(std::find(codes.begin(), codes.end(), ErrorCode::MissingPatchMaterial), codes.end());
    EXPECT_NE(std::find(codes.begin(), codes.end(), ErrorCode::IllegalRegime), codes.end());
}

TEST(ValidateSpec, CollectsEveryViolation) {
    ModelSpec s = piezobeam::testing::make_spec(Variant::SingleEB, Regime::FullMagnetic);
    s.beam_material.rho = -1.0;
    s.geometry.length = 0.0;
    EXPECT_EQ(violation_codes(s).size(), 2u);
}

TEST(ValidateSpec, ZeroPermeabilityOnlyInReducedRegime) {
    ModelSpec s = piezobeam::testing::make_spec(Variant::SingleMT, Regime::FullMagnetic);
    s.beam_material.mu = 0.0;
    EXPECT_FALSE(violation_codes(s).empty());
    s.regime = Regime::ElectrostaticReduced;
    EXPECT_TRUE(violation_codes(s).empty());
}

TEST(ValidatedModelSpec, RegimeAndVoltageSwapsRevalidate) {
    const auto spec = piezobeam::testing::make_validated(Variant::SingleEB, Regime::FullMagnetic);
    EXPECT_EQ(spec.with_regime(Regime::ElectrostaticReduced).regime(), Regime::ElectrostaticReduced);
    EXPECT_THROW(spec.with_voltages({VoltageSignal::zero(), VoltageSignal::zero()}), ValidationError);
}

TEST(CoefficientFields, PiecewiseConstantClosedForms) {
    const auto spec = piezobeam::testing::make_validated(Variant::PatchEB, Regime::FullMagnetic);
    const CoefficientFields c = spec.coefficient_fields();
    const auto& g = spec.geometry();
    const auto& b = spec.beam();
    const auto& p = spec.patch();
    for (double x : {0.1, 0.5, 0.9}) {
        const double chi = (x > g.patch_begin && x < g.patch_end) ? 1.0 : 0.0;
        const double h0 = g.core_half_thickness, h1 = g.patch_thickness;
        EXPECT_DOUBLE_EQ(c.rho(x), h1 * p.rho * chi + h0 * b.rho);
        EXPECT_DOUBLE_EQ(c.alpha(x), h1 * p.alpha1 * chi + h0 * b.alpha1);
        EXPECT_DOUBLE_EQ(c.rho_tilde(x), h1 * h0 * h0 * p.rho * chi + b.rho * h0 * h0 * h0 / 3.0);
        EXPECT_DOUBLE_EQ(c.bending(x), h1 * h0 * h0 * p.alpha1 * chi + b.alpha1 * h0 * h0 * h0 / 3.0);
        EXPECT_GT(c.rho(x), 0.0);
        EXPECT_GT(c.bending(x), 0.0);
    }
}

TEST(VoltageSignal, Evaluation) {
    EXPECT_EQ(VoltageSignal::zero()(3.0), 0.0);
    EXPECT_EQ(VoltageSignal::constant(2.0)(0.0), 2.0);
    EXPECT_EQ(VoltageSignal::step(2.0, 1.0)(0.5), 0.0);
    EXPECT_EQ(VoltageSignal::step(2.0, 1.0)(1.0), 2.0);
    EXPECT_NEAR(VoltageSignal::sinusoid(2.0, 0.25)(1.0), 2.0, 1e-15);
    EXPECT_EQ(VoltageSignal::sinusoid(2.0, 0.25).negated()(1.0), -VoltageSignal::sinusoid(2.0, 0.25)(1.0));
}

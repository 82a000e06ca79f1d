#include <gtest/gtest.h>

#include <random>

#include "piezobeam/energy_forms.hpp"
#include "piezobeam/errors.hpp"
#include "support/specs.hpp"

using namespace piezobeam;

namespace {

struct Fixture {
    ValidatedModelSpec spec;
    Mesh mesh;
    DofLayout layout;
    EnergyModel energy;
};

Fixture setup(const ModelSpec& s, int n = 4) {
    auto spec = validate_spec(s);
    Mesh mesh = build_mesh(spec, n);
    DofLayout layout = make_layout(spec, mesh);
    EnergyModel energy = build_energy_model(spec);
    return {spec, mesh, layout, energy};
}

// h = L = 1 single beam with alpha1 = 4, beta3 = 2, gamma3 beta3 = 2.
ModelSpec substitution_spec(Variant v) {
    ModelSpec s = piezobeam::testing::make_spec(v, Regime::FullMagnetic);
    s.geometry.thickness = 1.0;
    s.beam_material.c11 = 2.0;
    s.beam_material.gamma31 = 1.0;
    s.beam_material.eps3 = 0.5;
    return s;
}

Eigen::VectorXd zeros(const Fixture& s) { return Eigen::VectorXd::Zero(s.layout.size()); }

}  // namespace

TEST(StoredEnergy, ZeroFieldsGiveZero) {
    for (Variant v : piezobeam::testing::all_variants) {
        const Fixture s = setup(piezobeam::testing::make_spec(v, Regime::FullMagnetic));
        EXPECT_EQ(stored_energy(s.energy, s.mesh, s.layout, zeros(s)), 0.0);
    }
}

TEST(StoredEnergy, ConstantStrainSubstitution) {
    ModelSpec spec = substitution_spec(Variant::SingleEB);
    spec.beam_material.gamma31 = 0.0;
    spec.beam_material.c11 = 4.0;
    const Fixture s = setup(spec);
    Eigen::VectorXd x = zeros(s);
    interpolate_field(s.mesh, s.layout, x, Field::V, [](double t) { return t; });
    EXPECT_NEAR(stored_energy(s.energy, s.mesh, s.layout, x), 2.0, 1e-15);
}

TEST(StoredEnergy, CoupledConstantStrain) {
    const Fixture s = setup(substitution_spec(Variant::SingleEB));
    ASSERT_DOUBLE_EQ(s.spec.beam().alpha1, 4.0);
    ASSERT_DOUBLE_EQ(s.spec.beam().coupling(), 2.0);
    Eigen::VectorXd x = zeros(s);
    interpolate_field(s.mesh, s.layout, x, Field::V, [](double t) { return t; });
    interpolate_field(s.mesh, s.layout, x, Field::Q, [](double t) { return t; });
    // 1/2 (4 - 2*2 + 2) over a unit beam.
    EXPECT_NEAR(stored_energy(s.energy, s.mesh, s.layout, x), 1.0, 1e-15);
}

TEST(StoredEnergy, QuadraticAndParallelogram) {
    std::mt19937_64 rng(5);
    for (Variant v : piezobeam::testing::all_variants) {
        for (Regime r : piezobeam::testing::all_regimes) {
            const Fixture s = setup(piezobeam::testing::make_spec(v, r), 8);
            const Eigen::VectorXd x = piezobeam::testing::random_vector(s.layout.size(), rng);
            const Eigen::VectorXd y = piezobeam::testing::random_vector(s.layout.size(), rng);
            auto e = [&](const Eigen::VectorXd& z) { return stored_energy(s.energy, s.mesh, s.layout, z); };
            auto k = [&](const Eigen::VectorXd& z) { return kinetic_energy(s.energy, s.mesh, s.layout, z); };
            for (double lam : {-1.0, 2.0, 0.5}) {
                EXPECT_NEAR(e(lam * x), lam * lam * e(x), 1e-13 * e(x));
                EXPECT_NEAR(k(lam * x), lam * lam * k(x), 1e-13 * k(x));
            }
            EXPECT_NEAR(e(x + y) + e(x - y), 2 * e(x) + 2 * e(y), 1e-12 * (e(x) + e(y)));
            EXPECT_GE(e(x), 0.0);
        }
    }
}

TEST(StoredEnergy, RigidMotionsStoreNothing) {
    for (Variant v : piezobeam::testing::all_variants) {
        const Fixture s = setup(piezobeam::testing::make_spec(v, Regime::FullMagnetic));
        Eigen::VectorXd x = zeros(s);
        interpolate_field(s.mesh, s.layout, x, Field::V, [](double) { return 0.7; });
        interpolate_field(s.mesh, s.layout, x, Field::W, [](double) { return -0.3; }, [](double) { return 0.0; });
        for (Field q : {Field::Q, Field::QTop, Field::QBottom}) {
            if (s.layout.has(q)) interpolate_field(s.mesh, s.layout, x, q, [](double) { return 1.1; });
        }
        EXPECT_NEAR(stored_energy(s.energy, s.mesh, s.layout, x), 0.0, 1e-28) << to_string(v);
    }
}

TEST(StoredEnergy, UncoupledSplitsIntoElasticAndElectric) {
    ModelSpec spec = substitution_spec(Variant::SingleEB);
    spec.beam_material.gamma31 = 0.0;
    const Fixture s = setup(spec, 6);
    std::mt19937_64 rng(8);
    const Eigen::VectorXd x = piezobeam::testing::random_vector(s.layout.size(), rng);
    Eigen::VectorXd mech = x, elec = x;
    const auto& q = s.layout.block(Field::Q);
    mech.segment(q.offset, q.count).setZero();
    elec.head(q.offset).setZero();
    auto e = [&](const Eigen::VectorXd& z) { return stored_energy(s.energy, s.mesh, s.layout, z); };
    EXPECT_NEAR(e(x), e(mech) + e(elec), 1e-14 * e(x));
}

TEST(KineticEnergy, MagneticTerm) {
    ModelSpec spec = substitution_spec(Variant::SingleEB);
    spec.beam_material.mu = 2.0;
    const Fixture s = setup(spec);
    Eigen::VectorXd v = zeros(s);
    EXPECT_EQ(kinetic_energy(s.energy, s.mesh, s.layout, v), 0.0);
    interpolate_field(s.mesh, s.layout, v, Field::Q, [](double) { return 1.0; });
    EXPECT_NEAR(kinetic_energy(s.energy, s.mesh, s.layout, v), 1.0, 1e-15);
}

TEST(KineticEnergy, TimoshenkoRotaryInertia) {
    ModelSpec spec = substitution_spec(Variant::SingleMT);
    spec.beam_material.rho = 12.0;
    const Fixture s = setup(spec);
    Eigen::VectorXd v = zeros(s);
    interpolate_field(s.mesh, s.layout, v, Field::Psi, [](double) { return 1.0; });
    EXPECT_NEAR(kinetic_energy(s.energy, s.mesh, s.layout, v), 0.5, 1e-15);
}

TEST(KineticEnergy, BreakdownSeparatesMagneticPart) {
    const Fixture s = setup(piezobeam::testing::make_spec(Variant::PatchMT, Regime::FullMagnetic), 8);
    std::mt19937_64 rng(4);
    const Eigen::VectorXd x = piezobeam::testing::random_vector(s.layout.size(), rng);
    const Eigen::VectorXd v = piezobeam::testing::random_vector(s.layout.size(), rng);
    const EnergyBreakdown b = energy_breakdown(s.energy, s.mesh, s.layout, x, v);
    EXPECT_GT(b.magnetic, 0.0);
    EXPECT_NEAR(b.kinetic_mech + b.magnetic, kinetic_energy(s.energy, s.mesh, s.layout, v), 1e-14);
    EXPECT_NEAR(b.stored, stored_energy(s.energy, s.mesh, s.layout, x), 1e-14);
}

TEST(WorkRate, SingleBeam) {
    ModelSpec spec = substitution_spec(Variant::SingleEB);
    spec.voltages = {VoltageSignal::constant(1.0)};
    const Fixture s = setup(spec);
    Eigen::VectorXd v = zeros(s);
    EXPECT_EQ(work_rate(s.energy, s.mesh, s.layout, v, 0.3), 0.0);
    interpolate_field(s.mesh, s.layout, v, Field::Q, [](double t) { return t; });
    EXPECT_NEAR(work_rate(s.energy, s.mesh, s.layout, v, 0.3), -1.0, 1e-15);
    spec.voltages = {VoltageSignal::zero()};
    const Fixture z = setup(spec);
    EXPECT_EQ(work_rate(z.energy, z.mesh, z.layout, v, 0.3), 0.0);
}

TEST(WorkRate, PatchPair) {
    ModelSpec spec = piezobeam::testing::make_spec(Variant::PatchEB, Regime::FullMagnetic);
    spec.voltages = {VoltageSignal::constant(1.0), VoltageSignal::constant(1.0)};
    const Fixture s = setup(spec, 8);
    Eigen::VectorXd v = zeros(s);
    // qdot(b) - qdot(a) = 0.5 on both patches ([a, b] = [0.25, 0.75]).
    interpolate_field(s.mesh, s.layout, v, Field::QTop, [](double t) { return t; });
    interpolate_field(s.mesh, s.layout, v, Field::QBottom, [](double t) { return t; });
    EXPECT_NEAR(work_rate(s.energy, s.mesh, s.layout, v, 0.0), -1.0, 1e-15);
}

TEST(EnergyFunctions, ShapeMismatchIsRejected) {
    const Fixture s = setup(piezobeam::testing::make_spec(Variant::SingleEB, Regime::FullMagnetic));
    try {
        stored_energy(s.energy, s.mesh, s.layout, Eigen::VectorXd::Zero(3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FieldShapeMismatch);
    }
}

TEST(RecoverPointwise, ZeroFields) {
    for (Variant v : piezobeam::testing::all_variants) {
        const Fixture s = setup(piezobeam::testing::make_spec(v, Regime::FullMagnetic));
        const PointwiseFields p = recover_pointwise(s.spec, s.mesh, s.layout, zeros(s), zeros(s), 0.5, 0.0);
        EXPECT_EQ(p.S11, 0.0);
        EXPECT_EQ(p.T11, 0.0);
        EXPECT_EQ(p.D3, 0.0);
        EXPECT_EQ(p.B2, 0.0);
    }
}

TEST(RecoverPointwise, BendingStrain) {
    const Fixture s = setup(piezobeam::testing::make_spec(Variant::SingleEB, Regime::FullMagnetic));
    Eigen::VectorXd x = zeros(s);
    interpolate_field(s.mesh, s.layout, x, Field::W, [](double t) { return t * t / 2; }, [](double t) { return t; });
    for (double z : {-0.05, 0.01, 0.04}) {
        EXPECT_NEAR(recover_pointwise(s.spec, s.mesh, s.layout, x, zeros(s), 0.37, z).S11, -z, 1e-14);
    }
}

TEST(RecoverPointwise, TimoshenkoShearStrain) {
    const Fixture s = setup(piezobeam::testing::make_spec(Variant::SingleMT, Regime::FullMagnetic));
    Eigen::VectorXd x = zeros(s);
    interpolate_field(s.mesh, s.layout, x, Field::W, [](double t) { return t; });
    interpolate_field(s.mesh, s.layout, x, Field::Psi, [](double) { return -1.0; });
    EXPECT_NEAR(recover_pointwise(s.spec, s.mesh, s.layout, x, zeros(s), 0.6, 0.02).S13, 0.0, 1e-15);
}

// The e-form of the constitutive law (T = c S - gamma E, D = gamma S + eps E)
// is algebraically independent of the h-form used to evaluate the fields.
TEST(RecoverPointwise, ConstitutiveRowsHoldAtRandomPoints) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Variant v : piezobeam::testing::all_variants) {
        for (Regime r : piezobeam::testing::all_regimes) {
            const Fixture s = setup(piezobeam::testing::make_spec(v, r), 8);
            const Eigen::VectorXd x = piezobeam::testing::random_vector(s.layout.size(), rng);
            const Eigen::VectorXd xd = piezobeam::testing::random_vector(s.layout.size(), rng);
            const auto& g = s.spec.geometry();
            for (int i = 0; i < 100; ++i) {
                double px = unit(rng) * g.length;
                double pz;
                bool in_patch_layer = false;
                if (is_patch(v)) {
                    in_patch_layer = i % 2 == 1;
                    if (in_patch_layer) {
                        px = g.patch_begin + unit(rng) * (g.patch_end - g.patch_begin);
                        pz = (i % 4 == 1 ? 1.0 : -1.0) * (g.core_half_thickness + unit(rng) * g.patch_thickness);
                    } else {
                        pz = (2 * unit(rng) - 1) * g.core_half_thickness;
                    }
                } else {
                    pz = (unit(rng) - 0.5) * g.thickness;
                }
                const PointwiseFields p = recover_pointwise(s.spec, s.mesh, s.layout, x, xd, px, pz, 0.3);
                const MaterialParams& m = in_patch_layer ? *s.spec.spec().patch_material : s.spec.spec().beam_material;
                const double scale = 1.0 + std::abs(p.T11) + std::abs(p.D3) + std::abs(p.E3);
                EXPECT_NEAR(p.T11, m.c11 * p.S11 - m.gamma31 * p.E3, 1e-12 * scale);
                EXPECT_NEAR(p.D3, m.gamma31 * p.S11 + m.eps3 * p.E3, 1e-12 * scale);
                if (!is_euler_bernoulli(v) && !in_patch_layer) {
                    EXPECT_NEAR(p.T13, m.c55 * p.S13 - m.gamma15 * p.E1 + 0.0, 1e-12 * (1 + std::abs(p.T13)));
                }
                if (r == Regime::FullMagnetic && (!is_patch(v) || in_patch_layer)) {
                    const double qdot = evaluate_field(s.mesh, s.layout, xd,
                                                       is_patch(v) ? (pz > 0 ? Field::QTop : Field::QBottom) : Field::Q,
                                                       px);
                    EXPECT_NEAR(p.B2, -m.mu * qdot, 1e-14);
                }
            }
        }
    }
}

TEST(RecoverPointwise, OutsideTheBodyThrows) {
    const Fixture s = setup(piezobeam::testing::make_spec(Variant::PatchEB, Regime::FullMagnetic), 8);
    const auto& g = s.spec.geometry();
    for (auto [x, z] : {std::pair{1.5, 0.0}, std::pair{0.1, g.core_half_thickness + 0.5 * g.patch_thickness},
                        std::pair{0.5, g.core_half_thickness + 2 * g.patch_thickness}}) {
        try {
            recover_pointwise(s.spec, s.mesh, s.layout, zeros(s), zeros(s), x, z);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
        }
    }
}

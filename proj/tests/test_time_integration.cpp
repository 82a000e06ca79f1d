#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "piezobeam/assembly.hpp"
#include "piezobeam/errors.hpp"
#include "piezobeam/time_integration.hpp"
#include "support/specs.hpp"

using namespace piezobeam;

namespace {

// Scalar oscillator m = k = 1 wrapped as a one-dof system.
SemiDiscreteSystem scalar_oscillator() {
    SemiDiscreteSystem s = build_system(piezobeam::testing::make_validated(Variant::SingleEB, Regime::FullMagnetic), 2);
    s.M.resize(1, 1);
    s.K.resize(1, 1);
    s.M.insert(0, 0) = 1.0;
    s.K.insert(0, 0) = 1.0;
    s.B = Eigen::MatrixXd::Zero(1, 1);
    s.free_dofs = {0};
    s.dof_field = {Field::V};
    return s;
}

State random_state(const SemiDiscreteSystem& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return {0.0, piezobeam::testing::random_vector(s.size(), rng), piezobeam::testing::random_vector(s.size(), rng), {}};
}

double total(const SemiDiscreteSystem& s, const State& st) { return system_energy(s, st.x, st.v).total(); }

}  // namespace

TEST(Midpoint, ZeroStateStaysZero) {
    const SemiDiscreteSystem s = build_system(piezobeam::testing::make_validated(Variant::SingleMT, Regime::FullMagnetic), 8);
    TimeStepper stepper(s, {}, std::vector<VoltageSignal>{VoltageSignal::zero()});
    State st = State::zero(s.size());
    stepper.step(st, 0.01);
    EXPECT_EQ(st.x, Eigen::VectorXd::Zero(s.size()));
    EXPECT_EQ(st.v, Eigen::VectorXd::Zero(s.size()));
}

TEST(Midpoint, ScalarOscillatorClosedForm) {
    const SemiDiscreteSystem s = scalar_oscillator();
    State st{0.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), {}};
    const State next = step_midpoint(s, st, 0.1);
    const double dt = 0.1;
    EXPECT_NEAR(next.x[0], (1 - dt * dt / 4) / (1 + dt * dt / 4), 1e-15);
    EXPECT_NEAR(0.5 * (next.x[0] * next.x[0] + next.v[0] * next.v[0]), 0.5, 1e-15);
}

TEST(Midpoint, SecondOrderAccuracy) {
    const SemiDiscreteSystem s = scalar_oscillator();
    auto error = [&](double dt) {
        const Trajectory tr = simulate(s, {0.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), {}}, dt, 2.0);
        return std::abs(tr.back().x[0] - std::cos(tr.back().t));
    };
    const double ratio = error(0.02) / error(0.01);
    EXPECT_GE(ratio, 3.6);
    EXPECT_LE(ratio, 4.4);
}

TEST(Midpoint, ConservesEnergyOverTenThousandSteps) {
    for (Variant v : {Variant::SingleEB, Variant::PatchMT}) {
        auto spec = piezobeam::testing::make_validated(v, Regime::FullMagnetic);
        spec = spec.with_voltages(std::vector<VoltageSignal>(spec.signal_count(), VoltageSignal::zero()));
        const SemiDiscreteSystem s = build_system(spec, 8);
        State st = random_state(s, 5);
        const double e0 = total(s, st);
        TimeStepper stepper(s);
        double drift = 0.0;
        for (int n = 0; n < 10000; ++n) {
            stepper.step(st, 1e-3);
            drift = std::max(drift, std::abs(total(s, st) - e0));
        }
        EXPECT_LE(drift, 1e-10 * e0) << to_string(v);
    }
}

TEST(Midpoint, RandomMatrixPairsConserveEnergy) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        SemiDiscreteSystem s = scalar_oscillator();
        const Eigen::Index n = 10 + 10 * trial;
        const Eigen::MatrixXd a = piezobeam::testing::random_vector(n * n, rng).reshaped(n, n);
        const Eigen::MatrixXd b = piezobeam::testing::random_vector(n * (n / 2), rng).reshaped(n, n / 2);
        s.M = (a * a.transpose() + Eigen::MatrixXd::Identity(n, n)).sparseView();
        s.K = (b * b.transpose()).sparseView();  // rank deficient: PSD
        s.B = Eigen::MatrixXd::Zero(n, 1);
        s.dof_field.assign(static_cast<std::size_t>(n), Field::V);
        State st = random_state(s, 100 + trial);
        const double e0 = total(s, st);
        TimeStepper stepper(s);
        for (int k = 0; k < 10000; ++k) stepper.step(st, 0.05);
        EXPECT_LE(std::abs(total(s, st) - e0), 1e-10 * e0);
    }
}

TEST(Midpoint, PowerBalanceUnderSinusoidalVoltage) {
    for (Variant v : piezobeam::testing::all_variants) {
        for (Regime r : piezobeam::testing::all_regimes) {
            const SemiDiscreteSystem s = build_system(piezobeam::testing::make_validated(v, r), 8);
            const Trajectory tr = simulate(s, State::zero(s.size()), 1e-2, 20.0);
            double emax = 0.0, worst = 0.0;
            for (const auto& p : tr) emax = std::max(emax, p.energy.total());
            for (const auto& p : tr) worst = std::max(worst, std::abs(p.energy.total() - tr[0].energy.total() - p.work));
            EXPECT_GT(emax, 0.0);
            EXPECT_LE(worst, 1e-8 * emax) << to_string(v) << " " << to_string(r);
        }
    }
}

TEST(Midpoint, TimeReversible) {
    const SemiDiscreteSystem s = build_system(piezobeam::testing::make_validated(Variant::PatchEB, Regime::FullMagnetic), 8);
    const State start = random_state(s, 17);
    State st = start;
    TimeStepper stepper(s);
    for (int n = 0; n < 200; ++n) stepper.step(st, 1e-2);
    for (int n = 0; n < 200; ++n) stepper.step(st, -1e-2);
    EXPECT_LE((st.x - start.x).norm(), 1e-9 * start.x.norm());
    EXPECT_LE((st.v - start.v).norm(), 1e-9 * start.v.norm());
    EXPECT_NEAR(st.t, 0.0, 1e-12);
}

TEST(Simulate, ShortHorizonGivesOnlyInitialPoint) {
    const SemiDiscreteSystem s = scalar_oscillator();
    const Trajectory tr = simulate(s, State::zero(1), 0.1, 0.05);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr[0].t, 0.0);
}

TEST(Simulate, StrideKeepsFirstAndLastPoints) {
    const SemiDiscreteSystem s = scalar_oscillator();
    const Trajectory tr = simulate(s, {0.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), {}}, 0.1, 1.0, 3);
    ASSERT_EQ(tr.size(), 5u);  // steps 0, 3, 6, 9, 10
    EXPECT_DOUBLE_EQ(tr.back().t, 1.0);
    for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_GT(tr[i].t, tr[i - 1].t);
}

TEST(Simulate, ZeroDataWithoutVoltageIsIdenticallyZero) {
    auto spec = piezobeam::testing::make_validated(Variant::PatchMT, Regime::FullMagnetic);
    spec = spec.with_voltages({VoltageSignal::zero(), VoltageSignal::zero()});
    const SemiDiscreteSystem s = build_system(spec, 8);
    for (const auto& p : simulate(s, State::zero(s.size()), 0.01, 1.0)) {
        EXPECT_EQ(p.x.cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(p.energy.total(), 0.0);
    }
}

TEST(Simulate, SingleBeamBendingStaysExactlyZero) {
    for (Variant v : {Variant::SingleEB, Variant::SingleMT}) {
        const SemiDiscreteSystem s = build_system(piezobeam::testing::make_validated(v, Regime::FullMagnetic), 16);
        const auto bending = s.bending_dofs();
        double stretch = 0.0;
        for (const auto& p : simulate(s, State::zero(s.size()), 0.01, 5.0)) {
            for (Eigen::Index i : bending) ASSERT_EQ(p.x[i], 0.0);
            stretch = std::max(stretch, p.x.cwiseAbs().maxCoeff());
        }
        EXPECT_GT(stretch, 0.0);
    }
}

TEST(Newmark, AverageAccelerationMatchesMidpointForFreeMotion) {
    const SemiDiscreteSystem s = scalar_oscillator();
    const State init{0.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), {}};
    IntegratorSettings nm{Integrator::Newmark, 0.25, 0.5};
    const Trajectory a = simulate(s, init, 0.1, 5.0);
    const Trajectory b = simulate(s, init, 0.1, 5.0, 1, nm);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_NEAR(a.back().x[0], b.back().x[0], 1e-12);
    EXPECT_NEAR(a.back().v[0], b.back().v[0], 1e-12);
}

TEST(Newmark, NumericalDampingWithLargerGamma) {
    const SemiDiscreteSystem s = scalar_oscillator();
    const State init{0.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), {}};
    IntegratorSettings nm{Integrator::Newmark, 0.3025, 0.6};
    const Trajectory tr = simulate(s, init, 0.1, 20.0, 1, nm);
    EXPECT_LT(tr.back().energy.total(), 0.5);
}

TEST(StepCount, HandlesExactMultiples) {
    EXPECT_EQ(step_count(0.1, 1.0), 10);
    EXPECT_EQ(step_count(0.1, 0.05), 0);
    EXPECT_THROW(step_count(0.0, 1.0), Error);
}

#include "piezobeam/time_integration.hpp"

#include <cmath>

#include "piezobeam/errors.hpp"

namespace piezobeam {

EnergyBreakdown system_energy(const SemiDiscreteSystem& system, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    EnergyBreakdown e;
    const Eigen::VectorXd mv = system.M * v;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double term = 0.5 * v[i] * mv[i];
        if (is_charge(system.dof_field[static_cast<std::size_t>(i)])) {
            e.magnetic += term;
        } else {
            e.kinetic_mech += term;
        }
    }
    e.stored = 0.5 * x.dot(system.K * x);
    return e;
}

TimeStepper::TimeStepper(const SemiDiscreteSystem& system, IntegratorSettings settings,
                         std::optional<std::vector<VoltageSignal>> voltages)
    : system_(&system), settings_(settings), voltages_(voltages.value_or(system.energy.voltages)) {
    if (voltages_.size() != system.signal_count()) {
        throw Error(ErrorCode::FieldShapeMismatch, "voltage count does not match the input map");
    }
    if (settings_.kind == Integrator::Newmark && !(settings_.newmark_beta > 0.0 && settings_.newmark_gamma > 0.0)) {
        throw Error(ErrorCode::NonPositiveParameter, "Newmark beta and gamma must be positive");
    }
}

Eigen::VectorXd TimeStepper::voltages_at(double t) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(voltages_.size()));
    for (std::size_t k = 0; k < voltages_.size(); ++k) out[static_cast<Eigen::Index>(k)] = voltages_[k](t);
    return out;
}

const SymmetricFactor& TimeStepper::factor_for(double dt, double coefficient) {
    const double key = std::abs(dt);
    auto it = factors_.find(key);
    if (it != factors_.end()) return *it->second;
    const SparseMatrix a = system_->M + (coefficient * dt * dt) * system_->K;
    try {
        it = factors_.emplace(key, std::make_shared<const SymmetricFactor>(a)).first;
    } catch (const Error&) {
        throw Error(ErrorCode::SingularStepMatrix, "step matrix M + c dt^2 K is not positive definite");
    }
    return *it->second;
}

const SymmetricFactor& TimeStepper::mass_factor() {
    if (!mass_factor_) {
        try {
            mass_factor_ = std::make_shared<const SymmetricFactor>(system_->M);
        } catch (const Error&) {
            throw Error(ErrorCode::SingularStepMatrix, "mass matrix is not positive definite");
        }
    }
    return *mass_factor_;
}

double TimeStepper::step(State& state, double dt) {
    if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorCode::NonPositiveParameter, "time step must be nonzero");
    if (state.x.size() != system_->size() || state.v.size() != system_->size()) {
        throw Error(ErrorCode::FieldShapeMismatch, "state does not match the system size");
    }
    return settings_.kind == Integrator::Midpoint ? step_midpoint(state, dt) : step_newmark(state, dt);
}

double TimeStepper::step_midpoint(State& state, double dt) {
    // (M + dt^2/4 K) dv = dt (B V_mid - K x0) - dt^2/2 K v0
    const SymmetricFactor& f = factor_for(dt, 0.25);
    const Eigen::VectorXd bv = system_->B * voltages_at(state.t + 0.5 * dt);
    const Eigen::VectorXd kx = system_->K * state.x;
    const Eigen::VectorXd kv = system_->K * state.v;
    const Eigen::VectorXd dv = f.solve(Eigen::VectorXd(dt * (bv - kx) - (0.5 * dt * dt) * kv));
    const Eigen::VectorXd x1 = state.x + dt * state.v + (0.5 * dt) * dv;
    const double work = (x1 - state.x).dot(bv);
    state.x = x1;
    state.v += dv;
    state.t += dt;
    return work;
}

double TimeStepper::step_newmark(State& state, double dt) {
    const double beta = settings_.newmark_beta;
    const double gamma = settings_.newmark_gamma;
    const Eigen::VectorXd bv0 = system_->B * voltages_at(state.t);
    if (state.a.size() != system_->size()) {
        state.a = mass_factor().solve(Eigen::VectorXd(bv0 - system_->K * state.x));
    }
    const SymmetricFactor& f = factor_for(dt, beta);
    const Eigen::VectorXd bv1 = system_->B * voltages_at(state.t + dt);
    const Eigen::VectorXd predictor = state.x + dt * state.v + ((0.5 - beta) * dt * dt) * state.a;
    const Eigen::VectorXd a1 = f.solve(Eigen::VectorXd(bv1 - system_->K * predictor));
    const Eigen::VectorXd x1 = predictor + (beta * dt * dt) * a1;
    const double work = 0.5 * (x1 - state.x).dot(bv0 + bv1);
    state.v += dt * ((1.0 - gamma) * state.a + gamma * a1);
    state.x = x1;
    state.a = a1;
    state.t += dt;
    return work;
}

State step_midpoint(const SemiDiscreteSystem& system, const State& state, double dt) {
    TimeStepper stepper(system);
    State out = state;
    stepper.step(out, dt);
    return out;
}

long step_count(double dt, double t_end) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw Error(ErrorCode::NonPositiveParameter, "dt and t_end must be positive");
    }
    return static_cast<long>(std::floor(t_end / dt * (1.0 + 1e-12)));
}

void integrate(const SemiDiscreteSystem& system, const State& initial, double dt, double t_end, int stride,
               const std::function<void(const TrajectoryPoint&)>& sink, const IntegratorSettings& settings,
               std::optional<std::vector<VoltageSignal>> voltages) {
    if (stride < 1) throw Error(ErrorCode::NonPositiveParameter, "output stride must be at least 1");
    const long steps = step_count(dt, t_end);
    TimeStepper stepper(system, settings, std::move(voltages));
    State state = initial;
    const double t0 = initial.t;
    double work = 0.0;
    sink({state.t, state.x, state.v, system_energy(system, state.x, state.v), work});
    for (long n = 1; n <= steps; ++n) {
        work += stepper.step(state, dt);
        state.t = t0 + static_cast<double>(n) * dt;
        if (n % stride == 0 || n == steps) {
            sink({state.t, state.x, state.v, system_energy(system, state.x, state.v), work});
        }
    }
}

Trajectory simulate(const SemiDiscreteSystem& system, const State& initial, double dt, double t_end, int stride,
                    const IntegratorSettings& settings, std::optional<std::vector<VoltageSignal>> voltages) {
    Trajectory out;
    integrate(system, initial, dt, t_end, stride, [&out](const TrajectoryPoint& p) { out.push_back(p); }, settings,
              std::move(voltages));
    return out;
}

}  // namespace piezobeam

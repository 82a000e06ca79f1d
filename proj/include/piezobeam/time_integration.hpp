#pragma once

#include <Eigen/Core>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "piezobeam/assembly.hpp"
#include "piezobeam/energy_forms.hpp"
#include "piezobeam/linalg.hpp"

namespace piezobeam {

struct State {
    double t = 0.0;
    Eigen::VectorXd x;  ///< system dofs
    Eigen::VectorXd v;  ///< their time derivatives
    /// Accelerations, only carried by the Newmark stepper (empty otherwise).
    Eigen::VectorXd a;

    static State zero(Eigen::Index n, double t = 0.0) {
        return {t, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), {}};
    }
};

struct TrajectoryPoint {
    double t = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd v;
    EnergyBreakdown energy;
    double work = 0.0;  ///< cumulative work injected by the voltages since t0
};

using Trajectory = std::vector<TrajectoryPoint>;

enum class Integrator { Midpoint, Newmark };

struct IntegratorSettings {
    Integrator kind = Integrator::Midpoint;
    double newmark_beta = 0.25;
    double newmark_gamma = 0.5;
};

/// Energies from the system matrices: kinetic over mechanical dofs,
/// magnetic over charge dofs (M has no mechanical/charge coupling).
EnergyBreakdown system_energy(const SemiDiscreteSystem& system, const Eigen::VectorXd& x, const Eigen::VectorXd& v);

/// Linear time stepper for M xddot + K x = B V(t). Caches the step-matrix
/// factorization per |dt|; negative dt steps backwards in time.
class TimeStepper {
public:
    TimeStepper(const SemiDiscreteSystem& system, IntegratorSettings settings = {},
                std::optional<std::vector<VoltageSignal>> voltages = std::nullopt);

    /// Advances `state` by dt and returns the work injected over the step.
    /// Midpoint: voltage at t + dt/2, work (x1 - x0)^T B V_mid, which makes
    /// the discrete power balance exact. Newmark: trapezoidal work.
    /// Throws SingularStepMatrix.
    double step(State& state, double dt);

    Eigen::VectorXd voltages_at(double t) const;
    const SemiDiscreteSystem& system() const { return *system_; }

private:
    const SymmetricFactor& factor_for(double dt, double coefficient);
    const SymmetricFactor& mass_factor();
    double step_midpoint(State& state, double dt);
    double step_newmark(State& state, double dt);

    const SemiDiscreteSystem* system_;
    IntegratorSettings settings_;
    std::vector<VoltageSignal> voltages_;
    std::map<double, std::shared_ptr<const SymmetricFactor>> factors_;
    std::shared_ptr<const SymmetricFactor> mass_factor_;
};

/// Midpoint step without cached state, for one-off use.
State step_midpoint(const SemiDiscreteSystem& system, const State& state, double dt);

/// Number of steps taken for (dt, t_end): floor(t_end / dt), robust to
/// t_end being an exact multiple of dt up to round-off.
long step_count(double dt, double t_end);

/// Steps from `initial` to t_end, reporting every `stride`-th point (the
/// initial and final points are always reported). Times are t0 + n dt.
void integrate(const SemiDiscreteSystem& system, const State& initial, double dt, double t_end, int stride,
               const std::function<void(const TrajectoryPoint&)>& sink, const IntegratorSettings& settings = {},
               std::optional<std::vector<VoltageSignal>> voltages = std::nullopt);

Trajectory simulate(const SemiDiscreteSystem& system, const State& initial, double dt, double t_end, int stride = 1,
                    const IntegratorSettings& settings = {},
                    std::optional<std::vector<VoltageSignal>> voltages = std::nullopt);

}  // namespace piezobeam

#include "pdmp/coupling.hpp"

#include <cmath>
#include <variant>

#include "pdmp/error.hpp"
#include "pdmp/periodic_dmp.hpp"
#include "pdmp/qp_dmp.hpp"
#include "pdmp/rmp_dmp.hpp"

namespace pdmp {
namespace {

struct Lookup {
  std::size_t i = 0;
  std::size_t j = 0;
  double s = 0.0;
};

Lookup locate(const QuatTrajectory& demo, double t) {
  const auto n = static_cast<double>(demo.size());
  double pos = std::fmod((t - demo.timestamps().front()) / demo.dt(), n);
  if (pos < 0.0) pos += n;
  Lookup l;
  l.i = static_cast<std::size_t>(std::floor(pos)) % demo.size();
  l.j = (l.i + 1) % demo.size();
  l.s = pos - std::floor(pos);
  return l;
}

using OnlineFit = std::variant<RecursiveFit, JointRecursiveFit>;

OnlineFit make_fit(const KernelBasis& basis, const Eigen::VectorXd& amplitude,
                   const TrainConfig& tc) {
  const Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(3, basis.size());
  if (tc.learning == Learning::kRecursive) {
    return RecursiveFit(basis, w0, amplitude, tc.lambda,
                        tc.rls_initial_covariance);
  }
  return JointRecursiveFit(basis, w0, amplitude, tc.lambda,
                           tc.rls_initial_covariance);
}

Eigen::Vector3d lerp(const Vec3Series& v, const Lookup& l) {
  return (1.0 - l.s) * v[l.i] + l.s * v[l.j];
}

void check_grid(std::span<const double> input, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (input.empty()) throw DegenerateInput("input signal is empty");
}

// Online learner plus driven DMP for one of the two formulations.
class CoupledDmp {
 public:
  CoupledDmp(const QuatTrajectory& demo, const CouplingConfig& config)
      : demo_(drop_closing_sample(demo)), method_(config.method) {
    const TrainConfig& tc = config.train;
    const double w0 = config.frequency_guess;
    alpha_ = tc.dmp.alpha_z;
    beta_ = tc.dmp.resolved_beta();
    if (method_ == Method::kRmp) {
      rmp_.center = tc.anchor == Anchor::kKarcherMean
                        ? karcher_mean(demo_.samples())
                        : demo_[0];
      tan_ = project_to_tangent(demo_, rmp_.center, Boundary::kCircular);
      rmp_.inner = PeriodicDmpModel::make(3, tc.dmp, w0);
      rmp_.inner.amplitude = tc.amplitude;
      switch (tc.goal) {
        case GoalChoice::kMean:
          rmp_.inner.goal = stack_rows(tan_.zeta).colwise().mean().transpose();
          break;
        case GoalChoice::kZero:
          rmp_.inner.goal = Eigen::VectorXd::Zero(3);
          break;
        case GoalChoice::kIdentity:
          rmp_.inner.goal = log_map(UnitQuaternion::identity(), rmp_.center);
          break;
      }
      rmp_state_.y = tan_.zeta.front();
      rmp_state_.z = tan_.dzeta.front() / w0;
      fit_.emplace(make_fit(rmp_.inner.basis, tc.amplitude, tc));
    } else {
      const UnitQuaternion goal = tc.goal == GoalChoice::kMean
                                      ? karcher_mean(demo_.samples())
                                      : UnitQuaternion::identity();
      qp_ = qp::QpDmpModel::make(tc.dmp, w0, goal);
      qp_.amplitude = tc.amplitude;
      rates_ = angular_velocity(demo_, Boundary::kCircular);
      qp_state_.q = demo_[0];
      qp_state_.eta = rates_.omega.front() / w0;
      fit_.emplace(make_fit(qp_.basis, Eigen::VectorXd::Ones(3), tc));
    }
  }

  UnitQuaternion output() const {
    return method_ == Method::kRmp ? rmp::output(rmp_state_, rmp_)
                                   : qp_state_.q;
  }

  void learn(double t, double phi, double omega) {
    const Lookup l = locate(demo_, t);
    Eigen::Vector3d f;
    if (method_ == Method::kRmp) {
      const Eigen::Vector3d y = lerp(tan_.zeta, l);
      const Eigen::Vector3d dy = lerp(tan_.dzeta, l);
      const Eigen::Vector3d ddy = lerp(tan_.ddzeta, l);
      const Eigen::Vector3d g = rmp_.inner.goal;
      f = ddy / (omega * omega) - alpha_ * (beta_ * (g - y) - dy / omega);
      rmp_.inner.weights = update(phi, f);
    } else {
      const UnitQuaternion q = interpolate(demo_[l.i], demo_[l.j], l.s);
      const Eigen::Vector3d eta = lerp(rates_.omega, l) / omega;
      const Eigen::Vector3d deta = lerp(rates_.domega, l) / omega;
      const Eigen::Vector3d raw =
          deta / omega - alpha_ * (beta_ * 2.0 * log_map(qp_.goal, q) - eta);
      f = raw.cwiseQuotient(qp_.amplitude);
      qp_.weights = update(phi, f);
    }
  }

  void advance(double phi, double omega, double dt) {
    if (method_ == Method::kRmp) {
      rmp_state_ = rmp::step_driven(rmp_state_, rmp_, phi, omega, dt).state;
    } else {
      qp_state_ = qp::step_driven(qp_state_, qp_, phi, omega, dt);
    }
  }

 private:
  Eigen::MatrixXd update(double phi, const Eigen::Vector3d& f) {
    return std::visit(
        [&](auto& fit) {
          fit.update(phi, f);
          return fit.weights();
        },
        *fit_);
  }

  QuatTrajectory demo_;
  Method method_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::optional<OnlineFit> fit_;

  rmp::RmpDmpModel rmp_;
  TangentTrajectory tan_;
  DmpState rmp_state_;

  qp::QpDmpModel qp_;
  OmegaTrajectory rates_;
  qp::QpDmpState qp_state_;
};

}  // namespace

std::vector<CoupledSample> run_oscillator(std::span<const double> input,
                                          double dt, double frequency_guess,
                                          const OscillatorParams& params) {
  check_grid(input, dt);
  std::vector<CoupledSample> out;
  out.reserve(input.size());
  OscillatorState osc = OscillatorState::initial(frequency_guess, params);
  for (std::size_t k = 0; k < input.size(); ++k) {
    out.push_back({static_cast<double>(k) * dt, osc.wrapped_phase(),
                   osc.frequency, input[k], estimate_signal(osc), std::nullopt});
    osc = step(osc, input[k], dt, params);
  }
  return out;
}

std::vector<CoupledSample> run_coupled(const QuatTrajectory& demo,
                                       std::span<const double> input,
                                       double dt,
                                       const CouplingConfig& config) {
  check_grid(input, dt);
  const OscillatorParams& params = config.train.oscillator;
  OscillatorState osc = OscillatorState::initial(config.frequency_guess, params);
  CoupledDmp dmp(demo, config);

  std::vector<CoupledSample> out;
  out.reserve(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const double phi = osc.wrapped_phase();
    out.push_back({t, phi, osc.frequency, input[k], estimate_signal(osc),
                   dmp.output()});
    dmp.learn(t, phi, osc.frequency);
    dmp.advance(phi, osc.frequency, dt);
    osc = step(osc, input[k], dt, params);
  }
  return out;
}

UnitQuaternion demo_at_time(const QuatTrajectory& demo, double t) {
  const Lookup l = locate(demo, t);
  return interpolate(demo[l.i], demo[l.j], l.s);
}

}  // namespace pdmp

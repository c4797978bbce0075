#include "pdmp/quat.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "pdmp/error.hpp"

namespace pdmp {

UnitQuaternion UnitQuaternion::normalized(double w, double x, double y,
                                          double z) {
  return normalized(Eigen::Vector4d(w, x, y, z));
}

UnitQuaternion UnitQuaternion::normalized(const Eigen::Vector4d& wxyz) {
  const double n = wxyz.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw DegenerateInput("cannot normalize a zero or non-finite quaternion");
  }
  const Eigen::Vector4d u = wxyz / n;
  return {u[0], u.tail<3>()};
}

UnitQuaternion UnitQuaternion::from_unit(double w, double x, double y,
                                         double z, double tol) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(std::abs(n - 1.0) <= tol)) {
    throw DomainError("quaternion norm " + std::to_string(n) +
                      " is not unit within tolerance");
  }
  return {w, Eigen::Vector3d(x, y, z)};
}

double UnitQuaternion::norm() const {
  return std::sqrt(w_ * w_ + v_.squaredNorm());
}

UnitQuaternion product(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  return {q1.w_ * q2.w_ - q1.v_.dot(q2.v_),
          q1.w_ * q2.v_ + q2.w_ * q1.v_ + q1.v_.cross(q2.v_)};
}

UnitQuaternion conjugate(const UnitQuaternion& q) { return {q.w_, -q.v_}; }

double dot(const UnitQuaternion& a, const UnitQuaternion& b) {
  return a.w() * b.w() + a.vec().dot(b.vec());
}

TangentVector quat_log(const UnitQuaternion& q, const QuatTolerances& tol) {
  if ((q.coeffs() - Eigen::Vector4d(-1, 0, 0, 0)).norm() < tol.antipode) {
    throw AntipodalError("logarithm undefined at the antipode of identity");
  }
  const double n = q.vec().norm();
  if (n < tol.zero_branch) {
    return TangentVector::Zero();
  }
  // atan2 instead of acos(w): accurate near identity and near the antipode.
  return std::atan2(n, q.w()) / n * q.vec();
}

UnitQuaternion quat_exp(const TangentVector& zeta) {
  const double theta = zeta.norm();
  if (!(theta < std::numbers::pi)) {
    throw DomainError("exp: ||zeta|| = " + std::to_string(theta) +
                      " outside the bijective domain (< pi)");
  }
  if (theta == 0.0) {
    return {};
  }
  return {std::cos(theta), std::sin(theta) / theta * zeta};
}

TangentVector log_map(const UnitQuaternion& q1, const UnitQuaternion& q2,
                      const QuatTolerances& tol) {
  return quat_log(q1 * conjugate(q2), tol);
}

UnitQuaternion exp_map(const TangentVector& zeta, const UnitQuaternion& q2) {
  return quat_exp(zeta) * q2;
}

double geodesic_distance(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  const UnitQuaternion d = q1 * conjugate(q2);
  return std::atan2(d.vec().norm(), std::abs(d.w()));
}

bool same_orientation(const UnitQuaternion& q1, const UnitQuaternion& q2,
                      double tol) {
  return geodesic_distance(q1, q2) <= tol;
}

std::vector<UnitQuaternion> hemisphere_align(
    std::span<const UnitQuaternion> traj) {
  std::vector<UnitQuaternion> out(traj.begin(), traj.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (dot(out[i - 1], out[i]) < 0.0) {
      out[i] = -out[i];
    }
  }
  return out;
}

UnitQuaternion karcher_mean(std::span<const UnitQuaternion> traj, double tol,
                            int max_iter) {
  if (traj.empty()) {
    throw DegenerateInput("karcher_mean of an empty set");
  }
  // Chordal mean as the starting point. Inputs are expected hemisphere
  // aligned; a set that cancels out is aligned to its first sample instead.
  Eigen::Vector4d sum = Eigen::Vector4d::Zero();
  for (const auto& q : traj) sum += q.coeffs();
  if (sum.norm() < 1e-3 * static_cast<double>(traj.size())) {
    sum.setZero();
    for (const auto& q : traj) {
      sum += dot(q, traj.front()) < 0.0 ? -q.coeffs() : q.coeffs();
    }
  }
  UnitQuaternion mu = UnitQuaternion::normalized(sum);

  const double inv_n = 1.0 / static_cast<double>(traj.size());
  for (int iter = 0;; ++iter) {
    TangentVector step = TangentVector::Zero();
    for (const auto& q : traj) {
      step += log_map(dot(q, mu) < 0.0 ? -q : q, mu);
    }
    step *= inv_n;
    if (step.norm() <= tol) {
      return mu;
    }
    if (iter == max_iter) {
      throw NoConvergence("karcher_mean: residual " +
                          std::to_string(step.norm()) + " after " +
                          std::to_string(max_iter) + " iterations");
    }
    mu = UnitQuaternion::normalized(exp_map(step, mu).coeffs());
  }
}

std::ostream& operator<<(std::ostream& os, const UnitQuaternion& q) {
  return os << '(' << q.w() << ", [" << q.vec().x() << ", " << q.vec().y()
            << ", " << q.vec().z() << "])";
}

}  // namespace pdmp

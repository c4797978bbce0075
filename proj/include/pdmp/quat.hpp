#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <span>
#include <vector>

namespace pdmp {

/// 3-vector in a tangent space of S^3. Also used for angular velocities
/// (rad/s) and scaled rotation vectors.
///
/// Convention: Exp(zeta) = cos||zeta|| + sin||zeta|| zeta/||zeta||, so the
/// norm of a tangent vector is HALF the rotation angle it encodes.
using TangentVector = Eigen::Vector3d;

/// Numerical thresholds used by the quaternion routines. The defaults are
/// what every free function uses unless a caller passes its own set.
struct QuatTolerances {
  /// Accepted deviation from unit norm for externally supplied quaternions.
  double unit_norm = 1e-12;
  /// Distance from -1 below which q1 * conj(q2) counts as the antipode.
  double antipode = 1e-9;
  /// ||u|| below which Log returns the zero vector.
  double zero_branch = 1e-12;
  double karcher_tol = 1e-10;
  int karcher_max_iter = 100;
};

inline constexpr QuatTolerances kDefaultTolerances{};

/// Orientation on the unit 3-sphere, stored as scalar part w and vector
/// part (x, y, z). q and -q represent the same orientation; operator== is
/// component-wise, use same_orientation() for the orientation test.
class UnitQuaternion {
 public:
  /// Identity.
  UnitQuaternion() = default;

  /// Normalizes (w, x, y, z). Throws DegenerateInput for a (near) zero vector.
  static UnitQuaternion normalized(double w, double x, double y, double z);
  static UnitQuaternion normalized(const Eigen::Vector4d& wxyz);

  /// Accepts components that are already unit norm within `tol`, without
  /// touching them. Throws DomainError otherwise.
  static UnitQuaternion from_unit(double w, double x, double y, double z,
                                  double tol = kDefaultTolerances.unit_norm);

  static UnitQuaternion identity() { return {}; }

  double w() const { return w_; }
  const Eigen::Vector3d& vec() const { return v_; }
  /// (w, x, y, z)
  Eigen::Vector4d coeffs() const { return {w_, v_.x(), v_.y(), v_.z()}; }
  double norm() const;

  UnitQuaternion operator-() const { return {-w_, -v_}; }

  bool operator==(const UnitQuaternion& o) const {
    return w_ == o.w_ && v_ == o.v_;
  }

 private:
  UnitQuaternion(double w, const Eigen::Vector3d& v) : w_(w), v_(v) {}

  double w_ = 1.0;
  Eigen::Vector3d v_ = Eigen::Vector3d::Zero();

  friend UnitQuaternion product(const UnitQuaternion&, const UnitQuaternion&);
  friend UnitQuaternion conjugate(const UnitQuaternion&);
  friend UnitQuaternion quat_exp(const TangentVector&);
};

/// Hamilton product (v1 v2 - u1.u2) + (v1 u2 + v2 u1 + u1 x u2).
/// The result is not renormalized; for unit inputs it is unit to rounding.
UnitQuaternion product(const UnitQuaternion& q1, const UnitQuaternion& q2);

inline UnitQuaternion operator*(const UnitQuaternion& q1,
                                const UnitQuaternion& q2) {
  return product(q1, q2);
}

UnitQuaternion conjugate(const UnitQuaternion& q);

/// 4-vector dot product.
double dot(const UnitQuaternion& a, const UnitQuaternion& b);

/// Log at the identity. Throws AntipodalError near -1.
TangentVector quat_log(const UnitQuaternion& q,
                       const QuatTolerances& tol = kDefaultTolerances);

/// Exp at the identity. Throws DomainError when ||zeta|| >= pi.
UnitQuaternion quat_exp(const TangentVector& zeta);

/// Log_{q2}(q1) = Log(q1 * conj(q2)). No hemisphere flip is applied, so
/// results up to (but excluding) norm pi are reachable.
TangentVector log_map(const UnitQuaternion& q1, const UnitQuaternion& q2,
                      const QuatTolerances& tol = kDefaultTolerances);

/// Exp_{q2}(zeta) = Exp(zeta) * q2.
UnitQuaternion exp_map(const TangentVector& zeta, const UnitQuaternion& q2);

/// Shortest-arc distance between the orientations (sign invariant), in the
/// half-angle units of log_map; lies in [0, pi/2].
double geodesic_distance(const UnitQuaternion& q1, const UnitQuaternion& q2);

bool same_orientation(const UnitQuaternion& q1, const UnitQuaternion& q2,
                      double tol = 1e-12);

/// Negates samples so every adjacent pair has a positive 4-vector dot
/// product. The first sample is kept as is.
std::vector<UnitQuaternion> hemisphere_align(
    std::span<const UnitQuaternion> traj);

/// Karcher (Frechet) mean by iterative tangent-space averaging, initialized
/// with the normalized arithmetic mean. Samples in the opposite hemisphere
/// of the running estimate are negated before projection.
/// Throws NoConvergence after `max_iter` updates.
UnitQuaternion karcher_mean(std::span<const UnitQuaternion> traj,
                            double tol = kDefaultTolerances.karcher_tol,
                            int max_iter = kDefaultTolerances.karcher_max_iter);

std::ostream& operator<<(std::ostream& os, const UnitQuaternion& q);

}  // namespace pdmp

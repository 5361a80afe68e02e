#pragma once

#include "tmx/vec.hpp"

namespace tmx {

/// Half-space of the incoming component. Left: incoming from z < 0 (K_i > 0).
enum class Side { Left, Right };

/// The two half-spaces themselves; the plane z = 0 belongs to Positive.
enum class HalfSpace { Negative, Positive };

Side opposite(Side s);
const char* to_string(Side s);

/// Two non-magnetic dielectric half-spaces meeting at z = 0.
///
/// The default configuration requires n_left >= n_right (dense medium on the
/// left). Pass `generalized = true` to lift that restriction.
class HalfSpaceMedium {
 public:
  explicit HalfSpaceMedium(double n_left, double n_right = 1.0, bool generalized = false);

  double n_left() const { return n_left_; }
  double n_right() const { return n_right_; }
  bool generalized() const { return generalized_; }

  double index_of(HalfSpace h) const { return h == HalfSpace::Negative ? n_left_ : n_right_; }
  double max_index() const { return n_left_ > n_right_ ? n_left_ : n_right_; }

  bool operator==(const HalfSpaceMedium&) const = default;

 private:
  double n_left_;
  double n_right_;
  bool generalized_;
};

double refractive_index_at(const HalfSpaceMedium& medium, const Vec3& x);

HalfSpace half_space_of(const Vec3& x);

/// Half-space holding the incoming and reflected components for `side`.
inline HalfSpace incoming_half(Side side) {
  return side == Side::Left ? HalfSpace::Negative : HalfSpace::Positive;
}
inline HalfSpace transmitted_half(Side side) {
  return side == Side::Left ? HalfSpace::Positive : HalfSpace::Negative;
}

/// Wave-vector bookkeeping of one triple mode. Natural units, c = 1.
///
/// Invariants (enforced by the factories below):
///   |k_par|^2 + K_i^2 = n_i^2 omega^2,  |k_par|^2 + K_t^2 = n_t^2 omega^2,
///   sign(K_i) = +1 for Left, -1 for Right, and an imaginary K_t decays away
///   from the interface.
struct ModeKinematics {
  HalfSpaceMedium medium{1.0};
  double omega = 0.0;
  Vec2 k_parallel;
  Side side = Side::Left;
  double n_i = 1.0;
  double n_t = 1.0;
  double K_i = 0.0;
  cplx K_t;
  double X_i = 0.0;
  cplx X_t;

  double K_r() const { return -K_i; }
  bool evanescent() const { return K_t.imag() != 0.0; }
  /// dK_t/dK_i along the family of modes with fixed k_par and side.
  cplx transmitted_slope() const { return (n_t * n_t) / (n_i * n_i) * K_i / K_t; }
};

ModeKinematics make_kinematics(const HalfSpaceMedium& medium, double omega, const Vec2& k_parallel,
                               Side side);

/// Same family member, parameterized by the incoming normal component instead
/// of the frequency. K_i is stored as given.
ModeKinematics kinematics_from_normal(const HalfSpaceMedium& medium, const Vec2& k_parallel,
                                      double K_i, Side side);

}  // namespace tmx

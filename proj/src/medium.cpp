#include "tmx/medium.hpp"

#include <cmath>
#include <string>

#include "tmx/error.hpp"

namespace tmx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidMedium: return "InvalidMedium";
    case ErrorCode::kNonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::kGrazingIncidence: return "GrazingIncidence";
    case ErrorCode::kPolarizationMismatch: return "PolarizationMismatch";
    case ErrorCode::kDivergentIntegral: return "DivergentIntegral";
    case ErrorCode::kQuadratureFailure: return "QuadratureFailure";
    case ErrorCode::kResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kZeroWaveVector: return "ZeroWaveVector";
    case ErrorCode::kTailTooLarge: return "TailTooLarge";
    case ErrorCode::kInconsistentSide: return "InconsistentSide";
  }
  return "Unknown";
}

Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

const char* to_string(Side s) { return s == Side::Left ? "L" : "R"; }

HalfSpaceMedium::HalfSpaceMedium(double n_left, double n_right, bool generalized)
    : n_left_(n_left), n_right_(n_right), generalized_(generalized) {
  if (!(n_left > 0.0) || !(n_right > 0.0) || !std::isfinite(n_left) || !std::isfinite(n_right)) {
    throw Error(ErrorCode::kInvalidMedium, "refractive indices must be finite and positive");
  }
  if (!generalized && n_left < n_right) {
    throw Error(ErrorCode::kInvalidMedium,
                "n_left < n_right requires the generalized configuration");
  }
}

HalfSpace half_space_of(const Vec3& x) { return x.z < 0.0 ? HalfSpace::Negative : HalfSpace::Positive; }

double refractive_index_at(const HalfSpaceMedium& medium, const Vec3& x) {
  return medium.index_of(half_space_of(x));
}

namespace {

// Normal component from its square, on the branch selected by `sign`:
// real roots carry the sign, imaginary roots decay away from z = 0.
cplx signed_root(double square, double sign) {
  if (square >= 0.0) return {sign * std::sqrt(square), 0.0};
  return {0.0, sign * std::sqrt(-square)};
}

ModeKinematics finish(const HalfSpaceMedium& medium, double omega, const Vec2& kpar, Side side,
                      double K_i, double kt2) {
  ModeKinematics kin;
  kin.medium = medium;
  kin.omega = omega;
  kin.k_parallel = kpar;
  kin.side = side;
  kin.n_i = side == Side::Left ? medium.n_left() : medium.n_right();
  kin.n_t = side == Side::Left ? medium.n_right() : medium.n_left();
  const double sign = side == Side::Left ? 1.0 : -1.0;
  kin.K_i = K_i;
  kin.K_t = signed_root(kt2, sign);
  kin.X_i = K_i / (kin.n_i * kin.n_i);
  kin.X_t = kin.K_t / (kin.n_t * kin.n_t);
  return kin;
}

}  // namespace

ModeKinematics make_kinematics(const HalfSpaceMedium& medium, double omega, const Vec2& kpar,
                               Side side) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::kNonPositiveFrequency, "omega = " + std::to_string(omega));
  }
  const double n_i = side == Side::Left ? medium.n_left() : medium.n_right();
  const double n_t = side == Side::Left ? medium.n_right() : medium.n_left();
  const double kp2 = kpar.norm2();
  const double ki2 = n_i * n_i * omega * omega - kp2;
  if (!(ki2 > 0.0)) {
    throw Error(ErrorCode::kGrazingIncidence, "|k_par| >= n_i * omega");
  }
  const double sign = side == Side::Left ? 1.0 : -1.0;
  const double kt2 = n_t * n_t * omega * omega - kp2;
  return finish(medium, omega, kpar, side, sign * std::sqrt(ki2), kt2);
}

ModeKinematics kinematics_from_normal(const HalfSpaceMedium& medium, const Vec2& kpar, double K_i,
                                      Side side) {
  if (K_i == 0.0 || !std::isfinite(K_i)) {
    throw Error(ErrorCode::kGrazingIncidence, "K_i must be finite and nonzero");
  }
  if ((side == Side::Left) != (K_i > 0.0)) {
    throw Error(ErrorCode::kInconsistentSide, "sign of K_i does not match the side");
  }
  const double n_i = side == Side::Left ? medium.n_left() : medium.n_right();
  const double n_t = side == Side::Left ? medium.n_right() : medium.n_left();
  const double kp2 = kpar.norm2();
  const double w2 = (K_i * K_i + kp2) / (n_i * n_i);
  const double kt2 = (n_t * n_t) / (n_i * n_i) * (K_i * K_i + kp2) - kp2;
  return finish(medium, std::sqrt(w2), kpar, side, K_i, kt2);
}

}  // namespace tmx

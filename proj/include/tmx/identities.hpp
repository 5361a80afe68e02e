#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tmx/medium.hpp"
#include "tmx/modes.hpp"

namespace tmx {

struct IdentityReport {
  std::string name;
  std::size_t samples = 0;
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  /// True when every rational fixture gave an exactly zero residual.
  bool exact_verified = false;
  std::size_t exact_points = 0;

  bool passed() const { return max_abs_residual <= tolerance && exact_verified; }
};

/// |1 + |a_r|^2 + |a_t|^2 K_t/K_i - 2|. Requires real K_t.
double check_te_bracket(const ModeKinematics& kin,
                        TransmissionRule rule = TransmissionRule::Continuity);

/// |1 + b_r^2 + b_t^2 X_t/X_i - 2|. Requires real K_t.
double check_tm_bracket(const ModeKinematics& kin);

/// max(||a_r| - 1|, ||b_r| - 1|). Requires imaginary K_t.
double check_evanescent_unimodular(const ModeKinematics& kin);

/// Copropagating pair at one k_par and distinct frequencies. Maximum of the
/// relative mismatch of the two principal denominators and the relative size
/// of the assembled TE-electric and TM-magnetic principal sums.
double check_principal_cancellation(const ModeKinematics& kin, const ModeKinematics& kin_p);

/// Left mode against a Right mode at the same k_par: relative size of the
/// assembled principal sums (TE and TM) and of the closed-form expression.
double check_counter_cancellation(const ModeKinematics& kin_left, const ModeKinematics& kin_right);

enum class JacobianForm { TE, TM };

struct FiniteDifferenceParams {
  double h = 1e-5;  // relative to |K_i|
  int richardson_levels = 1;
};

/// Relative mismatch between 1/|dK_t/dK_i| from central differences of the
/// dispersion relations and the closed-form Jacobian factor. Requires real K_t.
double check_delta_jacobian(const ModeKinematics& kin, JacobianForm form,
                            const FiniteDifferenceParams& fd = {});

/// The closed-form Jacobian factor: (n_i^2/n_t^2)|K_t|/|K_i| for TE and
/// X_t/X_i for TM.
double delta_jacobian(const ModeKinematics& kin, JacobianForm form);

/// |(1 + a_r*)(1 - a_r') - (K_t'/K_i') a_t' a_t*| for a copropagating pair.
double check_surface_identity(const ModeKinematics& kin, const ModeKinematics& kin_p,
                              TransmissionRule rule = TransmissionRule::Continuity);

/// The surface-identity function evaluated on (K, a) and on (X, b); max.
double check_tm_te_substitution(const ModeKinematics& kin, const ModeKinematics& kin_p);

/// Draws valid kinematics. Deterministic for a given seed: uniform variates
/// come from the top 53 bits of mt19937_64.
class KinematicsSampler {
 public:
  enum class Regime { Any, Travelling, Evanescent };

  explicit KinematicsSampler(std::uint64_t seed) : gen_(seed) {}

  double uniform(double a, double b);
  HalfSpaceMedium medium(double n_min = 1.0);
  ModeKinematics single(Regime regime, Side side = Side::Left);
  std::pair<ModeKinematics, ModeKinematics> copropagating(Regime first, Regime second,
                                                          Side side = Side::Left);
  std::pair<ModeKinematics, ModeKinematics> counterpropagating(Regime left = Regime::Any);

 private:
  bool try_omega(const HalfSpaceMedium& m, double kappa, Regime regime, Side side, double& omega);
  Vec2 direction(double kappa);

  std::mt19937_64 gen_;
};

struct IdentitySuiteConfig {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  double jacobian_tolerance = 1e-8;
  FiniteDifferenceParams fd;
  TransmissionRule rule = TransmissionRule::Continuity;
};

/// All eight identities, floating sweeps plus exact rational fixtures.
std::vector<IdentityReport> run_identity_suite(const IdentitySuiteConfig& config);

}  // namespace tmx

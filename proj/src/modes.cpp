#include "tmx/modes.hpp"

namespace tmx {

const char* to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

const char* to_string(NormalizationVariant v) {
  return v == NormalizationVariant::Raw ? "raw" : "normalized";
}

namespace {

Coefficients from_pair(cplx a, cplx b, TransmissionRule rule) {
  const auto f = fresnel(a, b);
  if (rule == TransmissionRule::SwappedNumerator) return {f.r, 2.0 * b / (a + b)};
  return {f.r, f.t};
}

}  // namespace

Coefficients te_coefficients(const ModeKinematics& kin, TransmissionRule rule) {
  return from_pair(cplx(kin.K_i), kin.K_t, rule);
}

Coefficients tm_coefficients(const ModeKinematics& kin, TransmissionRule rule) {
  return from_pair(cplx(kin.X_i), kin.X_t, rule);
}

Vec3 polarization_vector(const Vec2& kpar) {
  // k_i x e3 = (k_y, -k_x, 0)
  const double n = kpar.norm();
  if (n == 0.0) return {0.0, 1.0, 0.0};
  return {kpar.y / n, -kpar.x / n, 0.0};
}

TripleMode build_mode(const ModeKinematics& kin, Polarization pol, NormalizationVariant variant,
                      TransmissionRule rule) {
  TripleMode m;
  m.kin = kin;
  m.pol = pol;
  m.variant = variant;
  m.e_hat = polarization_vector(kin.k_parallel);
  const Coefficients c = pol == Polarization::TE ? te_coefficients(kin, rule) : tm_coefficients(kin, rule);
  m.r_coeff = c.reflection;
  m.t_coeff = c.transmission;
  m.incoming_amplitude =
      (pol == Polarization::TE && variant == NormalizationVariant::Normalized) ? 1.0 / kin.n_i : 1.0;
  return m;
}

}  // namespace tmx

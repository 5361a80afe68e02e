#pragma once

#include "tmx/medium.hpp"

namespace tmx {

enum class Polarization { TE = 1, TM = 2 };

/// Raw: unit incoming amplitude (electric for TE, magnetic for TM).
/// Normalized: TE modes scaled by 1/n_i so both polarizations share one
/// delta normalization in the expansion.
enum class NormalizationVariant { Raw, Normalized };

/// Transmission coefficient convention. Continuity gives t = 1 + r and is the
/// only one used by the library proper; SwappedNumerator (t = 2K_t/(K_i + K_t))
/// exists to demonstrate that it breaks the boundary conditions.
enum class TransmissionRule { Continuity, SwappedNumerator };

const char* to_string(Polarization p);
const char* to_string(NormalizationVariant v);

struct Coefficients {
  cplx reflection;
  cplx transmission;
};

/// r = (a - b)/(a + b), t = 1 + r. Shared by TE (a, b) = (K_i, K_t) and TM
/// (a, b) = (X_i, X_t).
template <class T>
struct FresnelPair {
  T r;
  T t;
};

template <class T>
FresnelPair<T> fresnel(const T& a, const T& b) {
  const T r = (a - b) / (a + b);
  return {r, T(1) + r};
}

Coefficients te_coefficients(const ModeKinematics& kin,
                             TransmissionRule rule = TransmissionRule::Continuity);
Coefficients tm_coefficients(const ModeKinematics& kin,
                             TransmissionRule rule = TransmissionRule::Continuity);

struct TripleMode {
  ModeKinematics kin;
  Polarization pol = Polarization::TE;
  NormalizationVariant variant = NormalizationVariant::Raw;
  Vec3 e_hat;
  cplx r_coeff;
  cplx t_coeff;
  double incoming_amplitude = 1.0;
};

/// Unit vector along k_i x e3, or (0, 1, 0) at normal incidence.
Vec3 polarization_vector(const Vec2& k_parallel);

TripleMode build_mode(const ModeKinematics& kin, Polarization pol,
                      NormalizationVariant variant = NormalizationVariant::Raw,
                      TransmissionRule rule = TransmissionRule::Continuity);

}  // namespace tmx

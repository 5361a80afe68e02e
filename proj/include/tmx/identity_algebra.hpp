#pragma once

// Closed-form identity expressions, generic over the scalar type so the same
// code runs in double precision (std::complex<double>) and exactly (QI).
// Every function returns an expression that vanishes when the identity holds.

#include <type_traits>
#include <vector>

#include "tmx/exact.hpp"
#include "tmx/medium.hpp"
#include "tmx/modes.hpp"

namespace tmx::algebra {

inline cplx conj_of(const cplx& z) { return std::conj(z); }
using tmx::conj_of;

template <class T>
T imag_unit() {
  if constexpr (std::is_same_v<T, QI>) {
    return QI(Rational(0), Rational(1));
  } else {
    return T(0.0, 1.0);
  }
}

template <class T>
struct Kin {
  Side side = Side::Left;
  T n_left2;
  T n_right2;
  T K_i;
  T K_t;

  T n_i2() const { return side == Side::Left ? n_left2 : n_right2; }
  T n_t2() const { return side == Side::Left ? n_right2 : n_left2; }
  T X_i() const { return K_i / n_i2(); }
  T X_t() const { return K_t / n_t2(); }
};

inline Kin<cplx> lift(const ModeKinematics& k) {
  const double nl = k.medium.n_left();
  const double nr = k.medium.n_right();
  return {k.side, cplx(nl * nl), cplx(nr * nr), cplx(k.K_i), k.K_t};
}

inline Kin<QI> lift(const ExactKinematics& k) {
  return {k.side, QI(k.n_left2), QI(k.n_right2), k.K_i, k.K_t};
}

template <class T>
FresnelPair<T> te_pair(const Kin<T>& k, TransmissionRule rule = TransmissionRule::Continuity) {
  FresnelPair<T> f = fresnel(k.K_i, k.K_t);
  if (rule == TransmissionRule::SwappedNumerator) f.t = T(2) * k.K_t / (k.K_i + k.K_t);
  return f;
}

template <class T>
FresnelPair<T> tm_pair(const Kin<T>& k) {
  return fresnel(k.X_i(), k.X_t());
}

/// 1 + |a_r|^2 + |a_t|^2 K_t/K_i - 2 (K_t real).
template <class T>
T te_bracket(const Kin<T>& k, TransmissionRule rule = TransmissionRule::Continuity) {
  const auto f = te_pair(k, rule);
  return T(1) + f.r * conj_of(f.r) + f.t * conj_of(f.t) * k.K_t / k.K_i - T(2);
}

/// 1 + b_r^2 + b_t^2 X_t/X_i - 2 (K_t real).
template <class T>
T tm_bracket(const Kin<T>& k) {
  const auto f = tm_pair(k);
  return T(1) + f.r * f.r + f.t * f.t * k.X_t() / k.X_i() - T(2);
}

/// |a_r|^2 - 1 and |b_r|^2 - 1 (K_t imaginary).
template <class T>
std::pair<T, T> unimodular(const Kin<T>& k) {
  const auto a = te_pair(k);
  const auto b = tm_pair(k);
  return {a.r * conj_of(a.r) - T(1), b.r * conj_of(b.r) - T(1)};
}

/// The two sides of the principal-part balance for a copropagating pair.
template <class T>
std::pair<T, T> principal_balance(const Kin<T>& k, const Kin<T>& kp) {
  const T lhs = k.n_i2() / ((kp.K_i - k.K_i) * (kp.K_i + k.K_i));
  const T rhs = k.n_t2() / ((kp.K_t - conj_of(k.K_t)) * (kp.K_t + conj_of(k.K_t)));
  return {lhs, rhs};
}

template <class T>
struct Component {
  T coeff;
  T K;
};

/// Scalar content of a mode for an overlap whose polarization vectors have
/// unit dot product: per half-space, the components and the weight.
template <class T>
struct ScalarMode {
  std::vector<Component<T>> neg;
  std::vector<Component<T>> pos;
  T w_neg;
  T w_pos;
};

enum class Family { TE_E, TM_B };

template <class T>
ScalarMode<T> scalar_mode(const Kin<T>& k, Family fam,
                          TransmissionRule rule = TransmissionRule::Continuity) {
  const FresnelPair<T> f = fam == Family::TE_E ? te_pair(k, rule) : tm_pair(k);
  std::vector<Component<T>> in{{T(1), k.K_i}, {f.r, T(0) - k.K_i}};
  std::vector<Component<T>> out{{f.t, k.K_t}};
  ScalarMode<T> m;
  if (k.side == Side::Left) {
    m.neg = in;
    m.pos = out;
  } else {
    m.neg = out;
    m.pos = in;
  }
  m.w_neg = fam == Family::TE_E ? k.n_left2 : T(1);
  m.w_pos = fam == Family::TE_E ? k.n_right2 : T(1);
  return m;
}

/// Sum of the eps -> 0 half-line integrals of conj(A) A' e^{i(K' - K*) z}
/// weighted per half-space: -i/rho on z < 0 and i/rho on z > 0. All rho must
/// be nonzero. `terms` receives the individual contributions.
template <class T>
T principal_sum(const ScalarMode<T>& m, const ScalarMode<T>& mp, std::vector<T>* terms = nullptr) {
  const T I = imag_unit<T>();
  T sum(0);
  auto half = [&](const std::vector<Component<T>>& a, const std::vector<Component<T>>& b, const T& w,
                  const T& sign) {
    for (const auto& ca : a) {
      for (const auto& cb : b) {
        const T rho = cb.K - conj_of(ca.K);
        const T term = w * conj_of(ca.coeff) * cb.coeff * sign * I / rho;
        if (terms) terms->push_back(term);
        sum = sum + term;
      }
    }
  };
  half(m.neg, mp.neg, m.w_neg, T(-1));
  half(m.pos, mp.pos, m.w_pos, T(1));
  return sum;
}

/// Closed form of the counter-propagating principal part, with (n_1, n_2)
/// read as (n_left, n_right). Returns {value, magnitude scale}.
template <class T>
std::pair<T, T> counter_closed_form(const Kin<T>& kl, const Kin<T>& kr) {
  const T I = imag_unit<T>();
  const T Kts = conj_of(kl.K_t);
  const T pre = T(4) * I * kl.K_i * kr.K_i * (kr.K_t + Kts) / ((kr.K_i + kr.K_t) * (kl.K_i + Kts));
  const T left = kl.n_left2 / (kr.K_t * kr.K_t - kl.K_i * kl.K_i);
  const T right = kl.n_right2 / (kr.K_i * kr.K_i - Kts * Kts);
  return {pre * (right - left), pre};
}

/// (1 + r*)(1 - r') - (K_t'/K_i') t' t*, for any reflection/transmission data
/// (a, b) = (K, a) for TE or (X, b) for TM.
template <class T>
T surface_function(const T& r, const T& t, const T& Kip, const T& Ktp, const T& rp, const T& tp) {
  return (T(1) + conj_of(r)) * (T(1) - rp) - (Ktp / Kip) * tp * conj_of(t);
}

template <class T>
T surface_identity(const Kin<T>& k, const Kin<T>& kp,
                   TransmissionRule rule = TransmissionRule::Continuity) {
  const auto f = te_pair(k, rule);
  const auto fp = te_pair(kp, rule);
  return surface_function(f.r, f.t, kp.K_i, kp.K_t, fp.r, fp.t);
}

template <class T>
T surface_identity_tm(const Kin<T>& k, const Kin<T>& kp) {
  const auto f = tm_pair(k);
  const auto fp = tm_pair(kp);
  return surface_function(f.r, f.t, kp.X_i(), kp.X_t(), fp.r, fp.t);
}

}  // namespace tmx::algebra

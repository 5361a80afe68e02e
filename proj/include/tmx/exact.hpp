#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "tmx/medium.hpp"

namespace tmx {

using Rational = boost::multiprecision::cpp_rational;

/// Gaussian rational re + i im, exact.
struct QI {
  Rational re;
  Rational im;

  QI() = default;
  QI(int v) : re(v) {}  // NOLINT(google-explicit-constructor)
  QI(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}  // NOLINT

  QI operator-() const { return {-re, -im}; }
  friend QI operator+(const QI& a, const QI& b) { return {a.re + b.re, a.im + b.im}; }
  friend QI operator-(const QI& a, const QI& b) { return {a.re - b.re, a.im - b.im}; }
  friend QI operator*(const QI& a, const QI& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend QI operator/(const QI& a, const QI& b);
  friend bool operator==(const QI& a, const QI& b) { return a.re == b.re && a.im == b.im; }

  bool is_zero() const { return re == 0 && im == 0; }
  Rational norm() const { return re * re + im * im; }
  std::string str() const;
};

inline QI conj_of(const QI& z) { return {z.re, -z.im}; }
inline bool is_exact_zero(const QI& z) { return z.is_zero(); }

/// A mode with rational n_i^2, n_t^2, |k_par|^2, omega^2 and Gaussian-rational
/// normal components. n_right is 1 throughout.
struct ExactKinematics {
  Side side = Side::Left;
  Rational n_left2;
  Rational n_right2{1};
  Rational kpar2;
  Rational omega2;
  QI K_i;
  QI K_t;

  Rational n_i2() const { return side == Side::Left ? n_left2 : n_right2; }
  Rational n_t2() const { return side == Side::Left ? n_right2 : n_left2; }
  /// Exact dispersion check for both components.
  bool consistent() const;
};

struct ExactPair {
  ExactKinematics a;
  ExactKinematics b;
};

/// Two Left modes sharing k_par and medium. Enumerated from small integer
/// normal components, so every quantity is rational; covers every
/// travelling/evanescent combination.
std::vector<ExactPair> exact_copropagating_pairs();

/// A Left mode and a Right mode sharing k_par and medium.
std::vector<ExactPair> exact_counterpropagating_pairs();

}  // namespace tmx

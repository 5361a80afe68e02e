#include "tmx/exact.hpp"

#include <sstream>

#include "tmx/error.hpp"

namespace tmx {

QI operator/(const QI& a, const QI& b) {
  const Rational d = b.norm();
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "exact division by zero");
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

std::string QI::str() const {
  std::ostringstream os;
  os << re << (im < 0 ? " - " : " + ") << (im < 0 ? Rational(-im) : im) << "i";
  return os.str();
}

bool ExactKinematics::consistent() const {
  const QI lhs_i = K_i * K_i + QI(kpar2);
  const QI lhs_t = K_t * K_t + QI(kpar2);
  return lhs_i == QI(n_i2() * omega2) && lhs_t == QI(n_t2() * omega2);
}

namespace {

// Normal components for the enumeration: 1..5 and i, 2i, ..., 5i.
std::vector<QI> candidate_components() {
  std::vector<QI> out;
  for (int v = 1; v <= 5; ++v) out.emplace_back(Rational(v));
  for (int v = 1; v <= 5; ++v) out.emplace_back(Rational(0), Rational(v));
  return out;
}

// Given the squared normal components in the left medium (y^2) and right
// medium (T) of two modes at one k_par, solve for n_left^2 and k_par^2.
bool solve_medium(const Rational& y1sq, const Rational& T1, const Rational& y2sq,
                  const Rational& T2, Rational& A, Rational& kp2) {
  if (T1 == T2 || y1sq == y2sq) return false;
  A = (y1sq - y2sq) / (T1 - T2);
  if (A <= 1) return false;
  kp2 = (y1sq - A * T1) / (A - 1);
  if (kp2 <= 0) return false;
  return T1 + kp2 > 0 && T2 + kp2 > 0;
}

ExactKinematics make_exact(Side side, const Rational& A, const Rational& kp2, const QI& K_i,
                           const QI& K_t) {
  ExactKinematics k;
  k.side = side;
  k.n_left2 = A;
  k.kpar2 = kp2;
  k.K_i = K_i;
  k.K_t = K_t;
  // omega^2 from the right-medium component, which has n = 1.
  const QI right = side == Side::Left ? K_t : K_i;
  k.omega2 = (right * right).re + kp2;
  if (!k.consistent()) throw Error(ErrorCode::kInvalidArgument, "inconsistent exact fixture");
  return k;
}

}  // namespace

std::vector<ExactPair> exact_copropagating_pairs() {
  std::vector<ExactPair> out;
  const auto comps = candidate_components();
  for (int y1 = 1; y1 <= 6; ++y1) {
    for (int y2 = y1 + 1; y2 <= 6; ++y2) {
      for (const QI& k1 : comps) {
        for (const QI& k2 : comps) {
          const Rational T1 = (k1 * k1).re;
          const Rational T2 = (k2 * k2).re;
          Rational A, kp2;
          if (!solve_medium(Rational(y1 * y1), T1, Rational(y2 * y2), T2, A, kp2)) continue;
          out.push_back({make_exact(Side::Left, A, kp2, QI(y1), k1),
                         make_exact(Side::Left, A, kp2, QI(y2), k2)});
        }
      }
    }
  }
  return out;
}

std::vector<ExactPair> exact_counterpropagating_pairs() {
  std::vector<ExactPair> out;
  const auto comps = candidate_components();
  for (int y1 = 1; y1 <= 6; ++y1) {
    for (int y2 = 1; y2 <= 6; ++y2) {
      for (const QI& k1 : comps) {
        for (int k2 = 1; k2 <= 5; ++k2) {
          const Rational T1 = (k1 * k1).re;
          const Rational T2(k2 * k2);
          Rational A, kp2;
          if (!solve_medium(Rational(y1 * y1), T1, Rational(y2 * y2), T2, A, kp2)) continue;
          out.push_back({make_exact(Side::Left, A, kp2, QI(y1), k1),
                         make_exact(Side::Right, A, kp2, QI(-k2), QI(-y2))});
        }
      }
    }
  }
  return out;
}

}  // namespace tmx

#include "tmx/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tmx/error.hpp"
#include "tmx/exact.hpp"
#include "tmx/identity_algebra.hpp"

namespace tmx {

using algebra::Family;
using algebra::lift;

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

bool same_kpar(const ModeKinematics& a, const ModeKinematics& b) {
  return a.k_parallel == b.k_parallel && a.medium == b.medium;
}

double relative_sum(const std::vector<cplx>& terms, cplx sum) {
  double scale = 0.0;
  for (const cplx& t : terms) scale += std::abs(t);
  return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

double principal_residual(const ModeKinematics& a, const ModeKinematics& b, Family fam) {
  std::vector<cplx> terms;
  const cplx sum = algebra::principal_sum(algebra::scalar_mode(lift(a), fam),
                                          algebra::scalar_mode(lift(b), fam), &terms);
  return relative_sum(terms, sum);
}

double transmitted_normal(double n_i2, double n_t2, double kpar2, double K_i, double sign) {
  return sign * std::sqrt(n_t2 / n_i2 * (K_i * K_i + kpar2) - kpar2);
}

}  // namespace

double check_te_bracket(const ModeKinematics& kin, TransmissionRule rule) {
  require(!kin.evanescent(), "bracket needs a travelling transmitted wave");
  return std::abs(algebra::te_bracket(lift(kin), rule));
}

double check_tm_bracket(const ModeKinematics& kin) {
  require(!kin.evanescent(), "bracket needs a travelling transmitted wave");
  return std::abs(algebra::tm_bracket(lift(kin)));
}

double check_evanescent_unimodular(const ModeKinematics& kin) {
  require(kin.evanescent(), "unimodularity needs an evanescent transmitted wave");
  const auto k = lift(kin);
  const double a = std::abs(algebra::te_pair(k).r);
  const double b = std::abs(algebra::tm_pair(k).r);
  return std::max(std::abs(a - 1.0), std::abs(b - 1.0));
}

double check_principal_cancellation(const ModeKinematics& kin, const ModeKinematics& kin_p) {
  require(same_kpar(kin, kin_p) && kin.side == kin_p.side, "needs a copropagating pair");
  require(kin.omega != kin_p.omega, "needs distinct frequencies");
  const auto [lhs, rhs] = algebra::principal_balance(lift(kin), lift(kin_p));
  const double balance = std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
  return std::max({balance, principal_residual(kin, kin_p, Family::TE_E),
                   principal_residual(kin, kin_p, Family::TM_B)});
}

double check_counter_cancellation(const ModeKinematics& kl, const ModeKinematics& kr) {
  require(same_kpar(kl, kr), "needs a shared k_par");
  require(kl.side == Side::Left && kr.side == Side::Right, "needs a Left mode and a Right mode");
  const auto [value, pre] = algebra::counter_closed_form(lift(kl), lift(kr));
  const auto a = lift(kl);
  const auto b = lift(kr);
  const double scale = std::abs(pre) * (std::abs(a.n_left2 / (b.K_t * b.K_t - a.K_i * a.K_i)) +
                                        std::abs(a.n_right2 / (b.K_i * b.K_i - std::conj(a.K_t) *
                                                                                   std::conj(a.K_t))));
  return std::max({std::abs(value) / scale, principal_residual(kl, kr, Family::TE_E),
                   principal_residual(kl, kr, Family::TM_B)});
}

double delta_jacobian(const ModeKinematics& kin, JacobianForm form) {
  require(!kin.evanescent() && kin.K_t != 0.0, "Jacobian needs a real nonzero K_t");
  if (form == JacobianForm::TE) {
    return (kin.n_i * kin.n_i) / (kin.n_t * kin.n_t) * std::abs(kin.K_t.real()) / std::abs(kin.K_i);
  }
  return kin.X_t.real() / kin.X_i;
}

double check_delta_jacobian(const ModeKinematics& kin, JacobianForm form,
                            const FiniteDifferenceParams& fd) {
  const double closed = delta_jacobian(kin, form);
  const double ni2 = kin.n_i * kin.n_i;
  const double nt2 = kin.n_t * kin.n_t;
  const double kp2 = kin.k_parallel.norm2();
  const double sign = kin.side == Side::Left ? 1.0 : -1.0;
  auto central = [&](double h) {
    return (transmitted_normal(ni2, nt2, kp2, kin.K_i + h, sign) -
            transmitted_normal(ni2, nt2, kp2, kin.K_i - h, sign)) /
           (2.0 * h);
  };
  // Richardson table on h, h/2, h/4, ...
  const double h = fd.h * std::abs(kin.K_i);
  std::vector<double> row;
  for (int j = 0; j <= fd.richardson_levels; ++j) row.push_back(central(h / std::pow(2.0, j)));
  for (int level = 1; level <= fd.richardson_levels; ++level) {
    const double f = std::pow(4.0, level);
    for (std::size_t j = 0; j + level < row.size(); ++j) {
      row[j] = (f * row[j + 1] - row[j]) / (f - 1.0);
    }
  }
  const double fd_factor = 1.0 / std::abs(row[0]);
  return std::abs(fd_factor - closed) / closed;
}

double check_surface_identity(const ModeKinematics& kin, const ModeKinematics& kin_p,
                              TransmissionRule rule) {
  require(same_kpar(kin, kin_p) && kin.side == kin_p.side, "needs a copropagating pair");
  return std::abs(algebra::surface_identity(lift(kin), lift(kin_p), rule));
}

double check_tm_te_substitution(const ModeKinematics& kin, const ModeKinematics& kin_p) {
  require(same_kpar(kin, kin_p) && kin.side == kin_p.side, "needs a copropagating pair");
  return std::max(std::abs(algebra::surface_identity(lift(kin), lift(kin_p))),
                  std::abs(algebra::surface_identity_tm(lift(kin), lift(kin_p))));
}

// ---------------------------------------------------------------------------

double KinematicsSampler::uniform(double a, double b) {
  const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

HalfSpaceMedium KinematicsSampler::medium(double n_min) { return HalfSpaceMedium(uniform(n_min, 3.0)); }

Vec2 KinematicsSampler::direction(double kappa) {
  const double phi = uniform(0.0, 2.0 * kPi);
  return {kappa * std::cos(phi), kappa * std::sin(phi)};
}

bool KinematicsSampler::try_omega(const HalfSpaceMedium& m, double kappa, Regime regime, Side side,
                                  double& omega) {
  const double n_i = side == Side::Left ? m.n_left() : m.n_right();
  const double n_t = side == Side::Left ? m.n_right() : m.n_left();
  double lo = kappa / (0.98 * n_i);
  double hi = 5.0;
  if (regime == Regime::Travelling) lo = kappa / (0.98 * std::min(n_i, n_t));
  if (regime == Regime::Evanescent) hi = std::min(hi, kappa / (1.02 * n_t));
  lo = std::max(lo, 0.2);
  if (!(lo < hi)) return false;
  omega = uniform(lo, hi);
  return true;
}

ModeKinematics KinematicsSampler::single(Regime regime, Side side) {
  for (;;) {
    const HalfSpaceMedium m = medium(regime == Regime::Evanescent ? 1.1 : 1.0);
    const double omega = uniform(0.2, 5.0);
    const double n_i = side == Side::Left ? m.n_left() : m.n_right();
    const double n_t = side == Side::Left ? m.n_right() : m.n_left();
    double lo = 0.0;
    double hi = 0.98 * n_i * omega;
    if (regime == Regime::Travelling) hi = 0.98 * std::min(n_i, n_t) * omega;
    if (regime == Regime::Evanescent) lo = 1.02 * n_t * omega;
    if (!(lo < hi)) continue;
    return make_kinematics(m, omega, direction(uniform(lo, hi)), side);
  }
}

std::pair<ModeKinematics, ModeKinematics> KinematicsSampler::copropagating(Regime first,
                                                                           Regime second,
                                                                           Side side) {
  for (;;) {
    const ModeKinematics a = single(first, side);
    double omega = 0.0;
    if (!try_omega(a.medium, a.k_parallel.norm(), second, side, omega)) continue;
    if (std::abs(omega - a.omega) < 1e-3 * a.omega) continue;
    return {a, make_kinematics(a.medium, omega, a.k_parallel, side)};
  }
}

std::pair<ModeKinematics, ModeKinematics> KinematicsSampler::counterpropagating(Regime left) {
  for (;;) {
    const ModeKinematics a = single(left, Side::Left);
    double omega = 0.0;
    if (!try_omega(a.medium, a.k_parallel.norm(), Regime::Travelling, Side::Right, omega)) continue;
    return {a, make_kinematics(a.medium, omega, a.k_parallel, Side::Right)};
  }
}

// ---------------------------------------------------------------------------

namespace {

using Regime = KinematicsSampler::Regime;

struct ExactData {
  std::vector<ExactPair> co;
  std::vector<ExactPair> counter;
  std::vector<ExactKinematics> singles;
};

const ExactData& exact_data() {
  static const ExactData data = [] {
    ExactData d;
    d.co = exact_copropagating_pairs();
    d.counter = exact_counterpropagating_pairs();
    for (const auto* list : {&d.co, &d.counter}) {
      for (const ExactPair& p : *list) {
        d.singles.push_back(p.a);
        d.singles.push_back(p.b);
      }
    }
    return d;
  }();
  return data;
}

bool travelling(const ExactKinematics& k) { return k.K_t.im == 0; }

struct ExactTally {
  std::size_t points = 0;
  bool all_zero = true;
  void add(bool zero) {
    ++points;
    all_zero = all_zero && zero;
  }
};

void finish(IdentityReport& r, const ExactTally& t) {
  r.exact_points = t.points;
  r.exact_verified = t.all_zero && t.points >= 10;
}

const Regime kCombos[4][2] = {{Regime::Travelling, Regime::Travelling},
                              {Regime::Travelling, Regime::Evanescent},
                              {Regime::Evanescent, Regime::Travelling},
                              {Regime::Evanescent, Regime::Evanescent}};

template <class F>
IdentityReport sweep(const std::string& name, std::size_t n, double tol, F&& residual_of_index) {
  IdentityReport r;
  r.name = name;
  r.samples = n;
  r.tolerance = tol;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = residual_of_index(i);
    if (!(res <= r.max_abs_residual)) r.max_abs_residual = std::isnan(res) ? INFINITY : res;
  }
  return r;
}

}  // namespace

std::vector<IdentityReport> run_identity_suite(const IdentitySuiteConfig& cfg) {
  if (cfg.samples == 0) throw Error(ErrorCode::kInvalidArgument, "samples must be positive");
  const ExactData& ex = exact_data();
  const std::size_t n = cfg.samples;
  std::vector<IdentityReport> out;
  // Each identity gets its own stream so adding one does not perturb the rest.
  auto stream = [&](std::uint64_t k) { return KinematicsSampler(cfg.seed * 1000003ULL + k); };

  {
    auto s = stream(1);
    auto r = sweep("te_bracket", n, cfg.tolerance, [&](std::size_t i) {
      return check_te_bracket(s.single(Regime::Travelling, i % 4 == 3 ? Side::Right : Side::Left),
                              cfg.rule);
    });
    ExactTally t;
    for (const auto& k : ex.singles) {
      if (travelling(k)) t.add(is_exact_zero(algebra::te_bracket(lift(k), cfg.rule)));
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(2);
    auto r = sweep("tm_bracket", n, cfg.tolerance, [&](std::size_t i) {
      return check_tm_bracket(s.single(Regime::Travelling, i % 4 == 3 ? Side::Right : Side::Left));
    });
    ExactTally t;
    for (const auto& k : ex.singles) {
      if (travelling(k)) t.add(is_exact_zero(algebra::tm_bracket(lift(k))));
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(3);
    auto r = sweep("evanescent_unimodular", n, cfg.tolerance, [&](std::size_t) {
      return check_evanescent_unimodular(s.single(Regime::Evanescent));
    });
    ExactTally t;
    for (const auto& k : ex.singles) {
      if (travelling(k)) continue;
      const auto [a, b] = algebra::unimodular(lift(k));
      t.add(is_exact_zero(a) && is_exact_zero(b));
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(4);
    auto r = sweep("principal_cancellation", n, cfg.tolerance, [&](std::size_t i) {
      const auto [p, q] = i % 5 == 4 ? s.copropagating(Regime::Travelling, Regime::Travelling, Side::Right)
                                     : s.copropagating(kCombos[i % 5][0], kCombos[i % 5][1]);
      return check_principal_cancellation(p, q);
    });
    ExactTally t;
    for (const auto& pr : ex.co) {
      const auto a = lift(pr.a);
      const auto b = lift(pr.b);
      const auto [lhs, rhs] = algebra::principal_balance(a, b);
      const QI te = algebra::principal_sum(algebra::scalar_mode(a, Family::TE_E),
                                           algebra::scalar_mode(b, Family::TE_E));
      const QI tm = algebra::principal_sum(algebra::scalar_mode(a, Family::TM_B),
                                           algebra::scalar_mode(b, Family::TM_B));
      t.add(lhs == rhs && is_exact_zero(te) && is_exact_zero(tm));
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(5);
    auto r = sweep("counter_cancellation", n, cfg.tolerance, [&](std::size_t) {
      const auto [l, rr] = s.counterpropagating();
      return check_counter_cancellation(l, rr);
    });
    ExactTally t;
    for (const auto& pr : ex.counter) {
      const auto a = lift(pr.a);
      const auto b = lift(pr.b);
      const QI closed = algebra::counter_closed_form(a, b).first;
      const QI te = algebra::principal_sum(algebra::scalar_mode(a, Family::TE_E),
                                           algebra::scalar_mode(b, Family::TE_E));
      const QI tm = algebra::principal_sum(algebra::scalar_mode(a, Family::TM_B),
                                           algebra::scalar_mode(b, Family::TM_B));
      t.add(is_exact_zero(closed) && is_exact_zero(te) && is_exact_zero(tm));
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(6);
    auto r = sweep("delta_jacobian", n, cfg.jacobian_tolerance, [&](std::size_t i) {
      const auto k = s.single(Regime::Travelling, i % 4 == 3 ? Side::Right : Side::Left);
      return std::max(check_delta_jacobian(k, JacobianForm::TE, cfg.fd),
                      check_delta_jacobian(k, JacobianForm::TM, cfg.fd));
    });
    // Exact: the implicit derivative dK_t/dK_i = (n_t^2/n_i^2) K_i/K_t of the
    // dispersion relations inverts to both closed forms.
    ExactTally t;
    for (const auto& k : ex.singles) {
      if (!travelling(k)) continue;
      const auto a = lift(k);
      const QI slope = a.n_t2() / a.n_i2() * a.K_i / a.K_t;
      const QI te = a.n_i2() / a.n_t2() * a.K_t / a.K_i;
      const QI tm = a.X_t() / a.X_i();
      t.add(k.consistent() && QI(1) / slope == te && te == tm);
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(7);
    auto r = sweep("surface_identity", n, cfg.tolerance, [&](std::size_t i) {
      const auto [p, q] = s.copropagating(kCombos[i % 4][0], kCombos[i % 4][1]);
      return check_surface_identity(p, q, cfg.rule);
    });
    ExactTally t;
    for (const auto& pr : ex.co) {
      t.add(is_exact_zero(algebra::surface_identity(lift(pr.a), lift(pr.b), cfg.rule)));
      t.add(is_exact_zero(algebra::surface_identity(lift(pr.a), lift(pr.a), cfg.rule)));
    }
    finish(r, t);
    out.push_back(r);
  }
  {
    auto s = stream(8);
    auto r = sweep("tm_te_substitution", n, cfg.tolerance, [&](std::size_t i) {
      const auto [p, q] = s.copropagating(kCombos[i % 4][0], kCombos[i % 4][1]);
      return check_tm_te_substitution(p, q);
    });
    ExactTally t;
    for (const auto& pr : ex.co) {
      t.add(is_exact_zero(algebra::surface_identity(lift(pr.a), lift(pr.b))) &&
            is_exact_zero(algebra::surface_identity_tm(lift(pr.a), lift(pr.b))));
    }
    finish(r, t);
    out.push_back(r);
  }
  return out;
}

}  // namespace tmx

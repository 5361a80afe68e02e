#include "tmx/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <string>

#include "tmx/error.hpp"
#include "tmx/numerics.hpp"

namespace tmx {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Term {
  cplx coeff;
  cplx rho;
  HalfLine axis = HalfLine::NegativeAxis;
  double magnitude = 0.0;  // |A||A'| w, before dividing by |rho|
  bool delta = false;
  double jacobian = 1.0;  // |dK'/dK_i'| of the second-slot component
};

HalfLine axis_of(HalfSpace h) {
  return h == HalfSpace::Negative ? HalfLine::NegativeAxis : HalfLine::PositiveAxis;
}

ParallelDelta parallel_of(const TripleMode& m, const TripleMode& mp, OverlapForm form) {
  ParallelDelta pd;
  pd.argument = form == OverlapForm::Conjugate ? mp.kin.k_parallel - m.kin.k_parallel
                                               : mp.kin.k_parallel + m.kin.k_parallel;
  pd.on_support = pd.argument.x == 0.0 && pd.argument.y == 0.0;
  return pd;
}

void require_same_medium(const TripleMode& m, const TripleMode& mp) {
  if (!(m.kin.medium == mp.kin.medium)) {
    throw Error(ErrorCode::kInvalidArgument, "modes belong to different media");
  }
}

bool is_delta_rho(cplx rho, cplx Ka, cplx Kb) {
  return Ka.imag() == 0.0 && Kb.imag() == 0.0 &&
         std::abs(rho) <= 1e-12 * (1.0 + std::abs(Ka) + std::abs(Kb));
}

double transmitted_jacobian(const ModeKinematics& k) {
  return (k.n_t * k.n_t) / (k.n_i * k.n_i) * std::abs(k.K_i / k.K_t.real());
}

template <class Contract>
std::vector<Term> build_terms(const TripleMode& m, const TripleMode& mp, OverlapForm form,
                              Contract&& contract) {
  std::vector<Term> terms;
  for (HalfSpace h : {HalfSpace::Negative, HalfSpace::Positive}) {
    const double n = m.kin.medium.index_of(h);
    const bool b_transmitted = h != incoming_half(mp.kin.side);
    const auto wa = plane_waves(m, h);
    const auto wb = plane_waves(mp, h);
    for (const PlaneWave& a0 : wa) {
      PlaneWave a = a0;
      if (form == OverlapForm::Conjugate) {
        a.E = a.E.conj();
        a.B = a.B.conj();
      }
      for (const PlaneWave& b : wb) {
        Term t;
        t.rho = form == OverlapForm::Conjugate ? b.k.z - std::conj(a0.k.z) : a0.k.z + b.k.z;
        t.axis = axis_of(h);
        const auto [coeff, magnitude] = contract(a, b, n);
        t.coeff = coeff;
        t.magnitude = magnitude;
        t.delta = is_delta_rho(t.rho, a0.k.z, b.k.z);
        if (t.delta && b_transmitted) t.jacobian = transmitted_jacobian(mp.kin);
        terms.push_back(t);
      }
    }
  }
  return terms;
}

std::vector<Term> overlap_terms(const TripleMode& m, const TripleMode& mp, OverlapForm form,
                                OverlapWeight weight) {
  const double sign = form == OverlapForm::Conjugate ? -1.0 : 1.0;
  return build_terms(m, mp, form, [&](const PlaneWave& a, const PlaneWave& b, double n) {
    const double n2 = n * n;
    switch (weight) {
      case OverlapWeight::N2_EE:
        return std::pair{n2 * dot(a.E, b.E), n2 * a.E.norm() * b.E.norm()};
      case OverlapWeight::BB:
        return std::pair{dot(a.B, b.B), a.B.norm() * b.B.norm()};
      case OverlapWeight::Mixed:
        break;
    }
    return std::pair{n2 * dot(a.E, b.E) + sign * dot(a.B, b.B),
                     n2 * a.E.norm() * b.E.norm() + a.B.norm() * b.B.norm()};
  });
}

cplx regular_sum(const std::vector<Term>& terms, double eps) {
  std::vector<cplx> parts;
  parts.reserve(terms.size());
  for (const Term& t : terms) {
    if (!t.delta) parts.push_back(t.coeff * damped_half_line(t.rho, t.axis, eps));
  }
  return pairwise_sum(parts);
}

cplx full_sum(const std::vector<Term>& terms, double eps) {
  std::vector<cplx> parts;
  parts.reserve(terms.size());
  for (const Term& t : terms) parts.push_back(t.coeff * damped_half_line(t.rho, t.axis, eps));
  return pairwise_sum(parts);
}

void fill_table(OverlapResult& r, const std::vector<Term>& terms, const RegularizationParams& p) {
  std::vector<cplx> values;
  for (double eps : p.epsilons) {
    values.push_back(regular_sum(terms, eps));
    r.damped_values.push_back({eps, values.back()});
  }
  r.principal_value = extrapolate_to_zero(p.epsilons, values, p.extrapolation_order);
  for (const Term& t : terms) {
    if (!t.delta) r.norm_scale += t.magnitude / std::abs(t.rho);
  }
  double largest = 0.0;
  for (const cplx& v : values) largest = std::max(largest, std::abs(v));
  if (largest > 1e-14 * r.norm_scale) r.epsilon_exponent = log_log_slope(p.epsilons, values);
}

void fill_deltas(OverlapResult& r, const std::vector<Term>& terms, const TripleMode& mp) {
  cplx total = 0.0;
  double magnitude = 0.0;
  for (const Term& t : terms) {
    if (!t.delta) continue;
    const cplx w = kPi * t.coeff / t.jacobian;
    total += w;
    magnitude += std::abs(w);
  }
  if (magnitude > 0.0 && std::abs(total) > 1e-12 * magnitude) {
    r.delta_weights.push_back({mp.kin.K_i, total});
  }
}

void require_pol(const TripleMode& m, Polarization p) {
  if (m.pol != p) {
    throw Error(ErrorCode::kPolarizationMismatch,
                std::string("expected ") + to_string(p) + " mode, got " + to_string(m.pol));
  }
}

}  // namespace

void RegularizationParams::validate() const {
  if (epsilons.empty()) throw Error(ErrorCode::kInvalidArgument, "no damping values");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || (i > 0 && !(epsilons[i] < epsilons[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "damping values must be positive and decreasing");
    }
  }
  if (extrapolation_order < 0) throw Error(ErrorCode::kInvalidArgument, "negative order");
  if (!(smear_sigma > 0.0) || !(quad_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smear width and tolerance must be positive");
  }
}

const char* to_string(OverlapForm f) { return f == OverlapForm::Conjugate ? "conjugate" : "plain"; }

const char* to_string(OverlapWeight w) {
  switch (w) {
    case OverlapWeight::N2_EE: return "n2EE";
    case OverlapWeight::BB: return "BB";
    case OverlapWeight::Mixed: return "mixed";
  }
  return "?";
}

cplx damped_half_line(cplx rho, HalfLine axis, double eps) {
  if (axis == HalfLine::NegativeAxis) {
    if (!(rho.imag() < eps)) {
      throw Error(ErrorCode::kDivergentIntegral, "growing integrand on the negative half-line");
    }
    return -kI / (rho - kI * eps);
  }
  if (!(rho.imag() > -eps)) {
    throw Error(ErrorCode::kDivergentIntegral, "growing integrand on the positive half-line");
  }
  return kI / (rho + kI * eps);
}

OverlapResult overlap(const TripleMode& m, const TripleMode& mp, OverlapForm form,
                      OverlapWeight weight, const RegularizationParams& params) {
  params.validate();
  require_same_medium(m, mp);
  OverlapResult r;
  r.parallel_delta = parallel_of(m, mp, form);
  if (!r.parallel_delta.on_support) return r;
  const auto terms = overlap_terms(m, mp, form, weight);
  fill_table(r, terms, params);
  fill_deltas(r, terms, mp);
  return r;
}

OverlapResult overlap_te_electric(const TripleMode& m, const TripleMode& mp,
                                  const RegularizationParams& params) {
  require_pol(m, Polarization::TE);
  require_pol(mp, Polarization::TE);
  return overlap(m, mp, OverlapForm::Conjugate, OverlapWeight::N2_EE, params);
}

OverlapResult overlap_tm_magnetic(const TripleMode& m, const TripleMode& mp,
                                  const RegularizationParams& params) {
  require_pol(m, Polarization::TM);
  require_pol(mp, Polarization::TM);
  return overlap(m, mp, OverlapForm::Conjugate, OverlapWeight::BB, params);
}

OverlapResult overlap_cross(const TripleMode& te, const TripleMode& tm, CrossField which) {
  require_pol(te, Polarization::TE);
  require_pol(tm, Polarization::TM);
  require_same_medium(te, tm);
  OverlapResult r;
  r.parallel_delta = parallel_of(te, tm, OverlapForm::Conjugate);
  if (!r.parallel_delta.on_support) return r;
  for (HalfSpace h : {HalfSpace::Negative, HalfSpace::Positive}) {
    for (const PlaneWave& a : plane_waves(te, h)) {
      for (const PlaneWave& b : plane_waves(tm, h)) {
        const CVec3& fa = which == CrossField::Electric ? a.E : a.B;
        const CVec3& fb = which == CrossField::Electric ? b.E : b.B;
        const double scale = fa.norm() * fb.norm();
        if (scale == 0.0) continue;
        r.pointwise_residual = std::max(r.pointwise_residual, std::abs(dot(fa.conj(), fb)) / scale);
      }
    }
  }
  return r;
}

double smeared_delta_weight(const TripleMode& mode, const RegularizationParams& params,
                            DeltaFamily family) {
  params.validate();
  const bool te = family == DeltaFamily::TE_E;
  require_pol(mode, te ? Polarization::TE : Polarization::TM);
  const OverlapWeight weight = te ? OverlapWeight::N2_EE : OverlapWeight::BB;
  const ModeKinematics& kin = mode.kin;
  const double K = kin.K_i;
  const double sigma = params.smear_sigma * std::abs(K);

  std::vector<double> eps;
  for (double e : params.epsilons) {
    if (e < sigma / 10.0) eps.push_back(e);
  }
  if (eps.empty()) throw Error(ErrorCode::kInvalidArgument, "no damping value below sigma/10");

  auto member = [&](double Kp) {
    return build_mode(kinematics_from_normal(kin.medium, kin.k_parallel, Kp, kin.side), mode.pol,
                      mode.variant);
  };
  std::vector<cplx> values;
  for (double e : eps) {
    auto integrand = [&](double Kp) {
      const auto terms = overlap_terms(mode, member(Kp), OverlapForm::Conjugate, weight);
      const double g = (Kp - K) / sigma;
      return full_sum(terms, e).real() * std::exp(-0.5 * g * g);
    };
    const double lo = integrate_adaptive(integrand, K - 8.0 * sigma, K, params.quad_tol,
                                         params.quad_max_intervals);
    const double hi = integrate_adaptive(integrand, K, K + 8.0 * sigma, params.quad_tol,
                                         params.quad_max_intervals);
    values.emplace_back(lo + hi);
  }
  const int order = std::min<int>(params.extrapolation_order, static_cast<int>(eps.size()) - 1);
  return extrapolate_to_zero(eps, values, order).real();
}

MixedTheoremResult mixed_theorem_integral(const TripleMode& m, const TripleMode& mp, MixedForm form,
                                          const RegularizationParams& params) {
  params.validate();
  require_same_medium(m, mp);
  const OverlapForm of =
      form == MixedForm::ConjugateMinus ? OverlapForm::Conjugate : OverlapForm::Plain;
  MixedTheoremResult r;
  if (!parallel_of(m, mp, of).on_support) return r;
  const double omega = m.kin.omega;
  const auto terms = build_terms(m, mp, of, [](const PlaneWave& a, const PlaneWave& b, double) {
    return std::pair{cross(a.E, b.B).z, a.E.norm() * b.B.norm()};
  });
  std::vector<cplx> values;
  for (double eps : params.epsilons) {
    std::vector<cplx> parts;
    for (const Term& t : terms) {
      if (t.delta) continue;  // i rho D(rho) -> 0 at rho = 0
      parts.push_back(t.coeff * kI * t.rho * damped_half_line(t.rho, t.axis, eps));
    }
    values.push_back(pairwise_sum(parts) / omega);
    r.damped_values.push_back({eps, values.back()});
  }
  r.value = extrapolate_to_zero(params.epsilons, values, params.extrapolation_order);
  for (const Term& t : terms) r.scale += t.magnitude / omega;
  return r;
}

cplx analytic_packet_overlap(const PacketSpectrum& p, const PacketSpectrum& pp,
                             OverlapWeight weight) {
  if (!(p.medium == pp.medium) || p.collapsed_y != pp.collapsed_y) {
    throw Error(ErrorCode::kInvalidArgument, "packets must share medium and geometry");
  }
  std::map<std::tuple<double, double, double, int>, std::vector<std::size_t>> index;
  for (std::size_t l = 0; l < pp.samples.size(); ++l) {
    const SpectrumSample& s = pp.samples[l];
    index[{s.k.x, s.k.y, s.k.z, static_cast<int>(s.side)}].push_back(l);
  }
  std::vector<cplx> parts;
  for (const SpectrumSample& a : p.samples) {
    const auto it = index.find({a.k.x, a.k.y, a.k.z, static_cast<int>(a.side)});
    if (it == index.end()) continue;
    const TripleMode ma = sample_mode(p, a);
    for (std::size_t l : it->second) {
      const SpectrumSample& b = pp.samples[l];
      if (a.pol != b.pol) continue;  // cross-polarized pairs vanish identically
      const OverlapResult r = overlap(ma, sample_mode(pp, b), OverlapForm::Conjugate, weight);
      cplx W = 0.0;
      for (const DeltaWeight& d : r.delta_weights) W += d.weight;
      const double e = amplitude_factor(a.k);
      parts.push_back(std::sqrt(a.w * b.w) * std::conj(e * a.u) * (e * b.u) * W);
    }
  }
  const double axes = p.collapsed_y ? 1.0 : 2.0;
  return std::pow(2.0 * kPi, axes) * pairwise_sum(parts);
}

cplx box_quadrature_oracle(const PacketSpectrum& p, const PacketSpectrum& pp, OverlapWeight weight,
                           const Box& box) {
  const PacketWeight pw = weight == OverlapWeight::N2_EE ? PacketWeight::N2_EE
                          : weight == OverlapWeight::BB  ? PacketWeight::BB
                                                         : PacketWeight::Mixed;
  return box_integral(p, pp, pw, box);
}

}  // namespace tmx

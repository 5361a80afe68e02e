#include "tmx/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tmx/error.hpp"
#include "tmx/fields.hpp"
#include "tmx/numerics.hpp"
#include "tmx/parallel.hpp"

namespace tmx {

namespace {

constexpr cplx kI{0.0, 1.0};

double incidence_index(const HalfSpaceMedium& m, Side s) {
  return s == Side::Left ? m.n_left() : m.n_right();
}

double frequency_of(const HalfSpaceMedium& m, const SpectrumSample& s) {
  return s.k.norm() / incidence_index(m, s.side);
}

struct Prepared {
  double kx = 0.0;
  double ky = 0.0;
  cplx c;  // E(k) w u e^{-i omega t}
  std::vector<PlaneWave> waves[2];
};

std::vector<Prepared> prepare(const PacketSpectrum& spec, double t) {
  std::vector<Prepared> out;
  out.reserve(spec.samples.size());
  for (const SpectrumSample& s : spec.samples) {
    const TripleMode m = sample_mode(spec, s);
    Prepared p;
    p.kx = s.k.x;
    p.ky = s.k.y;
    p.c = amplitude_factor(s.k) * s.w * s.u * std::exp(-kI * m.kin.omega * t);
    p.waves[0] = plane_waves(m, HalfSpace::Negative);
    p.waves[1] = plane_waves(m, HalfSpace::Positive);
    out.push_back(std::move(p));
  }
  return out;
}

int half_index(double z) { return half_space_of({0.0, 0.0, z}) == HalfSpace::Negative ? 0 : 1; }

// Fields of all samples at fixed z, factored by distinct (k_x, k_y).
class SeparableSynthesis {
 public:
  SeparableSynthesis(const std::vector<Prepared>& samples, const std::vector<double>& xs,
                     const std::vector<double>& ys)
      : samples_(samples), nx_(xs.size()), ny_(ys.size()) {
    std::map<double, int> ax, by;
    for (const Prepared& p : samples) {
      ax.emplace(p.kx, 0);
      by.emplace(p.ky, 0);
    }
    int i = 0;
    for (auto& [k, idx] : ax) {
      idx = i++;
      kx_.push_back(k);
    }
    i = 0;
    for (auto& [k, idx] : by) {
      idx = i++;
      ky_.push_back(k);
    }
    for (const Prepared& p : samples) {
      group_a_.push_back(ax[p.kx]);
      group_b_.push_back(by[p.ky]);
    }
    ex_.resize(kx_.size() * nx_);
    for (std::size_t a = 0; a < kx_.size(); ++a) {
      for (std::size_t ix = 0; ix < nx_; ++ix) ex_[a * nx_ + ix] = std::exp(kI * (kx_[a] * xs[ix]));
    }
    ey_.resize(ky_.size() * ny_);
    for (std::size_t b = 0; b < ky_.size(); ++b) {
      for (std::size_t iy = 0; iy < ny_; ++iy) ey_[b * ny_ + iy] = std::exp(kI * (ky_[b] * ys[iy]));
    }
  }

  /// E and B on the (x, y) grid at height z, index ix * ny + iy.
  void slab(double z, std::vector<AnalyticFields>& out) const {
    const std::size_t na = kx_.size();
    const std::size_t nb = ky_.size();
    const int h = half_index(z);
    std::vector<AnalyticFields> G(na * nb);
    for (std::size_t j = 0; j < samples_.size(); ++j) {
      AnalyticFields f;
      for (const PlaneWave& w : samples_[j].waves[h]) {
        const cplx ph = std::exp(kI * (w.k.z * z));
        f.E += w.E * ph;
        f.B += w.B * ph;
      }
      AnalyticFields& g = G[group_a_[j] * nb + group_b_[j]];
      g.E += f.E * samples_[j].c;
      g.B += f.B * samples_[j].c;
    }
    std::vector<AnalyticFields> H(na * ny_);
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const AnalyticFields& g = G[a * nb + b];
        for (std::size_t iy = 0; iy < ny_; ++iy) {
          const cplx ph = ey_[b * ny_ + iy];
          H[a * ny_ + iy].E += g.E * ph;
          H[a * ny_ + iy].B += g.B * ph;
        }
      }
    }
    out.assign(nx_ * ny_, AnalyticFields{});
    for (std::size_t ix = 0; ix < nx_; ++ix) {
      for (std::size_t a = 0; a < na; ++a) {
        const cplx ph = ex_[a * nx_ + ix];
        for (std::size_t iy = 0; iy < ny_; ++iy) {
          out[ix * ny_ + iy].E += H[a * ny_ + iy].E * ph;
          out[ix * ny_ + iy].B += H[a * ny_ + iy].B * ph;
        }
      }
    }
  }

 private:
  const std::vector<Prepared>& samples_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> kx_;
  std::vector<double> ky_;
  std::vector<int> group_a_;
  std::vector<int> group_b_;
  std::vector<cplx> ex_;
  std::vector<cplx> ey_;
};

struct BoxGrid {
  AxisQuadrature x, y, z;
};

BoxGrid make_grid(const std::vector<const PacketSpectrum*>& specs, const Box& box) {
  double lambda = INFINITY;
  for (const PacketSpectrum* s : specs) lambda = std::min(lambda, shortest_wavelength(*s));
  if (!std::isfinite(lambda)) throw Error(ErrorCode::kInvalidArgument, "empty spectrum");
  BoxGrid g;
  g.x = box_axis(box.half_extent, lambda, box.points_per_wavelength);
  g.z = g.x;
  if (specs.front()->collapsed_y) {
    g.y.nodes = {0.0};
    g.y.weights = {1.0};
  } else {
    g.y = g.x;
  }
  return g;
}

// sum over the box of weight * f(n, fields...) with deterministic reduction.
template <class T, class F>
T integrate_box(const std::vector<const PacketSpectrum*>& specs, const std::vector<double>& times,
                const Box& box, F&& f) {
  const BoxGrid g = make_grid(specs, box);
  std::vector<std::vector<Prepared>> prepared;
  for (std::size_t i = 0; i < specs.size(); ++i) prepared.push_back(prepare(*specs[i], times[i]));
  std::vector<SeparableSynthesis> engines;
  for (const auto& p : prepared) engines.emplace_back(p, g.x.nodes, g.y.nodes);
  const HalfSpaceMedium& medium = specs.front()->medium;
  const std::size_t nx = g.x.nodes.size();
  const std::size_t ny = g.y.nodes.size();
  std::vector<T> partial(g.z.nodes.size());
  parallel_for(g.z.nodes.size(), [&](std::size_t iz) {
    const double z = g.z.nodes[iz];
    const double n = refractive_index_at(medium, {0.0, 0.0, z});
    std::vector<std::vector<AnalyticFields>> slabs(engines.size());
    for (std::size_t e = 0; e < engines.size(); ++e) engines[e].slab(z, slabs[e]);
    std::vector<T> row(nx * ny);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const std::size_t idx = ix * ny + iy;
        row[idx] = g.x.weights[ix] * g.y.weights[iy] * f(n, slabs, idx);
      }
    }
    partial[iz] = g.z.weights[iz] * pairwise_sum(std::span<const T>(row));
  });
  return pairwise_sum(std::span<const T>(partial));
}

Vec3 real_part_of_i_diff(const CVec3& s) {
  // i (S - S*) = -2 Im S
  return {-2.0 * s.x.imag(), -2.0 * s.y.imag(), -2.0 * s.z.imag()};
}

double norm2(const Vec3& v) { return v.x * v.x + v.y * v.y + v.z * v.z; }

}  // namespace

double amplitude_factor(const Vec3& k) {
  const double kn = k.norm();
  if (!(kn > 0.0)) throw Error(ErrorCode::kZeroWaveVector, "amplitude factor needs |k| > 0");
  return std::sqrt(kn / (2.0 * std::pow(2.0 * kPi, 3)));
}

TripleMode sample_mode(const PacketSpectrum& spec, const SpectrumSample& s) {
  const ModeKinematics kin = kinematics_from_normal(spec.medium, {s.k.x, s.k.y}, s.k.z, s.side);
  return build_mode(kin, s.pol, NormalizationVariant::Normalized);
}

void validate(const PacketSpectrum& spec, DomainLabeling labeling) {
  for (const SpectrumSample& s : spec.samples) {
    if (!(s.w > 0.0) || !std::isfinite(s.w)) {
      throw Error(ErrorCode::kInvalidArgument, "quadrature weights must be positive");
    }
    if (s.k.z == 0.0) throw Error(ErrorCode::kGrazingIncidence, "sample with K = 0");
    if (spec.collapsed_y && s.k.y != spec.samples.front().k.y) {
      throw Error(ErrorCode::kInvalidArgument, "collapsed spectrum with several k_y values");
    }
    const Side expected = labeling == DomainLabeling::ModeSide
                              ? (s.k.z > 0.0 ? Side::Left : Side::Right)
                              : (s.k.z < 0.0 ? Side::Left : Side::Right);
    if (s.side != expected) {
      throw Error(ErrorCode::kInconsistentSide, "sample label does not match its K domain");
    }
    // Raises InconsistentSide when the label contradicts the mode's sign of K_i.
    (void)kinematics_from_normal(spec.medium, {s.k.x, s.k.y}, s.k.z, s.side);
  }
}

AnalyticFields synthesize_analytic(const PacketSpectrum& spec, double t, const Vec3& x) {
  AnalyticFields out;
  const int h = half_index(x.z);
  for (const Prepared& p : prepare(spec, t)) {
    for (const PlaneWave& w : p.waves[h]) {
      const cplx ph = p.c * std::exp(kI * (w.k.x * x.x + w.k.y * x.y + w.k.z * x.z));
      out.E += w.E * ph;
      out.B += w.B * ph;
    }
  }
  return out;
}

RealFields synthesize_field(const PacketSpectrum& spec, double t, const Vec3& x) {
  const AnalyticFields s = synthesize_analytic(spec, t, x);
  return {real_part_of_i_diff(s.E), real_part_of_i_diff(s.B)};
}

AxisQuadrature box_axis(double half_extent, double lambda_min, double ppw) {
  if (!(ppw >= 8.0)) {
    throw Error(ErrorCode::kResolutionTooCoarse, "need at least 8 points per wavelength");
  }
  if (!(half_extent > 0.0)) throw Error(ErrorCode::kInvalidArgument, "box must be nonempty");
  const double target = 8.0 * lambda_min / ppw;
  const int cells = static_cast<int>(std::ceil(half_extent / target - 1e-12));
  const double width = half_extent / cells;
  const GaussRule& gl = gauss_legendre_8();
  AxisQuadrature q;
  for (int c = -cells; c < cells; ++c) {
    const double mid = (c + 0.5) * width;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      q.nodes.push_back(mid + 0.5 * width * gl.nodes[i]);
      q.weights.push_back(0.5 * width * gl.weights[i]);
    }
  }
  return q;
}

double shortest_wavelength(const PacketSpectrum& spec) {
  double kmax = 0.0;
  const double nmax = spec.medium.max_index();
  for (const SpectrumSample& s : spec.samples) kmax = std::max(kmax, nmax * frequency_of(spec.medium, s));
  return kmax > 0.0 ? 2.0 * kPi / kmax : INFINITY;
}

double tail_bound(const PacketSpectrum& spec, const Box& box, double t) {
  double total = 0.0, mx = 0.0, my = 0.0, mz = 0.0;
  double slope = 1.0;
  for (const SpectrumSample& s : spec.samples) {
    const double p = s.w * std::norm(s.u);
    total += p;
    mx += p * s.k.x;
    my += p * s.k.y;
    mz += p * s.k.z;
    const TripleMode m = sample_mode(spec, s);
    if (!m.kin.evanescent()) {
      slope = std::min(slope, std::abs(m.kin.transmitted_slope().real()));
    }
  }
  if (total == 0.0) return 0.0;
  mx /= total;
  my /= total;
  mz /= total;
  double vx = 0.0, vy = 0.0, vz = 0.0;
  for (const SpectrumSample& s : spec.samples) {
    const double p = s.w * std::norm(s.u) / total;
    vx += p * (s.k.x - mx) * (s.k.x - mx);
    vy += p * (s.k.y - my) * (s.k.y - my);
    vz += p * (s.k.z - mz) * (s.k.z - mz);
  }
  const double reach = std::max(0.0, box.half_extent - std::abs(t));
  auto axis = [&](double variance) { return std::erfc(std::sqrt(2.0 * variance) * reach); };
  double bound = axis(vx) + axis(vz * slope * slope);
  if (!spec.collapsed_y) bound += axis(vy);
  return bound;
}

double field_energy(const PacketSpectrum& spec, const Box& box, double t) {
  if (spec.samples.empty()) return 0.0;
  const double tail = tail_bound(spec, box, t);
  if (!(tail < 1e-3)) {
    throw Error(ErrorCode::kTailTooLarge,
                "packet tail outside the box bounded by " + std::to_string(tail));
  }
  const double h = integrate_box<double>(
      {&spec}, {t}, box, [](double n, const std::vector<std::vector<AnalyticFields>>& s, std::size_t i) {
        const Vec3 E = real_part_of_i_diff(s[0][i].E);
        const Vec3 B = real_part_of_i_diff(s[0][i].B);
        return 0.5 * (n * n * norm2(E) + norm2(B));
      });
  return spec.collapsed_y ? 2.0 * kPi * h : h;
}

double diagonal_energy(const PacketSpectrum& spec) {
  std::vector<double> terms;
  for (const SpectrumSample& s : spec.samples) terms.push_back(s.w * s.k.norm() * std::norm(s.u));
  return pairwise_sum(terms);
}

EnergyReport energy_report(const PacketSpectrum& spec, const Box& box, double t) {
  EnergyReport r;
  r.H_spatial = field_energy(spec, box, t);
  r.H_diagonal = diagonal_energy(spec);
  r.ratio = r.H_diagonal != 0.0 ? r.H_spatial / r.H_diagonal : 0.0;
  return r;
}

cplx box_integral(const PacketSpectrum& p, const PacketSpectrum& pp, PacketWeight weight,
                  const Box& box) {
  if (!(p.medium == pp.medium) || p.collapsed_y != pp.collapsed_y) {
    throw Error(ErrorCode::kInvalidArgument, "packets must share medium and geometry");
  }
  if (p.samples.empty() || pp.samples.empty()) return 0.0;
  return integrate_box<cplx>(
      {&p, &pp}, {0.0, 0.0}, box,
      [weight](double n, const std::vector<std::vector<AnalyticFields>>& s, std::size_t i) {
        const AnalyticFields& a = s[0][i];
        const AnalyticFields& b = s[1][i];
        const cplx ee = n * n * dot(a.E.conj(), b.E);
        const cplx bb = dot(a.B.conj(), b.B);
        if (weight == PacketWeight::N2_EE) return ee;
        if (weight == PacketWeight::BB) return bb;
        return ee - bb;
      });
}

PacketSpectrum gaussian_packet(const GaussianPacketConfig& c) {
  if (!(c.relative_bandwidth > 0.0) || c.min_samples < 2 || !(c.box_half_extent > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad Gaussian packet configuration");
  }
  PacketSpectrum spec;
  spec.medium = HalfSpaceMedium(c.n_left);
  spec.collapsed_y = c.collapse_y;
  const double a = c.incidence_deg * kPi / 180.0;
  const double sign = c.side == Side::Left ? 1.0 : -1.0;
  const Vec3 k0{c.wavenumber * std::sin(a), 0.0, sign * c.wavenumber * std::cos(a)};
  spec.bandwidth = {k0, c.relative_bandwidth};
  const double sigma = c.relative_bandwidth * c.wavenumber;
  const double span = 2.0 * c.cutoff * sigma;
  const double dk_max = 2.0 * kPi / (4.0 * c.box_half_extent);
  int n = std::max(c.min_samples, static_cast<int>(std::ceil(span / dk_max)) + 1);
  if (n % 2 == 0) ++n;
  const double dq = span / (n - 1);
  std::vector<double> q;
  for (int i = 0; i < n; ++i) q.push_back(-c.cutoff * sigma + i * dq);
  const std::vector<double> qy = c.collapse_y ? std::vector<double>{0.0} : q;
  const double w = c.collapse_y ? dq * dq : dq * dq * dq;
  for (double qx : q) {
    for (double qyv : qy) {
      for (double qz : q) {
        SpectrumSample s;
        s.k = {k0.x + qx, k0.y + qyv, k0.z + qz};
        s.side = c.side;
        s.pol = c.pol;
        s.u = c.amplitude * std::exp(-(qx * qx + qyv * qyv + qz * qz) / (4.0 * sigma * sigma));
        s.w = w;
        spec.samples.push_back(s);
      }
    }
  }
  validate(spec);
  return spec;
}

PacketSpectrum superpose(const PacketSpectrum& a, const PacketSpectrum& b) {
  if (!(a.medium == b.medium) || a.collapsed_y != b.collapsed_y) {
    throw Error(ErrorCode::kInvalidArgument, "spectra must share medium and geometry");
  }
  PacketSpectrum out = a;
  out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  return out;
}

void to_json(nlohmann::json& j, const PacketSpectrum& spec) {
  j = nlohmann::json::object();
  j["schema"] = 1;
  j["medium"] = {{"n_left", spec.medium.n_left()},
                 {"n_right", spec.medium.n_right()},
                 {"generalized", spec.medium.generalized()}};
  j["collapsed_y"] = spec.collapsed_y;
  j["bandwidth"] = {{"carrier", {spec.bandwidth.carrier.x, spec.bandwidth.carrier.y, spec.bandwidth.carrier.z}},
                    {"relative", spec.bandwidth.relative}};
  nlohmann::json samples = nlohmann::json::array();
  for (const SpectrumSample& s : spec.samples) {
    samples.push_back({{"k", {s.k.x, s.k.y, s.k.z}},
                       {"side", to_string(s.side)},
                       {"s", static_cast<int>(s.pol)},
                       {"u", {s.u.real(), s.u.imag()}},
                       {"w", s.w}});
  }
  j["samples"] = samples;
}

void from_json(const nlohmann::json& j, PacketSpectrum& spec) {
  try {
    const auto& m = j.at("medium");
    spec.medium = HalfSpaceMedium(m.at("n_left").get<double>(), m.value("n_right", 1.0),
                                  m.value("generalized", false));
    spec.collapsed_y = j.value("collapsed_y", false);
    if (j.contains("bandwidth")) {
      const auto& c = j["bandwidth"].at("carrier");
      spec.bandwidth.carrier = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
      spec.bandwidth.relative = j["bandwidth"].value("relative", 0.0);
    }
    spec.samples.clear();
    for (const auto& s : j.at("samples")) {
      SpectrumSample out;
      const auto& k = s.at("k");
      out.k = {k.at(0).get<double>(), k.at(1).get<double>(), k.at(2).get<double>()};
      const std::string side = s.at("side").get<std::string>();
      if (side != "L" && side != "R") throw Error(ErrorCode::kInvalidArgument, "side must be L or R");
      out.side = side == "L" ? Side::Left : Side::Right;
      const int pol = s.at("s").get<int>();
      if (pol != 1 && pol != 2) throw Error(ErrorCode::kInvalidArgument, "s must be 1 or 2");
      out.pol = static_cast<Polarization>(pol);
      out.u = {s.at("u").at(0).get<double>(), s.at("u").at(1).get<double>()};
      out.w = s.at("w").get<double>();
      spec.samples.push_back(out);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("spectrum JSON: ") + e.what());
  }
}

}  // namespace tmx

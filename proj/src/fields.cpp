#include "tmx/fields.hpp"

#include <algorithm>

#include "tmx/error.hpp"
#include "tmx/parallel.hpp"

namespace tmx {

namespace {

constexpr cplx kI{0.0, 1.0};

PlaneWave component(const TripleMode& m, cplx K, cplx coeff, double n_h) {
  const ModeKinematics& kin = m.kin;
  PlaneWave pw;
  pw.k = CVec3(kin.k_parallel.x, kin.k_parallel.y, K);
  const CVec3 a = CVec3(m.e_hat) * (m.incoming_amplitude * coeff);
  if (m.pol == Polarization::TE) {
    pw.E = a;
    pw.B = cross(pw.k, a) * (1.0 / kin.omega);
  } else {
    pw.B = a;
    pw.E = cross(pw.k, a) * (-1.0 / (kin.omega * n_h * n_h));
  }
  return pw;
}

CVec3 superpose(const std::vector<PlaneWave>& waves, const Vec3& x, bool electric) {
  CVec3 sum;
  for (const PlaneWave& w : waves) {
    const cplx phase = std::exp(kI * (w.k.x * x.x + w.k.y * x.y + w.k.z * x.z));
    sum += (electric ? w.E : w.B) * phase;
  }
  return sum;
}

}  // namespace

std::vector<PlaneWave> plane_waves(const TripleMode& m, HalfSpace half) {
  const ModeKinematics& kin = m.kin;
  if (half == incoming_half(kin.side)) {
    return {component(m, kin.K_i, 1.0, kin.n_i), component(m, -kin.K_i, m.r_coeff, kin.n_i)};
  }
  return {component(m, kin.K_t, m.t_coeff, kin.n_t)};
}

CVec3 eval_electric_in(const TripleMode& m, HalfSpace half, const Vec3& x) {
  return superpose(plane_waves(m, half), x, true);
}

CVec3 eval_magnetic_in(const TripleMode& m, HalfSpace half, const Vec3& x) {
  return superpose(plane_waves(m, half), x, false);
}

CVec3 eval_electric(const TripleMode& m, const Vec3& x) {
  return eval_electric_in(m, half_space_of(x), x);
}

CVec3 eval_magnetic(const TripleMode& m, const Vec3& x) {
  return eval_magnetic_in(m, half_space_of(x), x);
}

double ContinuityResidual::max() const {
  return std::max({d_E_tan, d_B_tan, d_D_norm, d_B_norm});
}

std::vector<Vec3> continuity_probes(double omega) {
  const double lambda = 2.0 * kPi / omega;
  std::vector<Vec3> probes{{0.0, 0.0, 0.0}};
  for (int j = 0; j < 8; ++j) {
    const double angle = 2.0 * kPi * j / 8.0;
    const double radius = lambda * (j + 1) / 8.0;
    probes.push_back({radius * std::cos(angle), radius * std::sin(angle), 0.0});
  }
  return probes;
}

ContinuityResidual boundary_continuity_residual(const TripleMode& m) {
  const double nl = m.kin.medium.n_left();
  const double nr = m.kin.medium.n_right();
  ContinuityResidual res;
  for (const Vec3& p : continuity_probes(m.kin.omega)) {
    const CVec3 El = eval_electric_in(m, HalfSpace::Negative, p);
    const CVec3 Er = eval_electric_in(m, HalfSpace::Positive, p);
    const CVec3 Bl = eval_magnetic_in(m, HalfSpace::Negative, p);
    const CVec3 Br = eval_magnetic_in(m, HalfSpace::Positive, p);
    const CVec3 dE = El - Er;
    const CVec3 dB = Bl - Br;
    res.d_E_tan = std::max(res.d_E_tan, std::sqrt(std::norm(dE.x) + std::norm(dE.y)));
    res.d_B_tan = std::max(res.d_B_tan, std::sqrt(std::norm(dB.x) + std::norm(dB.y)));
    res.d_D_norm = std::max(res.d_D_norm, std::abs(nl * nl * El.z - nr * nr * Er.z));
    res.d_B_norm = std::max(res.d_B_norm, std::abs(dB.z));
  }
  return res;
}

double AxisSpec::at(int i) const {
  if (count == 1) return min;
  return min + (max - min) * i / (count - 1);
}

std::size_t GridSpec::size() const {
  if (x.count < 1 || y.count < 1 || z.count < 1) return 0;
  return static_cast<std::size_t>(x.count) * y.count * z.count;
}

std::vector<FieldSample> sample_grid(const TripleMode& m, const GridSpec& g) {
  for (const AxisSpec* a : {&g.x, &g.y, &g.z}) {
    if (a->count < 1) throw Error(ErrorCode::kEmptyGrid, "every axis needs at least one point");
    if (!std::isfinite(a->min) || !std::isfinite(a->max)) {
      throw Error(ErrorCode::kInvalidArgument, "grid extents must be finite");
    }
  }
  std::vector<FieldSample> out(g.size());
  parallel_for(out.size(), [&](std::size_t idx) {
    const int iz = static_cast<int>(idx % g.z.count);
    const int iy = static_cast<int>((idx / g.z.count) % g.y.count);
    const int ix = static_cast<int>(idx / (static_cast<std::size_t>(g.z.count) * g.y.count));
    const Vec3 x{g.x.at(ix), g.y.at(iy), g.z.at(iz)};
    out[idx] = {x, eval_electric(m, x), eval_magnetic(m, x)};
  });
  return out;
}

}  // namespace tmx

#pragma once

#include <vector>

#include "tmx/modes.hpp"

namespace tmx {

/// One plane-wave component A e^{i k.x} of a mode, with its electric and
/// magnetic amplitudes. k = (k_par, K) may have complex K.
struct PlaneWave {
  CVec3 k;
  CVec3 E;
  CVec3 B;
};

/// Components living in `half`: incoming and reflected in the incidence
/// half-space, the transmitted one in the other.
std::vector<PlaneWave> plane_waves(const TripleMode& mode, HalfSpace half);

CVec3 eval_electric(const TripleMode& mode, const Vec3& x);
CVec3 eval_magnetic(const TripleMode& mode, const Vec3& x);

/// Both fields from the components of a chosen half-space, regardless of
/// where x lies. Used to probe the two one-sided limits at z = 0.
CVec3 eval_electric_in(const TripleMode& mode, HalfSpace half, const Vec3& x);
CVec3 eval_magnetic_in(const TripleMode& mode, HalfSpace half, const Vec3& x);

struct ContinuityResidual {
  double d_E_tan = 0.0;
  double d_B_tan = 0.0;
  double d_D_norm = 0.0;
  double d_B_norm = 0.0;

  double max() const;
};

/// In-plane probe points: the origin and 8 points on a spiral out to one
/// vacuum wavelength.
std::vector<Vec3> continuity_probes(double omega);

ContinuityResidual boundary_continuity_residual(const TripleMode& mode);

struct FieldSample {
  Vec3 x;
  CVec3 E;
  CVec3 B;
};

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double at(int i) const;
};

/// Samples are ordered with z fastest: index = (ix * ny + iy) * nz + iz.
struct GridSpec {
  AxisSpec x;
  AxisSpec y;
  AxisSpec z;

  std::size_t size() const;
};

std::vector<FieldSample> sample_grid(const TripleMode& mode, const GridSpec& grid);

}  // namespace tmx

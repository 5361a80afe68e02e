#pragma once

#include "json.hpp"
#include <vector>

#include "tmx/modes.hpp"

namespace tmx {

/// One quadrature node of the amplitude functions u_{L,s}(k), u_{R,s}(k).
/// k is the incoming wave vector of the mode (k_par, K_i) in the incidence
/// medium; the frequency is |k|/n_i.
struct SpectrumSample {
  Vec3 k;
  Side side = Side::Left;
  Polarization pol = Polarization::TE;
  cplx u;
  double w = 0.0;
};

struct Bandwidth {
  Vec3 carrier;
  double relative = 0.0;
};

/// Sampled packet spectrum. With collapsed_y the samples share one k_y and
/// the weights carry no dk_y factor; spatial integrals then run over x and z
/// only and the y direction is accounted for by its 2 pi delta normalization.
struct PacketSpectrum {
  HalfSpaceMedium medium{1.0};
  Bandwidth bandwidth;
  bool collapsed_y = false;
  std::vector<SpectrumSample> samples;
};

/// How the integration-domain labels of the expansion are read.
/// ModeSide: a sample's side is its mode's own side (K_i > 0 for Left).
/// Literal: samples with K < 0 carry the L label, which contradicts the mode
/// definitions; selecting it makes validation report InconsistentSide.
enum class DomainLabeling { ModeSide, Literal };

/// Throws InconsistentSide, GrazingIncidence or InvalidArgument.
void validate(const PacketSpectrum& spec, DomainLabeling labeling = DomainLabeling::ModeSide);

void to_json(nlohmann::json& j, const PacketSpectrum& spec);
void from_json(const nlohmann::json& j, PacketSpectrum& spec);

/// sqrt(|k| / (2 (2 pi)^3)) in natural units.
double amplitude_factor(const Vec3& k);

/// The normalized mode a sample refers to.
TripleMode sample_mode(const PacketSpectrum& spec, const SpectrumSample& s);

struct RealFields {
  Vec3 E;
  Vec3 B;
};

struct AnalyticFields {
  CVec3 E;
  CVec3 B;
};

/// S(x, t) = sum_j E(k_j) w_j u_j F_j(x) e^{-i omega_j t}; the physical field
/// is i (S - S*).
AnalyticFields synthesize_analytic(const PacketSpectrum& spec, double t, const Vec3& x);

RealFields synthesize_field(const PacketSpectrum& spec, double t, const Vec3& x);

/// Cubic integration box centred on the origin.
struct Box {
  double half_extent = 0.0;
  /// Quadrature nodes per shortest wavelength present (minimum 8).
  double points_per_wavelength = 8.0;
};

/// Composite 8-point Gauss-Legendre nodes covering [-h, h] with cell width
/// 8 * lambda_min / ppw; z = 0 is always a cell boundary.
struct AxisQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
AxisQuadrature box_axis(double half_extent, double lambda_min, double ppw);

/// Shortest wavelength over all components of all samples.
double shortest_wavelength(const PacketSpectrum& spec);

/// Sum over integrated axes of erfc(s (X - |t|)), with s from the second
/// moments of the spectrum: a bound on the energy fraction outside the box.
double tail_bound(const PacketSpectrum& spec, const Box& box, double t);

/// (1/2) int (n^2 E^2 + B^2) over the box at time t; scaled by 2 pi when the
/// spectrum is collapsed along y. Throws TailTooLarge if tail_bound >= 1e-3
/// and ResolutionTooCoarse if ppw < 8.
double field_energy(const PacketSpectrum& spec, const Box& box, double t = 0.0);

/// sum_j w_j |k_j| |u_j|^2, the classical value of (|k|/2)(u u* + u* u).
double diagonal_energy(const PacketSpectrum& spec);

struct EnergyReport {
  double H_spatial = 0.0;
  double H_diagonal = 0.0;
  double ratio = 0.0;
};

EnergyReport energy_report(const PacketSpectrum& spec, const Box& box, double t = 0.0);

/// Weighted integral of the analytic signals of two packets over the box at
/// t = 0: n^2 S_E* . S_E', S_B* . S_B', or their difference.
enum class PacketWeight { N2_EE, BB, Mixed };

cplx box_integral(const PacketSpectrum& p, const PacketSpectrum& pp, PacketWeight weight,
                  const Box& box);

/// Gaussian spectrum about the carrier k0 = |k| (sin a, 0, +-cos a) in the
/// incidence medium, truncated at +-cutoff standard deviations per axis.
struct GaussianPacketConfig {
  double n_left = 1.5;
  Side side = Side::Left;
  Polarization pol = Polarization::TE;
  double wavenumber = 2.0 * kPi;  // carrier wavelength 1
  double incidence_deg = 20.0;
  double relative_bandwidth = 0.02;
  double cutoff = 3.5;
  int min_samples = 15;
  bool collapse_y = true;
  /// Sample spacing is chosen so the periodic images of the packet sit at
  /// least four half-extents away.
  double box_half_extent = 25.0;
  cplx amplitude = 1.0;
};

PacketSpectrum gaussian_packet(const GaussianPacketConfig& config);

/// Concatenation of two spectra over the same medium.
PacketSpectrum superpose(const PacketSpectrum& a, const PacketSpectrum& b);

}  // namespace tmx

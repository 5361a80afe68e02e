#pragma once

#include <optional>
#include <vector>

#include "tmx/expansion.hpp"
#include "tmx/fields.hpp"
#include "tmx/modes.hpp"

namespace tmx {

struct RegularizationParams {
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5};
  int extrapolation_order = 2;
  /// Width of the Gaussian test function, as a fraction of |K_i|.
  double smear_sigma = 1e-2;
  double quad_tol = 1e-9;
  unsigned quad_max_intervals = 2000;

  /// Throws InvalidArgument unless epsilons are positive and strictly
  /// decreasing and the order is usable.
  void validate() const;
};

enum class HalfLine { NegativeAxis, PositiveAxis };

/// Closed form of the damped half-line integral of e^{i rho z}:
/// -i/(rho - i eps) on z < 0, i/(rho + i eps) on z > 0.
cplx damped_half_line(cplx rho, HalfLine axis, double eps);

/// Conjugate: integrand f* . g', support k_par' = k_par.
/// Plain: integrand f . g', support k_par' = -k_par.
enum class OverlapForm { Conjugate, Plain };

/// N2_EE: n^2 E.E'. BB: B.B'. Mixed: n^2 E.E' - B.B' (Conjugate) or
/// n^2 E.E' + B.B' (Plain).
enum class OverlapWeight { N2_EE, BB, Mixed };

const char* to_string(OverlapForm f);
const char* to_string(OverlapWeight w);

struct ParallelDelta {
  /// k_par' - k_par (Conjugate) or k_par' + k_par (Plain).
  Vec2 argument;
  bool on_support = false;
};

struct DeltaWeight {
  double location = 0.0;  // K_i' at which the delta sits
  cplx weight;            // coefficient of delta(K_i' - location)
};

struct DampedValue {
  double epsilon = 0.0;
  cplx value;
};

/// The z-integral I of a mode pair; the full overlap is
/// (2 pi)^2 delta^2(parallel_delta.argument) * I.
struct OverlapResult {
  ParallelDelta parallel_delta;
  cplx principal_value;
  std::vector<DeltaWeight> delta_weights;
  /// Regular part I(eps) of the damped integral, delta candidates removed.
  std::vector<DampedValue> damped_values;
  /// Sum of |A||A'| w/|rho| over regular terms; the magnitude the principal
  /// value would have without cancellation.
  double norm_scale = 0.0;
  /// Least-squares slope of log|I(eps)|; empty when the table is zero to
  /// rounding.
  std::optional<double> epsilon_exponent;
  /// overlap_cross only: largest pointwise |f* . g'| relative to |f||g'|.
  double pointwise_residual = 0.0;
};

OverlapResult overlap(const TripleMode& m, const TripleMode& mp, OverlapForm form,
                      OverlapWeight weight, const RegularizationParams& params = {});

/// n^2 E* . E' for two TE modes.
OverlapResult overlap_te_electric(const TripleMode& m, const TripleMode& mp,
                                  const RegularizationParams& params = {});

/// B* . B' for two TM modes.
OverlapResult overlap_tm_magnetic(const TripleMode& m, const TripleMode& mp,
                                  const RegularizationParams& params = {});

enum class CrossField { Electric, Magnetic };

/// One TE and one TM mode: the integrand vanishes pointwise on the support of
/// the parallel delta. Checks that, then returns the zero result.
OverlapResult overlap_cross(const TripleMode& te, const TripleMode& tm, CrossField which);

enum class DeltaFamily { TE_E, TM_B };

/// Integrates I(K_i'; eps) over the family of modes sharing k_par and side
/// against a Gaussian of width smear_sigma*|K_i| centred on K_i, extrapolates
/// eps -> 0 and divides by the Gaussian's peak value. Only eps below a tenth
/// of the width are used.
double smeared_delta_weight(const TripleMode& mode, const RegularizationParams& params,
                            DeltaFamily family);

enum class MixedForm { ConjugateMinus, PlainPlus };

struct MixedTheoremResult {
  cplx value;
  double scale = 0.0;
  std::vector<DampedValue> damped_values;
};

/// (1/omega) times the z-integral of d/dz of (E* x B')_z (ConjugateMinus,
/// at k_par' = k_par) or (E x B')_z (PlainPlus, at k_par' = -k_par). Pairs
/// off the parallel support return zero.
MixedTheoremResult mixed_theorem_integral(const TripleMode& m, const TripleMode& mp, MixedForm form,
                                          const RegularizationParams& params = {});

/// Overlap of two packets predicted from the mode orthogonality relations:
/// only samples with identical k and side meet on the delta support, so
/// (2 pi)^d sum_j w_j conj(c_j) c'_j W_j with c = E(k) u, W_j the delta
/// weight of the sample's mode with itself and d the number of integrated
/// parallel axes.
cplx analytic_packet_overlap(const PacketSpectrum& p, const PacketSpectrum& pp, OverlapWeight weight);

/// Direct quadrature over the box of the same weighted integral at t = 0.
/// Independent of every orthogonality relation; used as an oracle.
cplx box_quadrature_oracle(const PacketSpectrum& p, const PacketSpectrum& pp, OverlapWeight weight,
                           const Box& box);

}  // namespace tmx

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tmx/vec.hpp"

namespace tmx {

/// Pairwise (cascade) summation; the split points depend only on the length,
/// so results are reproducible bit for bit.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

/// Polynomial (Neville) extrapolation to x = 0 through the last `order + 1`
/// points of (xs, ys). With geometric xs this is Richardson extrapolation.
cplx extrapolate_to_zero(std::span<const double> xs, std::span<const cplx> ys, int order);

/// Least-squares slope of log|y| against log x.
double log_log_slope(std::span<const double> xs, std::span<const cplx> ys);

/// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre_8();

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the interval with the
/// largest error estimate is bisected until the summed estimate drops below
/// tol * max(1, |I|). Throws QuadratureFailure when that needs more than
/// `max_intervals` intervals.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          unsigned max_intervals = 2000);

}  // namespace tmx

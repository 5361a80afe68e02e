#include "tmx/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <string>

#include "tmx/error.hpp"

namespace tmx {

namespace {

template <class T>
T cascade(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return cascade(v.subspan(0, half)) + cascade(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return cascade(v); }
cplx pairwise_sum(std::span<const cplx> v) { return cascade(v); }

cplx extrapolate_to_zero(std::span<const double> xs, std::span<const cplx> ys, int order) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "extrapolation needs matching, nonempty tables");
  }
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(order) + 1, xs.size());
  const std::size_t off = xs.size() - m;
  std::vector<cplx> p(ys.begin() + off, ys.end());
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double xa = xs[off + i];
      const double xb = xs[off + i + level];
      p[i] = (xa * p[i + 1] - xb * p[i]) / (xa - xb);
    }
  }
  return p[0];
}

double log_log_slope(std::span<const double> xs, std::span<const cplx> ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::abs(ys[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const GaussRule& gauss_legendre_8() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 8>;
    GaussRule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = a.size(); i-- > 0;) {
      r.nodes.push_back(-a[i]);
      r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      r.nodes.push_back(a[i]);
      r.weights.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          unsigned max_intervals) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  using G = boost::math::quadrature::gauss<double, 7>;
  // Kronrod nodes are {0, x1, ..., x7}; the Gauss nodes are the even-indexed ones.
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  auto rule = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double f0 = f(c);
    double kron = wk[0] * f0;
    double gauss = wg[0] * f0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
      const double pair = f(c - h * xk[i]) + f(c + h * xk[i]);
      kron += wk[i] * pair;
      if (i % 2 == 0) gauss += wg[i / 2] * pair;
    }
    return Piece{lo, hi, h * kron, std::abs(h * (kron - gauss))};
  };
  std::priority_queue<Piece> pieces;
  pieces.push(rule(a, b));
  double value = pieces.top().value;
  double error = pieces.top().error;
  while (error > tol * std::max(1.0, std::abs(value))) {
    if (pieces.size() >= max_intervals) {
      throw Error(ErrorCode::kQuadratureFailure,
                  "error estimate " + std::to_string(error) + " above tolerance after " +
                      std::to_string(max_intervals) + " intervals");
    }
    const Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Piece left = rule(worst.a, mid);
    const Piece right = rule(mid, worst.b);
    pieces.push(left);
    pieces.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Re-sum from scratch so the result does not carry the running updates.
  std::vector<double> values;
  while (!pieces.empty()) {
    values.push_back(pieces.top().value);
    pieces.pop();
  }
  value = pairwise_sum(values);
  if (!std::isfinite(value)) throw Error(ErrorCode::kQuadratureFailure, "non-finite integral");
  return value;
}

}  // namespace tmx

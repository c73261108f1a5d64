#pragma once

#include <Eigen/QR>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "uvsamp/continuous.hpp"
#include "uvsamp/types.hpp"

namespace uvsamp {

/// Deterministic random source; every random object in the library flows
/// from an explicit seed through this wrapper, so outputs are reproducible
/// across platforms.
class Rng {
 public:
  explicit Rng(unsigned long long seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  long integer(long lo, long hi) {
    return lo + static_cast<long>(uniform() * double(hi - lo + 1));
  }

  Complex complex_uniform(double amplitude = 1.0) {
    const double re = uniform(-amplitude, amplitude);
    const double im = uniform(-amplitude, amplitude);
    return Complex(re, im);
  }

  CVec complex_vector(long n, double amplitude = 1.0) {
    CVec v(n);
    for (long i = 0; i < n; ++i) v(i) = complex_uniform(amplitude);
    return v;
  }

  CMat complex_matrix(long rows, long cols, double amplitude = 1.0) {
    CMat m(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) m(i, j) = complex_uniform(amplitude);
    return m;
  }

  /// Random unitary via QR with the diagonal phases of R fixed.
  CMat random_unitary(long n) {
    const CMat a = complex_matrix(n, n);
    Eigen::HouseholderQR<CMat> qr(a);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (long i = 0; i < n; ++i) {
      const Complex d = r(i, i);
      const double mag = std::abs(d);
      q.col(i) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    }
    return q;
  }

  /// Random trig polynomial with coefficient support [-degree, degree].
  FourierSymbol random_trig(long degree, double amplitude = 1.0) {
    SparseSeq c;
    for (long k = -degree; k <= degree; ++k) c.set(k, complex_uniform(amplitude));
    return FourierSymbol(std::move(c));
  }

 private:
  std::mt19937_64 engine_;
};

/// Unitary with W^N = I exactly in structure: conjugate of the diagonal of
/// N-th roots of unity by a random unitary. Any generator orbit closes after
/// N steps.
inline CMat random_period_unitary(long n, Rng& rng) {
  const CMat q = rng.random_unitary(n);
  CMat w = CMat::Zero(n, n);
  for (long j = 0; j < n; ++j) w(j, j) = std::exp(Complex(0.0, kTwoPi * double(j) / double(n)));
  return q * w * q.adjoint();
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;
      dp = double(n) * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return {std::move(nodes), std::move(weights)};
}

/// Cardinal B-spline of the given order (degree), supported on
/// [0, order + 1]; order 0 is the unit box.
inline double bspline_value(int order, double x) {
  if (x <= 0.0 || x >= double(order) + 1.0) return (order == 0 && x == 0.0) ? 1.0 : 0.0;
  if (order == 0) return 1.0;
  // Cox-de Boor on the integer knots, half-open boxes at level zero.
  std::vector<double> v(order + 1);
  for (int j = 0; j <= order; ++j) {
    const double t = x - double(j);
    v[j] = (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
  }
  for (int deg = 1; deg <= order; ++deg)
    for (int j = 0; j + deg <= order; ++j)
      v[j] = ((x - j) * v[j] + (double(j + deg + 1) - x) * v[j + 1]) / double(deg);
  return v[0];
}

/// Inner products R(k) = integral of B_{order1}(x - k) B_{order2}(x) dx over
/// the given shift range, by Gauss-Legendre quadrature per knot interval,
/// exact for the piecewise-polynomial integrand.
inline SparseSeq bspline_cross_covariance(int order1, int order2, IndexWindow shifts) {
  if (order1 < 0 || order2 < 0 || order1 > 10 || order2 > 10)
    throw ValidationError("bspline_cross_covariance: orders must be in [0, 10]");
  const int nodes_per_interval = (order1 + order2 + 1) / 2 + 1;
  const auto [nodes, weights] = gauss_legendre(nodes_per_interval);
  SparseSeq out;
  for (long k = shifts.lo; k <= shifts.hi; ++k) {
    // B_{order1}(x - k) lives on [k, k + order1 + 1]; B_{order2} on [0, order2 + 1].
    const double lo = std::max<double>(double(k), 0.0);
    const double hi = std::min<double>(double(k) + order1 + 1.0, double(order2) + 1.0);
    if (hi <= lo) continue;
    double acc = 0.0;
    for (long cell = static_cast<long>(std::floor(lo)); cell < static_cast<long>(std::ceil(hi));
         ++cell) {
      const double a = std::max(lo, double(cell));
      const double b = std::min(hi, double(cell) + 1.0);
      if (b <= a) continue;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = mid + half * nodes[i];
        acc += half * weights[i] * bspline_value(order1, x - double(k)) * bspline_value(order2, x);
      }
    }
    if (acc != 0.0) out.set(k, Complex(acc, 0.0));
  }
  return out;
}

/// Full-support variant: every shift with overlapping supports.
inline SparseSeq bspline_cross_covariance(int order1, int order2) {
  return bspline_cross_covariance(order1, order2, IndexWindow{-(order1 + 1), order2 + 1});
}

}  // namespace uvsamp

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uvsamp/linalg.hpp"
#include "uvsamp/types.hpp"

namespace uvsamp {

/// N-periodic complex sequence; any integer index reads values[p mod N].
class PeriodicSequence {
 public:
  PeriodicSequence() = default;
  explicit PeriodicSequence(CVec values) : values_(std::move(values)) {
    if (values_.size() < 1) throw ValidationError("PeriodicSequence: period must be >= 1");
    require_finite(values_, "PeriodicSequence");
  }

  static PeriodicSequence delta(long period, long at = 0) {
    CVec v = CVec::Zero(period);
    v(pmod(at, period)) = Complex(1.0, 0.0);
    return PeriodicSequence(std::move(v));
  }

  long period() const { return values_.size(); }
  Complex at(long p) const { return values_(pmod(p, period())); }
  const CVec& values() const { return values_; }

  /// Delay by q steps: out(p) = in(p - q).
  PeriodicSequence shifted(long q) const {
    const long n = period();
    CVec out(n);
    for (long p = 0; p < n; ++p) out(p) = at(p - q);
    return PeriodicSequence(std::move(out));
  }

 private:
  CVec values_;
};

/// A unitary operator W on C^d together with the period N of the scheme's
/// generator orbit (W^N b = b is validated at scheme assembly). The circular
/// shift acts as (Wx)(p) = x(p-1).
class FiniteUnitaryModel {
 public:
  enum class Kind { circular_shift, explicit_matrix };

  static FiniteUnitaryModel circular_shift(long n) {
    if (n < 1) throw ValidationError("circular_shift: dimension must be >= 1");
    FiniteUnitaryModel m;
    m.kind_ = Kind::circular_shift;
    m.dim_ = n;
    m.period_ = n;
    return m;
  }

  static FiniteUnitaryModel explicit_matrix(CMat w, long period) {
    if (w.rows() != w.cols() || w.size() == 0)
      throw ValidationError("explicit_matrix: matrix must be square and nonempty");
    require_finite(w, "explicit_matrix");
    if (period < 1) throw ValidationError("explicit_matrix: period must be >= 1");
    const double dev =
        (w.adjoint() * w - CMat::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
      throw ValidationError("explicit_matrix: not unitary, max |W*W - I| = " +
                            std::to_string(dev));
    FiniteUnitaryModel m;
    m.kind_ = Kind::explicit_matrix;
    m.dim_ = w.rows();
    m.period_ = period;
    m.matrix_ = std::move(w);
    return m;
  }

  Kind kind() const { return kind_; }
  long dim() const { return dim_; }
  long period() const { return period_; }
  const CMat& matrix() const { return matrix_; }

  /// W^k x for k >= 0.
  CVec apply_power(const CVec& x, long k) const {
    if (x.size() != dim_)
      throw DimensionMismatch("apply_power: vector of size " + std::to_string(x.size()) +
                              " in dimension " + std::to_string(dim_));
    if (kind_ == Kind::circular_shift) {
      CVec out(dim_);
      for (long p = 0; p < dim_; ++p) out(p) = x(pmod(p - k, dim_));
      return out;
    }
    CVec out = x;
    for (long i = 0; i < k; ++i) out = matrix_ * out;
    return out;
  }

 private:
  Kind kind_ = Kind::circular_shift;
  long dim_ = 0;
  long period_ = 0;
  CMat matrix_;
};

/// One finite factor: generator orbit {W^p b} of period N, sampling step
/// `step` dividing N, and the channel vectors the samples are taken against.
struct PeriodicScheme {
  FiniteUnitaryModel model;
  CVec generator;
  std::vector<CVec> systems;
  long step = 1;

  long period() const { return model.period(); }
  long ell() const { return period() / step; }
  long num_systems() const { return static_cast<long>(systems.size()); }
};

/// Columns are the orbit vectors v, Wv, ..., W^{count-1} v.
inline CMat orbit_matrix(const FiniteUnitaryModel& model, const CVec& v, long count) {
  CMat out(model.dim(), count);
  CVec w = v;
  for (long p = 0; p < count; ++p) {
    out.col(p) = w;
    if (p + 1 < count) w = model.apply_power(w, 1);
  }
  return out;
}

/// Validates divisibility, orbit closure and orbit independence.
inline PeriodicScheme make_periodic_scheme(FiniteUnitaryModel model, CVec generator,
                                           std::vector<CVec> systems, long step) {
  const long n = model.period();
  if (step < 1 || n % step != 0)
    throw ValidationError("periodic scheme: step " + std::to_string(step) +
                          " must divide the period " + std::to_string(n));
  if (generator.size() != model.dim())
    throw ValidationError("periodic scheme: generator has size " +
                          std::to_string(generator.size()) + ", model dimension is " +
                          std::to_string(model.dim()));
  require_finite(generator, "periodic scheme generator");
  if (systems.empty()) throw ValidationError("periodic scheme: needs at least one system");
  for (const auto& h : systems) {
    if (h.size() != model.dim())
      throw ValidationError("periodic scheme: system vector has size " +
                            std::to_string(h.size()) + ", model dimension is " +
                            std::to_string(model.dim()));
    require_finite(h, "periodic scheme system");
  }
  const CVec cycled = model.apply_power(generator, n);
  const double closure = (cycled - generator).cwiseAbs().maxCoeff();
  if (closure > 1e-10)
    throw ValidationError("periodic scheme: generator orbit does not close, |W^N b - b| = " +
                          std::to_string(closure));
  if (rank_of(orbit_matrix(model, generator, n)) != n)
    throw ValidationError("periodic scheme: generator orbit is linearly dependent");
  return PeriodicScheme{std::move(model), std::move(generator), std::move(systems), step};
}

/// Cross-covariance q -> <W^q v, h> for q = 0..N-1.
inline PeriodicSequence cross_covariance(const FiniteUnitaryModel& model, const CVec& v,
                                         const CVec& h) {
  if (v.size() != model.dim() || h.size() != model.dim())
    throw DimensionMismatch("cross_covariance: vectors must live in dimension " +
                            std::to_string(model.dim()));
  const long n = model.period();
  CVec out(n);
  CVec w = v;
  for (long q = 0; q < n; ++q) {
    out(q) = inner(w, h);
    if (q + 1 < n) w = model.apply_power(w, 1);
  }
  return PeriodicSequence(std::move(out));
}

/// Block matrix of channel cross-covariances, one ell x N block per system;
/// block row m holds R(N - step*m ..) with periodic indexing.
inline CMat covariance_matrix(const PeriodicScheme& scheme) {
  const long n = scheme.period();
  const long ell = scheme.ell();
  const long ns = scheme.num_systems();
  CMat out(ns * ell, n);
  for (long j = 0; j < ns; ++j) {
    const PeriodicSequence r = cross_covariance(scheme.model, scheme.generator, scheme.systems[j]);
    for (long m = 0; m < ell; ++m)
      for (long p = 0; p < n; ++p) out(j * ell + m, p) = r.at(n - scheme.step * m + p);
  }
  return out;
}

struct PeriodicFrameResult {
  bool is_frame = false;
  long rank = 0;
  SpectralExtremes bounds;
};

/// The analysis vectors span iff the covariance matrix has full rank N; the
/// optimal frame bounds are the spectral extremes of R*R.
inline PeriodicFrameResult frame_test(const PeriodicScheme& scheme) {
  const CMat r = covariance_matrix(scheme);
  PeriodicFrameResult out;
  out.rank = rank_of(r);
  out.is_frame = (out.rank == scheme.period());
  out.bounds = hermitian_extremes(r.adjoint() * r);
  return out;
}

/// Dual sequences indexed (system j', shift m) flattened as j'*ell + m.
/// Built from a left inverse H = R^+ + freeU (I - R R^+): the first `step`
/// rows S satisfy S R = (I_step, 0), and the dual matrix places S
/// block-circulantly so that row u + step*m' holds S(u, .) rotated by m'
/// within each system block. Columns then satisfy the dual expansion
/// x = sum <x, analysis_(j',m)> dual_(j',m) exactly when the frame test
/// passes. `enforce_frame = false` skips the frame test (diagnostic use).
inline std::vector<PeriodicSequence> dual_columns(const PeriodicScheme& scheme,
                                                  const std::optional<CMat>& freeU = std::nullopt,
                                                  bool enforce_frame = true) {
  const long n = scheme.period();
  const long ell = scheme.ell();
  const long ns = scheme.num_systems();
  const long rows = ns * ell;
  const CMat r = covariance_matrix(scheme);
  if (enforce_frame) {
    const long rank = rank_of(r);
    if (rank != n)
      throw NotAFrame("dual_columns: covariance matrix rank " + std::to_string(rank) +
                      " < " + std::to_string(n) + ", sampling systems do not span");
  }
  CMat h = pseudo_inverse(r);
  if (freeU) {
    require_finite(*freeU, "dual_columns(freeU)");
    if (freeU->rows() != n || freeU->cols() != rows)
      throw DimensionMismatch("dual_columns: freeU must be " + std::to_string(n) + "x" +
                              std::to_string(rows));
    h += (*freeU) * (CMat::Identity(rows, rows) - r * h);
  }
  const CMat s = h.topRows(scheme.step);
  CMat hs(n, rows);
  for (long u = 0; u < scheme.step; ++u)
    for (long mp = 0; mp < ell; ++mp)
      for (long j = 0; j < ns; ++j)
        for (long m = 0; m < ell; ++m)
          hs(u + scheme.step * mp, j * ell + m) = s(u, j * ell + pmod(m - mp, ell));
  std::vector<PeriodicSequence> out;
  out.reserve(rows);
  for (long c = 0; c < rows; ++c) out.emplace_back(CVec(hs.col(c)));
  return out;
}

/// Expand a coefficient sequence into the model space: sum_p coeffs(p) W^p b.
inline CVec synthesize(const PeriodicScheme& scheme, const PeriodicSequence& coeffs) {
  if (coeffs.period() != scheme.period())
    throw DimensionMismatch("synthesize: coefficient period " + std::to_string(coeffs.period()) +
                            " != scheme period " + std::to_string(scheme.period()));
  return orbit_matrix(scheme.model, scheme.generator, scheme.period()) * coeffs.values();
}

/// Samples <x, W^{step*m} h_{j'}> of x = sum_p coeffs(p) W^p b, as an
/// s' x ell matrix.
inline CMat sample_periodic(const PeriodicScheme& scheme, const PeriodicSequence& coeffs) {
  if (coeffs.period() != scheme.period())
    throw DimensionMismatch("sample_periodic: coefficient period " +
                            std::to_string(coeffs.period()) + " != scheme period " +
                            std::to_string(scheme.period()));
  const long n = scheme.period();
  const long ell = scheme.ell();
  const long ns = scheme.num_systems();
  CMat out(ns, ell);
  for (long j = 0; j < ns; ++j) {
    const PeriodicSequence r = cross_covariance(scheme.model, scheme.generator, scheme.systems[j]);
    for (long m = 0; m < ell; ++m) {
      Complex acc(0.0, 0.0);
      for (long p = 0; p < n; ++p) acc += coeffs.at(p) * r.at(p - scheme.step * m);
      out(j, m) = acc;
    }
  }
  return out;
}

/// Coefficients of sum_{j',m} samples(j',m) * (step*m shift of dual j').
inline PeriodicSequence reconstruct_periodic(const PeriodicScheme& scheme, const CMat& samples,
                                             const std::vector<PeriodicSequence>& duals) {
  const long ell = scheme.ell();
  const long ns = scheme.num_systems();
  if (samples.rows() != ns || samples.cols() != ell)
    throw ShapeMismatch("reconstruct_periodic: samples must be " + std::to_string(ns) + "x" +
                        std::to_string(ell) + ", got " + detail::shape_of(samples));
  if (static_cast<long>(duals.size()) != ns * ell)
    throw ShapeMismatch("reconstruct_periodic: expected " + std::to_string(ns * ell) +
                        " dual sequences, got " + std::to_string(duals.size()));
  CVec out = CVec::Zero(scheme.period());
  for (long j = 0; j < ns; ++j)
    for (long m = 0; m < ell; ++m) {
      const PeriodicSequence& d = duals[j * ell + m];
      if (d.period() != scheme.period())
        throw ShapeMismatch("reconstruct_periodic: dual period mismatch");
      for (long p = 0; p < scheme.period(); ++p) out(p) += samples(j, m) * d.at(p);
    }
  return PeriodicSequence(std::move(out));
}

/// Checks that expanding a rotated coefficient sequence equals applying W^q
/// to the expansion of the original one. q is reduced mod N.
inline bool shift_property_check(const PeriodicScheme& scheme, const PeriodicSequence& t0,
                                 long q) {
  const long qr = pmod(q, scheme.period());
  const CVec lhs = synthesize(scheme, t0.shifted(qr));
  const CVec rhs = scheme.model.apply_power(synthesize(scheme, t0), qr);
  return (lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10;
}

}  // namespace uvsamp

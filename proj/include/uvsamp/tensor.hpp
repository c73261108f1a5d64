#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uvsamp/continuous.hpp"
#include "uvsamp/linalg.hpp"
#include "uvsamp/periodic.hpp"
#include "uvsamp/types.hpp"

namespace uvsamp {

enum class TensorCase { infinite_finite, infinite_infinite, finite_finite };

inline std::string to_string(TensorCase c) {
  switch (c) {
    case TensorCase::infinite_finite: return "infinite-finite";
    case TensorCase::infinite_infinite: return "infinite-infinite";
    case TensorCase::finite_finite: return "finite-finite";
  }
  return "?";
}

/// Two factor schemes assembled into one sampling problem. Factor 1 carries
/// sampling period r, factor 2 carries rbar.
struct TensorScheme {
  TensorCase kind = TensorCase::finite_finite;
  std::optional<ContinuousScheme> cont1, cont2;
  std::optional<PeriodicScheme> per1, per2;

  long s() const { return cont1 ? cont1->num_systems() : per1->num_systems(); }
  long sprime() const { return cont2 ? cont2->num_systems() : per2->num_systems(); }
  long step1() const { return cont1 ? cont1->r : per1->step; }
  long step2() const { return cont2 ? cont2->r : per2->step; }
};

inline TensorScheme tensor_infinite_finite(ContinuousScheme f1, PeriodicScheme f2) {
  TensorScheme t;
  t.kind = TensorCase::infinite_finite;
  t.cont1 = std::move(f1);
  t.per2 = std::move(f2);
  return t;
}

inline TensorScheme tensor_infinite_infinite(ContinuousScheme f1, ContinuousScheme f2) {
  TensorScheme t;
  t.kind = TensorCase::infinite_infinite;
  t.cont1 = std::move(f1);
  t.cont2 = std::move(f2);
  return t;
}

inline TensorScheme tensor_finite_finite(PeriodicScheme f1, PeriodicScheme f2) {
  const long total = f1.num_systems() * f2.num_systems() * f1.ell() * f2.ell();
  const long dim = f1.period() * f2.period();
  if (total < dim)
    throw ValidationError("finite-finite scheme: " + std::to_string(total) +
                          " samples cannot span dimension " + std::to_string(dim));
  TensorScheme t;
  t.kind = TensorCase::finite_finite;
  t.per1 = std::move(f1);
  t.per2 = std::move(f2);
  return t;
}

/// Coefficients of x in the tensor basis, stored sparsely by (n, p) index
/// pairs. Finite axes expect indices in [0, period).
struct TensorCoefficients {
  std::map<std::pair<long, long>, Complex> entries;

  Complex at(long n, long p) const {
    auto it = entries.find({n, p});
    return it == entries.end() ? Complex(0.0, 0.0) : it->second;
  }
  void set(long n, long p, Complex v) { entries[{n, p}] = v; }
  void add(long n, long p, Complex v) { entries[{n, p}] += v; }
  bool empty() const { return entries.empty(); }

  static TensorCoefficients delta(long n, long p, Complex v = Complex(1.0, 0.0)) {
    TensorCoefficients x;
    x.set(n, p, v);
    return x;
  }
};

inline double max_diff(const TensorCoefficients& a, const TensorCoefficients& b) {
  double m = 0.0;
  for (const auto& [k, v] : a.entries) m = std::max(m, std::abs(v - b.at(k.first, k.second)));
  for (const auto& [k, v] : b.entries) m = std::max(m, std::abs(v - a.at(k.first, k.second)));
  return m;
}

/// Complete grid of samples over the declared index ranges.
struct SampleGrid {
  long s = 0, sprime = 0;
  IndexWindow nwin, mwin;
  std::vector<Complex> values;

  long cells() const { return nwin.length() * mwin.length(); }
  long index(long j, long jp, long n, long m) const {
    return (j * sprime + jp) * cells() + (n - nwin.lo) * mwin.length() + (m - mwin.lo);
  }
  Complex at(long j, long jp, long n, long m) const { return values[index(j, jp, n, m)]; }
  Complex& at(long j, long jp, long n, long m) { return values[index(j, jp, n, m)]; }

  static SampleGrid zeros(long s, long sprime, IndexWindow nwin, IndexWindow mwin) {
    SampleGrid g;
    g.s = s;
    g.sprime = sprime;
    g.nwin = nwin;
    g.mwin = mwin;
    g.values.assign(static_cast<std::size_t>(s * sprime * g.cells()), Complex(0.0, 0.0));
    return g;
  }
};

/// Reconstruction vectors of one factor: per-channel coefficient sequences in
/// the factor basis, plus the shift step and (for finite factors) the period.
struct FactorKit {
  std::vector<SparseSeq> seqs;
  long step = 1;
  std::optional<long> period;
  std::string provenance;  // free-term choice used
};

struct ReconstructionKit {
  FactorKit factor1, factor2;
};

namespace detail {

/// Uniform view of one factor's cross-covariance data for sampling.
struct FactorData {
  long step = 1;
  long channels = 0;
  std::optional<long> period;           // finite factor only
  std::vector<PeriodicSequence> cc_per;  // finite factor
  std::vector<SparseSeq> cc_inf;         // infinite factor

  Complex cc(long j, long q) const {
    return period ? cc_per[static_cast<std::size_t>(j)].at(q)
                  : cc_inf[static_cast<std::size_t>(j)].at(q);
  }

  std::optional<IndexWindow> cc_support() const {
    std::optional<IndexWindow> hull;
    for (const auto& seq : cc_inf) {
      const auto supp = seq.support();
      if (!supp) continue;
      hull = hull ? IndexWindow::hull(*hull, *supp) : *supp;
    }
    return hull;
  }
};

inline FactorData factor_data(const ContinuousScheme& scheme) {
  FactorData d;
  d.step = scheme.r;
  d.channels = scheme.num_systems();
  for (const auto& g : scheme.symbols) d.cc_inf.push_back(g.cross_covariance());
  return d;
}

inline FactorData factor_data(const PeriodicScheme& scheme) {
  FactorData d;
  d.step = scheme.step;
  d.channels = scheme.num_systems();
  d.period = scheme.period();
  for (const auto& h : scheme.systems)
    d.cc_per.push_back(cross_covariance(scheme.model, scheme.generator, h));
  return d;
}

inline FactorData factor_data(const TensorScheme& scheme, int which) {
  if (which == 1) return scheme.cont1 ? factor_data(*scheme.cont1) : factor_data(*scheme.per1);
  return scheme.cont2 ? factor_data(*scheme.cont2) : factor_data(*scheme.per2);
}

/// Axis support of the stored coefficients (axis 1 = first index).
inline std::optional<IndexWindow> axis_support(const TensorCoefficients& x, int axis) {
  std::optional<IndexWindow> w;
  for (const auto& [key, v] : x.entries) {
    const long idx = axis == 1 ? key.first : key.second;
    if (!w)
      w = IndexWindow{idx, idx};
    else
      w = IndexWindow{std::min(w->lo, idx), std::max(w->hi, idx)};
  }
  return w;
}

inline IndexWindow sample_axis_window(const FactorData& f,
                                      const std::optional<IndexWindow>& coeff_support) {
  if (f.period) return IndexWindow{0, *f.period / f.step - 1};
  return natural_sample_window(f.step, coeff_support, f.cc_support());
}

inline void check_finite_axis(const TensorCoefficients& x, const FactorData& f1,
                              const FactorData& f2) {
  for (const auto& [key, v] : x.entries) {
    if (f1.period && (key.first < 0 || key.first >= *f1.period))
      throw ShapeMismatch("tensor coefficients: axis-1 index " + std::to_string(key.first) +
                          " outside [0, " + std::to_string(*f1.period) + ")");
    if (f2.period && (key.second < 0 || key.second >= *f2.period))
      throw ShapeMismatch("tensor coefficients: axis-2 index " + std::to_string(key.second) +
                          " outside [0, " + std::to_string(*f2.period) + ")");
  }
}

}  // namespace detail

/// Generalized samples values(j, j', n, m) = sum over coefficient entries of
/// x(k, p) cc1_j(k - r n) cc2_j'(p - rbar m); the window on each infinite
/// axis is computed from support arithmetic so no nonzero sample is missed.
inline SampleGrid sample_tensor(const TensorScheme& scheme, const TensorCoefficients& x) {
  const detail::FactorData f1 = detail::factor_data(scheme, 1);
  const detail::FactorData f2 = detail::factor_data(scheme, 2);
  detail::check_finite_axis(x, f1, f2);
  const IndexWindow nwin = detail::sample_axis_window(f1, detail::axis_support(x, 1));
  const IndexWindow mwin = detail::sample_axis_window(f2, detail::axis_support(x, 2));
  SampleGrid grid = SampleGrid::zeros(f1.channels, f2.channels, nwin, mwin);
  for (long j = 0; j < f1.channels; ++j)
    for (long jp = 0; jp < f2.channels; ++jp)
      for (long n = nwin.lo; n <= nwin.hi; ++n)
        for (long m = mwin.lo; m <= mwin.hi; ++m) {
          Complex acc(0.0, 0.0);
          for (const auto& [key, v] : x.entries)
            acc += v * f1.cc(j, key.first - f1.step * n) * f2.cc(jp, key.second - f2.step * m);
          grid.at(j, jp, n, m) = acc;
        }
  return grid;
}

struct KitOptions {
  GridFreeTerm freeU1;    // continuous factor: 0, 1 or L matrices (r x s);
  GridFreeTerm freeU2;    // periodic factor: at most one N x (s'*ell) matrix
  long truncation1 = -1;  // K for a continuous factor 1 (-1 = grid size)
  long truncation2 = -1;
  bool force = false;  // skip frame checks (diagnostic use only)
};

namespace detail {

inline FactorKit design_factor_kit(const ContinuousScheme& scheme, const GridFreeTerm& freeU,
                                   long truncation, bool force, const std::string& label) {
  if (!force) {
    const FrameConstants fc = frame_constants(scheme);
    if (!(fc.alpha > 1e-10))
      throw FactorNotAFrame(label + ": lower frame constant alpha = " + std::to_string(fc.alpha) +
                            " is not strictly positive");
  }
  const DualSymbols duals = dual_symbols(scheme, freeU, truncation, /*enforce_frame=*/!force);
  FactorKit kit;
  kit.seqs = reconstruction_coeffs(scheme, duals);
  kit.step = scheme.r;
  kit.provenance = freeU.empty() ? "freeU=zero"
                                 : (freeU.size() == 1 ? "freeU=constant" : "freeU=per-grid-point");
  return kit;
}

inline FactorKit design_factor_kit(const PeriodicScheme& scheme, const GridFreeTerm& freeU,
                                   bool force, const std::string& label) {
  if (freeU.size() > 1)
    throw DimensionMismatch(label + ": a finite factor takes a single free-term matrix");
  if (!force) {
    const PeriodicFrameResult ft = frame_test(scheme);
    if (!ft.is_frame)
      throw FactorNotAFrame(label + ": covariance matrix rank " + std::to_string(ft.rank) +
                            " < " + std::to_string(scheme.period()) +
                            ", sampling systems do not span");
  }
  std::optional<CMat> u;
  if (!freeU.empty()) u = freeU.front();
  const std::vector<PeriodicSequence> duals = dual_columns(scheme, u, /*enforce_frame=*/false);
  FactorKit kit;
  kit.step = scheme.step;
  kit.period = scheme.period();
  for (long j = 0; j < scheme.num_systems(); ++j) {
    const PeriodicSequence& d = duals[static_cast<std::size_t>(j * scheme.ell())];  // shift 0
    SparseSeq seq;
    for (long p = 0; p < scheme.period(); ++p) seq.set(p, d.at(p));
    kit.seqs.push_back(std::move(seq));
  }
  kit.provenance = freeU.empty() ? "freeU=zero" : "freeU=explicit";
  return kit;
}

}  // namespace detail

/// Builds the per-factor reconstruction vectors (factor-1 sequences c_j and
/// factor-2 sequences d_j'), failing with the factor and condition that broke
/// when either factor is not a frame.
inline ReconstructionKit design_kit(const TensorScheme& scheme, const KitOptions& options = {}) {
  ReconstructionKit kit;
  kit.factor1 = scheme.cont1
                    ? detail::design_factor_kit(*scheme.cont1, options.freeU1, options.truncation1,
                                                options.force, "factor1")
                    : detail::design_factor_kit(*scheme.per1, options.freeU1, options.force,
                                                "factor1");
  kit.factor2 = scheme.cont2
                    ? detail::design_factor_kit(*scheme.cont2, options.freeU2, options.truncation2,
                                                options.force, "factor2")
                    : detail::design_factor_kit(*scheme.per2, options.freeU2, options.force,
                                                "factor2");
  return kit;
}

namespace detail {

inline void check_grid_matches(const TensorScheme& scheme, const SampleGrid& grid) {
  if (grid.s != scheme.s() || grid.sprime != scheme.sprime())
    throw ShapeMismatch("sample grid: " + std::to_string(grid.s) + "x" +
                        std::to_string(grid.sprime) + " channels, scheme has " +
                        std::to_string(scheme.s()) + "x" + std::to_string(scheme.sprime()));
  if (scheme.per1) {
    const IndexWindow expect{0, scheme.per1->ell() - 1};
    if (!grid.nwin.empty() && !(grid.nwin == expect))
      throw ShapeMismatch("sample grid: axis-1 window does not cover 0..ell-1");
  }
  if (scheme.per2) {
    const IndexWindow expect{0, scheme.per2->ell() - 1};
    if (!grid.mwin.empty() && !(grid.mwin == expect))
      throw ShapeMismatch("sample grid: axis-2 window does not cover 0..ell-1");
  }
}

}  // namespace detail

/// Separable synthesis out(k, p) = sum samples(j, j', n, m) c_j(k - r n)
/// d_j'(p - rbar m), with periodic index reduction on finite axes.
inline TensorCoefficients reconstruct_tensor(const TensorScheme& scheme, const SampleGrid& grid,
                                             const ReconstructionKit& kit) {
  detail::check_grid_matches(scheme, grid);
  if (static_cast<long>(kit.factor1.seqs.size()) != scheme.s() ||
      static_cast<long>(kit.factor2.seqs.size()) != scheme.sprime())
    throw ShapeMismatch("reconstruction kit: channel count does not match the scheme");
  TensorCoefficients out;
  for (long j = 0; j < grid.s; ++j)
    for (long jp = 0; jp < grid.sprime; ++jp)
      for (long n = grid.nwin.lo; n <= grid.nwin.hi; ++n)
        for (long m = grid.mwin.lo; m <= grid.mwin.hi; ++m) {
          const Complex v = grid.at(j, jp, n, m);
          if (v == Complex(0.0, 0.0)) continue;
          for (const auto& [k1, c] : kit.factor1.seqs[static_cast<std::size_t>(j)]) {
            const long k = kit.factor1.period
                               ? pmod(k1 + kit.factor1.step * n, *kit.factor1.period)
                               : k1 + kit.factor1.step * n;
            for (const auto& [p1, d] : kit.factor2.seqs[static_cast<std::size_t>(jp)]) {
              const long p = kit.factor2.period
                                 ? pmod(p1 + kit.factor2.step * m, *kit.factor2.period)
                                 : p1 + kit.factor2.step * m;
              out.add(k, p, v * c * d);
            }
          }
        }
  return out;
}

struct InterpolationReport {
  double max_deviation = 0.0;
};

/// Square case only: sampling the reconstruction vectors must give Kronecker
/// deltas. Reports the largest deviation over the declared ranges.
inline InterpolationReport verify_interpolation(const TensorScheme& scheme,
                                                const ReconstructionKit& kit) {
  if (scheme.s() != scheme.step1() || scheme.sprime() != scheme.step2())
    throw NotSquareCase("verify_interpolation: scheme has s=" + std::to_string(scheme.s()) +
                        ", r=" + std::to_string(scheme.step1()) + ", s'=" +
                        std::to_string(scheme.sprime()) + ", rbar=" +
                        std::to_string(scheme.step2()) + "; interpolation needs s=r and s'=rbar");
  if (static_cast<long>(kit.factor1.seqs.size()) != scheme.s() ||
      static_cast<long>(kit.factor2.seqs.size()) != scheme.sprime())
    throw ShapeMismatch("verify_interpolation: kit channel count does not match the scheme");
  InterpolationReport report;
  for (long j0 = 0; j0 < scheme.s(); ++j0)
    for (long jp0 = 0; jp0 < scheme.sprime(); ++jp0) {
      TensorCoefficients x;
      for (const auto& [k, c] : kit.factor1.seqs[static_cast<std::size_t>(j0)])
        for (const auto& [p, d] : kit.factor2.seqs[static_cast<std::size_t>(jp0)]) {
          const Complex v = c * d;
          if (v != Complex(0.0, 0.0)) x.set(k, p, v);
        }
      const SampleGrid grid = sample_tensor(scheme, x);
      for (long j = 0; j < grid.s; ++j)
        for (long jp = 0; jp < grid.sprime; ++jp)
          for (long n = grid.nwin.lo; n <= grid.nwin.hi; ++n)
            for (long m = grid.mwin.lo; m <= grid.mwin.hi; ++m) {
              const double expected =
                  (j == j0 && jp == jp0 && n == 0 && m == 0) ? 1.0 : 0.0;
              report.max_deviation =
                  std::max(report.max_deviation, std::abs(grid.at(j, jp, n, m) - expected));
            }
    }
  return report;
}

struct BruteForceReport {
  double max_error = 0.0;
  SpectralExtremes frame_bounds;
};

/// Finite-finite only: flattens sampling and reconstruction into explicit
/// matrices, checks recon * samp = identity entrywise, and returns the
/// spectral extremes of samp* samp (the tensor frame bounds).
/// Flattening: row = (j s' + j') ell ellbar + n ellbar + m, column = p M + q.
inline BruteForceReport brute_force_check(const TensorScheme& scheme,
                                          const ReconstructionKit& kit) {
  if (scheme.kind != TensorCase::finite_finite)
    throw CaseMismatch("brute_force_check: requires the finite-finite case, got " +
                       to_string(scheme.kind));
  const detail::FactorData f1 = detail::factor_data(scheme, 1);
  const detail::FactorData f2 = detail::factor_data(scheme, 2);
  if (static_cast<long>(kit.factor1.seqs.size()) != f1.channels ||
      static_cast<long>(kit.factor2.seqs.size()) != f2.channels)
    throw ShapeMismatch("brute_force_check: kit channel count does not match the scheme");
  const long n1 = *f1.period, n2 = *f2.period;
  const long ell1 = n1 / f1.step, ell2 = n2 / f2.step;
  const long rows = f1.channels * f2.channels * ell1 * ell2;
  const long dim = n1 * n2;
  CMat samp(rows, dim), recon(dim, rows);
  for (long j = 0; j < f1.channels; ++j)
    for (long jp = 0; jp < f2.channels; ++jp)
      for (long n = 0; n < ell1; ++n)
        for (long m = 0; m < ell2; ++m) {
          const long row = (j * f2.channels + jp) * ell1 * ell2 + n * ell2 + m;
          const SparseSeq& c = kit.factor1.seqs[static_cast<std::size_t>(j)];
          const SparseSeq& d = kit.factor2.seqs[static_cast<std::size_t>(jp)];
          for (long p = 0; p < n1; ++p)
            for (long q = 0; q < n2; ++q) {
              samp(row, p * n2 + q) = f1.cc(j, p - f1.step * n) * f2.cc(jp, q - f2.step * m);
              recon(p * n2 + q, row) =
                  c.at(pmod(p - f1.step * n, n1)) * d.at(pmod(q - f2.step * m, n2));
            }
        }
  BruteForceReport report;
  report.max_error = (recon * samp - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff();
  report.frame_bounds = hermitian_extremes(samp.adjoint() * samp);
  return report;
}

}  // namespace uvsamp

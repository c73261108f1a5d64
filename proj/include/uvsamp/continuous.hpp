#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uvsamp/linalg.hpp"
#include "uvsamp/types.hpp"

namespace uvsamp {

/// Trigonometric polynomial sum_k c_k e^{2 pi i k x}, stored by its finitely
/// supported coefficient map; 1-periodic by construction.
class FourierSymbol {
 public:
  FourierSymbol() = default;
  explicit FourierSymbol(SparseSeq coeffs) : coeffs_(std::move(coeffs)) {}

  static FourierSymbol constant(Complex c) { return FourierSymbol(SparseSeq::delta(0, c)); }

  /// Symbol whose coefficient k is the cross-covariance at -k, i.e. the
  /// symbol generated by a channel with cross-covariance cc(q) = <U^q a, h>.
  static FourierSymbol from_cross_covariance(const SparseSeq& cc) {
    SparseSeq c;
    for (const auto& [q, v] : cc) c.set(-q, v);
    return FourierSymbol(std::move(c));
  }

  /// Inverse of from_cross_covariance.
  SparseSeq cross_covariance() const {
    SparseSeq cc;
    for (const auto& [k, v] : coeffs_) cc.set(-k, v);
    return cc;
  }

  Complex coeff(long k) const { return coeffs_.at(k); }
  const SparseSeq& coeffs() const { return coeffs_; }

  long max_degree() const {
    const auto supp = coeffs_.support();
    if (!supp) return 0;
    return std::max(std::labs(supp->lo), std::labs(supp->hi));
  }

  Complex operator()(double x) const {
    const double x0 = x - std::floor(x);
    Complex acc(0.0, 0.0);
    for (const auto& [k, v] : coeffs_) acc += v * std::exp(Complex(0.0, kTwoPi * double(k) * x0));
    return acc;
  }

 private:
  SparseSeq coeffs_;
};

/// One infinite factor: s channel symbols, sampling period r and the uniform
/// evaluation grid x_t = t/L used for frame constants and dual symbols.
struct ContinuousScheme {
  long r = 1;
  std::vector<FourierSymbol> symbols;
  long grid = 256;

  long num_systems() const { return static_cast<long>(symbols.size()); }
};

inline ContinuousScheme make_continuous_scheme(long r, std::vector<FourierSymbol> symbols,
                                               long grid = 256) {
  if (r < 1) throw ValidationError("continuous scheme: r must be >= 1");
  if (symbols.empty()) throw ValidationError("continuous scheme: needs at least one symbol");
  if (static_cast<long>(symbols.size()) < r)
    throw ValidationError("continuous scheme: needs at least r = " + std::to_string(r) +
                          " symbols, got " + std::to_string(symbols.size()));
  if (grid < 1 || grid % r != 0)
    throw ValidationError("continuous scheme: grid " + std::to_string(grid) +
                          " must be a positive multiple of r = " + std::to_string(r));
  long max_deg = 0;
  for (const auto& g : symbols) max_deg = std::max(max_deg, g.max_degree());
  if (grid < 2 * max_deg + 1)
    throw ValidationError("continuous scheme: grid " + std::to_string(grid) +
                          " is too coarse for symbol degree " + std::to_string(max_deg) +
                          " (needs >= " + std::to_string(2 * max_deg + 1) + ")");
  return ContinuousScheme{r, std::move(symbols), grid};
}

/// s x r matrix with entry (j, k) = g_j(x + k/r), using 1-periodic symbols.
inline CMat symbol_matrix(const ContinuousScheme& scheme, double x) {
  const double x0 = x - std::floor(x);
  CMat out(scheme.num_systems(), scheme.r);
  for (long j = 0; j < scheme.num_systems(); ++j)
    for (long k = 0; k < scheme.r; ++k)
      out(j, k) = scheme.symbols[j](x0 + double(k) / double(scheme.r));
  return out;
}

/// Grid approximation of the essential extremes of the eigenvalues of
/// G*(x)G(x) over (0, 1/r), evaluated at x_t = t/L, t = 0..L/r-1.
struct FrameConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

inline FrameConstants frame_constants(const ContinuousScheme& scheme) {
  FrameConstants out;
  out.alpha = std::numeric_limits<double>::infinity();
  out.beta = 0.0;
  const long points = scheme.grid / scheme.r;
  for (long t = 0; t < points; ++t) {
    const CMat g = symbol_matrix(scheme, double(t) / double(scheme.grid));
    const SpectralExtremes e = hermitian_extremes(g.adjoint() * g);
    out.alpha = std::min(out.alpha, e.lambda_min);
    out.beta = std::max(out.beta, e.lambda_max);
  }
  return out;
}

/// Per-grid-point free term U(x_t) for the dual family; empty = zero,
/// one matrix = constant in x, L matrices = one per grid point.
using GridFreeTerm = std::vector<CMat>;

/// Dual channel symbols h_j: grid samples plus DFT coefficients truncated to
/// the K largest magnitudes.
struct DualSymbols {
  CMat grid_samples;                   // s x L, column t holds h_j(t/L)
  std::vector<FourierSymbol> symbols;  // truncated coefficient form
  long truncation = 0;                 // K used
};

namespace detail {

inline const CMat* free_term_at(const GridFreeTerm& u, long t, long rows, long cols,
                                const std::string& what) {
  if (u.empty()) return nullptr;
  const CMat& m = u.size() == 1 ? u.front() : u.at(static_cast<std::size_t>(t));
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionMismatch(what + ": free term must be " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", got " + shape_of(m));
  return &m;
}

/// DFT frequency assignment for an L-point grid: bins map to
/// k in (-L/2, L/2] so that trig polynomials below the Nyquist degree are
/// recovered exactly.
inline long dft_frequency(long bin, long grid) {
  return bin <= grid / 2 ? bin : bin - grid;
}

}  // namespace detail

/// Solves [h_1(x) .. h_s(x)] G(x) = [1 0 .. 0] on the full grid of (0, 1)
/// through the left-inverse family G^+(x) + U(x)[I - G(x)G^+(x)], taking the
/// first row at every grid point. Throws NotAFrame when the lower frame
/// constant is not strictly positive, IdentityViolated when the defining
/// identity fails on the grid (enforcement is skipped in diagnostic mode).
inline DualSymbols dual_symbols(const ContinuousScheme& scheme, const GridFreeTerm& freeU = {},
                                long truncation = -1, bool enforce_frame = true) {
  const long l = scheme.grid;
  const long s = scheme.num_systems();
  const long r = scheme.r;
  if (!freeU.empty() && freeU.size() != 1 && freeU.size() != static_cast<std::size_t>(l))
    throw DimensionMismatch("dual_symbols: free term needs 1 or L matrices, got " +
                            std::to_string(freeU.size()));
  if (truncation < 0) truncation = l;
  if (enforce_frame) {
    const FrameConstants fc = frame_constants(scheme);
    if (!(fc.alpha > 1e-10))
      throw NotAFrame("dual_symbols: lower frame constant " + std::to_string(fc.alpha) +
                      " is not strictly positive");
  }

  CMat grid_samples(s, l);
  double worst = 0.0;
  for (long t = 0; t < l; ++t) {
    const CMat g = symbol_matrix(scheme, double(t) / double(l));
    const CMat gp = pseudo_inverse(g);
    CMat h = gp;
    if (const CMat* u = detail::free_term_at(freeU, t, r, s, "dual_symbols"))
      h += (*u) * (CMat::Identity(s, s) - g * gp);
    grid_samples.col(t) = h.row(0).transpose();
    const CMat identity = h.row(0) * g;  // 1 x r, expected [1 0 .. 0]
    for (long k = 0; k < r; ++k)
      worst = std::max(worst, std::abs(identity(0, k) - (k == 0 ? 1.0 : 0.0)));
  }
  if (enforce_frame && worst > 1e-9)
    throw IdentityViolated("dual_symbols: duality identity off by " + std::to_string(worst) +
                           " on the grid; refine the grid or check the frame conditions");

  // DFT of the grid samples, then keep the K largest magnitudes per channel.
  // Coefficients below roundoff (1e-14 relative to the channel peak) are
  // dropped outright; they carry no signal and would only inflate supports.
  std::vector<FourierSymbol> symbols;
  symbols.reserve(s);
  for (long j = 0; j < s; ++j) {
    std::vector<std::pair<long, Complex>> coeffs;
    coeffs.reserve(l);
    double peak = 0.0;
    for (long bin = 0; bin < l; ++bin) {
      const long k = detail::dft_frequency(bin, l);
      Complex acc(0.0, 0.0);
      for (long t = 0; t < l; ++t)
        acc += grid_samples(j, t) *
               std::exp(Complex(0.0, -kTwoPi * double(k) * double(t) / double(l)));
      coeffs.emplace_back(k, acc / double(l));
      peak = std::max(peak, std::abs(coeffs.back().second));
    }
    std::sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) {
      const double ma = std::abs(a.second), mb = std::abs(b.second);
      if (ma != mb) return ma > mb;
      if (std::labs(a.first) != std::labs(b.first)) return std::labs(a.first) < std::labs(b.first);
      return a.first < b.first;
    });
    SparseSeq kept;
    const long keep = std::min<long>(truncation, static_cast<long>(coeffs.size()));
    for (long i = 0; i < keep; ++i) {
      if (std::abs(coeffs[i].second) <= 1e-14 * peak) break;  // sorted: the rest is smaller
      kept.set(coeffs[i].first, coeffs[i].second);
    }
    symbols.emplace_back(std::move(kept));
  }
  return DualSymbols{std::move(grid_samples), std::move(symbols), truncation};
}

/// Coefficient sequences c_j = r * (Fourier coefficients of h_j); these are
/// the coordinates of the reconstruction vectors in the factor basis.
inline std::vector<SparseSeq> reconstruction_coeffs(const ContinuousScheme& scheme,
                                                    const DualSymbols& duals) {
  std::vector<SparseSeq> out;
  out.reserve(duals.symbols.size());
  for (const auto& h : duals.symbols) out.push_back(h.coeffs().scaled(double(scheme.r)));
  return out;
}

/// Samples over an inclusive index window, one row per channel.
struct SampleBlock {
  IndexWindow window;
  CMat values;  // s x window.length()

  Complex at(long j, long n) const { return values(j, n - window.lo); }
};

namespace detail {

inline long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
inline long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace detail

/// Smallest window containing every index n with rn reachable from the two
/// supports; empty when either support is empty.
inline IndexWindow natural_sample_window(long r, const std::optional<IndexWindow>& coeff_support,
                                         const std::optional<IndexWindow>& cc_support) {
  if (!coeff_support || !cc_support) return IndexWindow{};
  const long lo = coeff_support->lo - cc_support->hi;
  const long hi = coeff_support->hi - cc_support->lo;
  // n with r*n in [lo, hi]
  return IndexWindow{detail::ceil_div(lo, r), detail::floor_div(hi, r)};
}

/// samples(j, n) = sum_k coeffs(k) cc_j(k - r n), a discrete correlation;
/// exact for finitely supported data.
inline SampleBlock sample_continuous(const ContinuousScheme& scheme,
                                     const std::vector<SparseSeq>& crosscov,
                                     const SparseSeq& coeffs, const IndexWindow& window) {
  if (window.empty()) throw EmptyWindow("sample_continuous: empty sample window");
  if (crosscov.size() != static_cast<std::size_t>(scheme.num_systems()))
    throw DimensionMismatch("sample_continuous: expected " +
                            std::to_string(scheme.num_systems()) + " cross-covariances, got " +
                            std::to_string(crosscov.size()));
  CMat values = CMat::Zero(scheme.num_systems(), window.length());
  for (long j = 0; j < scheme.num_systems(); ++j)
    for (long n = window.lo; n <= window.hi; ++n) {
      Complex acc(0.0, 0.0);
      for (const auto& [k, v] : coeffs) acc += v * crosscov[j].at(k - scheme.r * n);
      values(j, n - window.lo) = acc;
    }
  return SampleBlock{window, std::move(values)};
}

/// Synthesis out(k) = sum_j sum_n samples(j, n) c_j(k - r n).
inline SparseSeq reconstruct_continuous(const ContinuousScheme& scheme, const SampleBlock& samples,
                                        const std::vector<SparseSeq>& coeff_seqs) {
  if (coeff_seqs.size() != static_cast<std::size_t>(scheme.num_systems()))
    throw DimensionMismatch("reconstruct_continuous: expected " +
                            std::to_string(scheme.num_systems()) + " coefficient sequences");
  if (samples.values.rows() != scheme.num_systems())
    throw ShapeMismatch("reconstruct_continuous: samples have " +
                        std::to_string(samples.values.rows()) + " rows, scheme has " +
                        std::to_string(scheme.num_systems()) + " channels");
  SparseSeq out;
  for (long j = 0; j < scheme.num_systems(); ++j)
    for (long n = samples.window.lo; n <= samples.window.hi; ++n) {
      const Complex v = samples.at(j, n);
      for (const auto& [k, c] : coeff_seqs[j]) out.add(k + scheme.r * n, v * c);
    }
  return out;
}

}  // namespace uvsamp

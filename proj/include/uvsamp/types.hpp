#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>

#include "uvsamp/errors.hpp"

namespace uvsamp {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Mathematical modulus: result always in [0, n).
inline long pmod(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

/// Inner product linear in the first argument: <x, y> = sum_i x_i conj(y_i).
inline Complex inner(const CVec& x, const CVec& y) {
  if (x.size() != y.size())
    throw DimensionMismatch("inner: vectors of size " + std::to_string(x.size()) +
                            " and " + std::to_string(y.size()));
  return y.dot(x);
}

inline void require_finite(const CMat& m, const std::string& what) {
  if (!m.allFinite()) throw ValidationError(what + ": non-finite entries");
}

inline void require_finite(const CVec& v, const std::string& what) {
  if (!v.allFinite()) throw ValidationError(what + ": non-finite entries");
}

/// Inclusive integer index range; empty when hi < lo.
struct IndexWindow {
  long lo = 0;
  long hi = -1;

  long length() const { return empty() ? 0 : hi - lo + 1; }
  bool empty() const { return hi < lo; }
  bool contains(long n) const { return n >= lo && n <= hi; }

  static IndexWindow hull(const IndexWindow& a, const IndexWindow& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
  }

  friend bool operator==(const IndexWindow& a, const IndexWindow& b) {
    return (a.empty() && b.empty()) || (a.lo == b.lo && a.hi == b.hi);
  }
};

/// Finitely supported sequence Z -> C. Unset indices read as zero.
class SparseSeq {
 public:
  SparseSeq() = default;
  explicit SparseSeq(std::map<long, Complex> entries) : entries_(std::move(entries)) {}

  static SparseSeq delta(long k, Complex value = Complex(1.0, 0.0)) {
    SparseSeq s;
    s.set(k, value);
    return s;
  }

  Complex at(long k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? Complex(0.0, 0.0) : it->second;
  }

  void set(long k, Complex v) { entries_[k] = v; }
  void add(long k, Complex v) { entries_[k] += v; }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Smallest window containing every stored entry; nullopt when empty.
  std::optional<IndexWindow> support() const {
    if (entries_.empty()) return std::nullopt;
    return IndexWindow{entries_.begin()->first, entries_.rbegin()->first};
  }

  /// Sequence shifted so that out(k) = in(k - d).
  SparseSeq shifted(long d) const {
    SparseSeq out;
    for (const auto& [k, v] : entries_) out.set(k + d, v);
    return out;
  }

  SparseSeq scaled(Complex a) const {
    SparseSeq out;
    for (const auto& [k, v] : entries_) out.set(k, a * v);
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [k, v] : entries_) m = std::max(m, std::abs(v));
    return m;
  }

  const std::map<long, Complex>& entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::map<long, Complex> entries_;
};

/// Largest |a(k) - b(k)| over the union of supports.
inline double max_diff(const SparseSeq& a, const SparseSeq& b) {
  double m = 0.0;
  for (const auto& [k, v] : a) m = std::max(m, std::abs(v - b.at(k)));
  for (const auto& [k, v] : b) m = std::max(m, std::abs(v - a.at(k)));
  return m;
}

}  // namespace uvsamp

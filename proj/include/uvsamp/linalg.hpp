#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <string>

#include "uvsamp/types.hpp"

namespace uvsamp {

/// Smallest and largest eigenvalue of a Hermitian matrix.
struct SpectralExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

namespace detail {

inline std::string shape_of(const CMat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace detail

inline SpectralExtremes hermitian_extremes(const CMat& m) {
  require_finite(m, "hermitian_extremes");
  if (m.rows() != m.cols())
    throw NotSquare("hermitian_extremes: matrix is " + detail::shape_of(m));
  if (m.size() == 0)
    throw NotSquare("hermitian_extremes: matrix is empty");
  const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > 1e-12)
    throw NotHermitian("hermitian_extremes: max |m - m*| = " + std::to_string(deviation));
  Eigen::SelfAdjointEigenSolver<CMat> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

/// Moore-Penrose pseudo-inverse via SVD; singular values below
/// rel_tol * sigma_max are treated as zero. The pseudo-inverse of the zero
/// matrix is the zero matrix.
inline CMat pseudo_inverse(const CMat& m, double rel_tol = 1e-12) {
  require_finite(m, "pseudo_inverse");
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw ValidationError("pseudo_inverse: rel_tol must be in (0, 1)");
  CMat out = CMat::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max <= 0.0) return out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= rel_tol * sigma_max && sv(i) > 0.0)
      out.noalias() += svd.matrixV().col(i) * (1.0 / sv(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

/// Number of singular values >= rel_tol * sigma_max (0 for the zero matrix).
inline long rank_of(const CMat& m, double rel_tol = 1e-10) {
  require_finite(m, "rank_of");
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw ValidationError("rank_of: rel_tol must be in (0, 1)");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max <= 0.0) return 0;
  long rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= rel_tol * sigma_max) ++rank;
  return rank;
}

/// Left inverse H = m^+ + freeU (I - m m^+) of a tall full-column-rank
/// matrix; every left inverse arises this way for some freeU (cols x rows).
/// freeU = 0 gives the pseudo-inverse.
inline CMat left_inverse_family(const CMat& m, const CMat& freeU) {
  require_finite(m, "left_inverse_family");
  require_finite(freeU, "left_inverse_family(freeU)");
  if (freeU.rows() != m.cols() || freeU.cols() != m.rows())
    throw DimensionMismatch("left_inverse_family: freeU must be " +
                            std::to_string(m.cols()) + "x" + std::to_string(m.rows()) +
                            ", got " + detail::shape_of(freeU));
  if (rank_of(m) != m.cols())
    throw RankDeficient("left_inverse_family: rank " + std::to_string(rank_of(m)) +
                        " < cols " + std::to_string(m.cols()));
  const CMat pinv = pseudo_inverse(m);
  return pinv + freeU * (CMat::Identity(m.rows(), m.rows()) - m * pinv);
}

}  // namespace uvsamp

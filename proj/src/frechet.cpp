// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "intentd/error.hpp"
#include "intentd/metrics.hpp"

namespace intentd {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd to_matrix(std::span<const EmbeddingVector> set) {
  MatrixXd m(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(set.front().dim()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto v = set[i].values();
    for (std::size_t d = 0; d < v.size(); ++d) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = v[d];
  }
  return m;
}

Eigen::SelfAdjointEigenSolver<MatrixXd> eigen_of(const MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.info() != Eigen::Success) fail(ErrorCode::kNumericalFailure, "eigendecomposition did not converge");
  return es;
}

// Square root of a symmetric PSD matrix, negative eigenvalues clipped to 0.
MatrixXd psd_sqrt(const MatrixXd& sym) {
  const auto es = eigen_of(sym);
  const VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

// tr((A B)^{1/2}) via the symmetrized product A^{1/2} B A^{1/2}.
double trace_sqrt_product(const MatrixXd& a, const MatrixXd& b) {
  const MatrixXd ra = psd_sqrt(a);
  MatrixXd m = ra * b * ra;
  m = 0.5 * (m + m.transpose());
  const auto es = eigen_of(m);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

}  // namespace

double frechet_distance(std::span<const EmbeddingVector> set_a, std::span<const EmbeddingVector> set_b,
                        double shrinkage) {
  if (set_a.size() < 2 || set_b.size() < 2) {
    fail(ErrorCode::kTooFewSamples, "Frechet distance needs >= 2 samples per set");
  }
  if (!(shrinkage >= 0.0) || !std::isfinite(shrinkage)) fail(ErrorCode::kInvalidArgument, "shrinkage must be >= 0");
  const std::size_t dim = set_a.front().dim();
  for (auto set : {set_a, set_b}) {
    for (const auto& v : set) {
      if (v.dim() != dim) fail(ErrorCode::kDimensionMismatch, "Frechet distance inputs differ in dimension");
    }
  }

  const MatrixXd xa = to_matrix(set_a);
  const MatrixXd xb = to_matrix(set_b);
  const VectorXd mu_a = xa.colwise().mean();
  const VectorXd mu_b = xb.colwise().mean();
  const MatrixXd ca = xa.rowwise() - mu_a.transpose();
  const MatrixXd cb = xb.rowwise() - mu_b.transpose();
  const double mean_term = (mu_a - mu_b).squaredNorm();

  // Both covariances act as shrinkage*I outside the span of the centred
  // samples, where the trace term vanishes exactly. Working in an orthonormal
  // basis of that span keeps the problem small and well conditioned.
  MatrixXd basis;
  const auto n_total = ca.rows() + cb.rows();
  if (n_total < static_cast<Eigen::Index>(dim)) {
    MatrixXd span(static_cast<Eigen::Index>(dim), n_total);
    span << ca.transpose(), cb.transpose();
    Eigen::ColPivHouseholderQR<MatrixXd> qr(span);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    if (rank == 0) return mean_term;
    basis = MatrixXd(qr.householderQ()).leftCols(rank);
  } else {
    basis = MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  }

  const MatrixXd pa = ca * basis;
  const MatrixXd pb = cb * basis;
  MatrixXd sa = pa.transpose() * pa / static_cast<double>(set_a.size() - 1);
  MatrixXd sb = pb.transpose() * pb / static_cast<double>(set_b.size() - 1);
  sa.diagonal().array() += shrinkage;
  sb.diagonal().array() += shrinkage;

  const double trace_term = sa.trace() + sb.trace() - 2.0 * trace_sqrt_product(sa, sb);
  const double d = mean_term + trace_term;
  if (!std::isfinite(d)) fail(ErrorCode::kNumericalFailure, "Frechet distance is not finite");
  return std::max(0.0, d);
}

double fbd(std::span<const std::string> set_a, std::span<const std::string> set_b, EmbeddingProvider& provider,
           double shrinkage) {
  if (set_a.size() < 2 || set_b.size() < 2) fail(ErrorCode::kTooFewSamples, "FBD needs >= 2 texts per set");
  const auto ea = embed_texts(provider, set_a);
  const auto eb = embed_texts(provider, set_b);
  return frechet_distance(ea, eb, shrinkage);
}

}  // namespace intentd

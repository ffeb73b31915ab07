#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cpspdc/jsa.hpp"

namespace cpspdc {

/// f = Σ_j c_j ξ_j(signal) ζ_j(idler), coefficients descending with Σ c_j² = 1.
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  /// Column j is ξ_j sampled on the signal axis.
  Eigen::MatrixXcd signal_modes;
  /// Column j is ζ_j sampled on the idler axis.
  Eigen::MatrixXcd idler_modes;

  /// Σ_j c_j ξ_j ζ_jᵀ, i.e. the (normalized) matrix that was decomposed.
  Eigen::MatrixXcd reconstruct() const;
};

/// Full SVD of the amplitude matrix. Each ξ_j is rotated so that its first
/// component with magnitude above 1e-12 is real and positive; ζ_j absorbs the
/// conjugate phase. Throws ValidationError on non-finite or all-zero input.
SchmidtDecomposition decompose(const Eigen::MatrixXcd& amplitudes);
SchmidtDecomposition decompose(const JsaMatrix& jsa);

/// p = Σ_j c_j⁴.
double purity(const SchmidtDecomposition& d);
/// K = 1/p.
double schmidt_number(const SchmidtDecomposition& d);

/// Purity from singular values only (no mode vectors); same result as
/// purity(decompose(f)).
double purity(const Eigen::MatrixXcd& amplitudes);
double purity(const JsaMatrix& jsa);

}  // namespace cpspdc

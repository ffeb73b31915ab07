#include "cpspdc/schmidt.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <complex>

#include "cpspdc/error.hpp"

namespace cpspdc {

namespace {

void check_input(const Eigen::MatrixXcd& f) {
  if (f.size() == 0) throw ValidationError("schmidt: empty matrix");
  if (!f.allFinite()) throw ValidationError("schmidt: non-finite entries");
  if (!(f.norm() > 0.0)) throw ValidationError("schmidt: zero matrix");
}

std::vector<double> normalized_squares(const Eigen::VectorXd& singular) {
  const double total = singular.squaredNorm();
  std::vector<double> w(static_cast<std::size_t>(singular.size()));
  for (Eigen::Index j = 0; j < singular.size(); ++j) {
    w[static_cast<std::size_t>(j)] = singular[j] * singular[j] / total;
  }
  return w;
}

}  // namespace

Eigen::MatrixXcd SchmidtDecomposition::reconstruct() const {
  const auto k = static_cast<Eigen::Index>(coefficients.size());
  Eigen::VectorXd c(k);
  for (Eigen::Index j = 0; j < k; ++j) c[j] = coefficients[static_cast<std::size_t>(j)];
  return signal_modes.leftCols(k) * c.asDiagonal() * idler_modes.leftCols(k).transpose();
}

SchmidtDecomposition decompose(const Eigen::MatrixXcd& amplitudes) {
  check_input(amplitudes);
  const Eigen::MatrixXcd f = amplitudes / amplitudes.norm();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtDecomposition d;
  const Eigen::VectorXd& s = svd.singularValues();
  const double total = std::sqrt(s.squaredNorm());
  d.coefficients.resize(static_cast<std::size_t>(s.size()));
  for (Eigen::Index j = 0; j < s.size(); ++j) d.coefficients[static_cast<std::size_t>(j)] = s[j] / total;

  // f = U Σ V† = Σ_j c_j u_j (v_j*)ᵀ, so ζ_j = conj(v_j).
  d.signal_modes = svd.matrixU();
  d.idler_modes = svd.matrixV().conjugate();
  for (Eigen::Index j = 0; j < d.signal_modes.cols(); ++j) {
    auto xi = d.signal_modes.col(j);
    Eigen::Index lead = 0;
    while (lead < xi.size() && std::abs(xi[lead]) <= 1e-12) ++lead;
    if (lead == xi.size()) continue;
    const std::complex<double> phase = std::conj(xi[lead]) / std::abs(xi[lead]);
    xi *= phase;
    d.idler_modes.col(j) *= std::conj(phase);
  }
  return d;
}

SchmidtDecomposition decompose(const JsaMatrix& jsa) { return decompose(jsa.amplitudes()); }

double purity(const SchmidtDecomposition& d) {
  double p = 0.0;
  for (double c : d.coefficients) p += c * c * c * c;
  return p;
}

double schmidt_number(const SchmidtDecomposition& d) { return 1.0 / purity(d); }

double purity(const Eigen::MatrixXcd& amplitudes) {
  check_input(amplitudes);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amplitudes);
  double p = 0.0;
  for (double w : normalized_squares(svd.singularValues())) p += w * w;
  return p;
}

double purity(const JsaMatrix& jsa) { return purity(jsa.amplitudes()); }

}  // namespace cpspdc

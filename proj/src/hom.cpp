#include "cpspdc/hom.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "cpspdc/error.hpp"
#include "cpspdc/schmidt.hpp"
#include "cpspdc/units.hpp"
#include "json.hpp"

namespace cpspdc {

std::string_view to_string(InterferingPair pair) {
  return pair == InterferingPair::Signal ? "signal" : "idler";
}

InterferingPair parse_pair(std::string_view text) {
  if (text == "signal" || text == "signal-signal" || text == "s") return InterferingPair::Signal;
  if (text == "idler" || text == "idler-idler" || text == "i") return InterferingPair::Idler;
  throw ValidationError(fmt::format("unknown interfering pair '{}' (signal|idler)", text));
}

namespace {

constexpr double kNormTolerance = 1e-9;

void check_inputs(const JsaMatrix& f1, const JsaMatrix& f2) {
  if (!(f1.grid() == f2.grid())) {
    throw ValidationError("HOM: the two JSAs are sampled on different grids (grid mismatch)");
  }
  for (const JsaMatrix* f : {&f1, &f2}) {
    if (std::abs(f->norm_squared() - 1.0) > kNormTolerance) {
      throw ValidationError(fmt::format("HOM: unnormalized input (sum |f|^2 = {:.12g})", f->norm_squared()));
    }
  }
}

/// Rows follow the interfering axis.
Eigen::MatrixXcd oriented(const JsaMatrix& f, InterferingPair pair) {
  return pair == InterferingPair::Signal ? f.amplitudes() : Eigen::MatrixXcd(f.amplitudes().transpose());
}

const std::vector<double>& interfering_axis(const JsaMatrix& f, InterferingPair pair) {
  return pair == InterferingPair::Signal ? f.grid().signal_nm : f.grid().idler_nm;
}

std::vector<double> centered_omegas(const std::vector<double>& axis_nm) {
  std::vector<double> w(axis_nm.size());
  std::transform(axis_nm.begin(), axis_nm.end(), w.begin(), angular_frequency);
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  for (double& x : w) x -= mean;
  return w;
}

}  // namespace

HomContraction::HomContraction(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair) {
  check_inputs(f1, f2);
  const Eigen::MatrixXcd a = oriented(f1, pair);
  const Eigen::MatrixXcd b = oriented(f2, pair);
  const Eigen::MatrixXcd m = a * a.adjoint();
  const Eigen::MatrixXcd n = b * b.adjoint();
  weights_ = m.cwiseProduct(n.transpose());
  omega_ = centered_omegas(interfering_axis(f1, pair));
}

std::complex<double> HomContraction::cross_term(double tau_ps) const {
  const auto n = static_cast<Eigen::Index>(omega_.size());
  Eigen::VectorXcd u(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    u[k] = std::polar(1.0, omega_[static_cast<std::size_t>(k)] * tau_ps);
  }
  // Σ_{a,b} conj(u_a) W[a,b] u_b
  return u.dot(weights_ * u);
}

double HomContraction::p4(double tau_ps) const { return 0.25 * (2.0 - 2.0 * cross_term(tau_ps).real()); }

namespace {

void brute_force_guard(const JsaMatrix& f) {
  constexpr std::size_t kMaxN = 40;
  if (f.grid().signal_size() > kMaxN || f.grid().idler_size() > kMaxN) {
    throw ValidationError(fmt::format("brute-force HOM sum limited to N <= {} (grid too large)", kMaxN));
  }
}

}  // namespace

std::complex<double> cross_term_bruteforce(const JsaMatrix& f1, const JsaMatrix& f2,
                                           InterferingPair pair, double tau_ps) {
  brute_force_guard(f1);
  check_inputs(f1, f2);
  const Eigen::MatrixXcd a = oriented(f1, pair);
  const Eigen::MatrixXcd b = oriented(f2, pair);
  const std::vector<double> w = centered_omegas(interfering_axis(f1, pair));
  const Eigen::Index n = a.rows();
  const Eigen::Index h = a.cols();
  std::complex<double> sum = 0.0;
  for (Eigen::Index s1 = 0; s1 < n; ++s1) {
    for (Eigen::Index s2 = 0; s2 < n; ++s2) {
      const auto phase = std::polar(1.0, (w[static_cast<std::size_t>(s2)] - w[static_cast<std::size_t>(s1)]) * tau_ps);
      for (Eigen::Index i1 = 0; i1 < h; ++i1) {
        for (Eigen::Index i2 = 0; i2 < h; ++i2) {
          const std::complex<double> direct = a(s1, i1) * b(s2, i2);
          const std::complex<double> swapped = a(s2, i1) * b(s1, i2);
          sum += direct * std::conj(swapped) * phase;
        }
      }
    }
  }
  return sum;
}

double p4_bruteforce(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair, double tau_ps) {
  brute_force_guard(f1);
  check_inputs(f1, f2);
  const Eigen::MatrixXcd a = oriented(f1, pair);
  const Eigen::MatrixXcd b = oriented(f2, pair);
  const std::vector<double> w = centered_omegas(interfering_axis(f1, pair));
  const Eigen::Index n = a.rows();
  const Eigen::Index h = a.cols();
  double sum = 0.0;
  for (Eigen::Index s1 = 0; s1 < n; ++s1) {
    for (Eigen::Index s2 = 0; s2 < n; ++s2) {
      const auto phase = std::polar(1.0, -(w[static_cast<std::size_t>(s2)] - w[static_cast<std::size_t>(s1)]) * tau_ps);
      for (Eigen::Index i1 = 0; i1 < h; ++i1) {
        for (Eigen::Index i2 = 0; i2 < h; ++i2) {
          sum += std::norm(a(s1, i1) * b(s2, i2) - a(s2, i1) * b(s1, i2) * phase);
        }
      }
    }
  }
  return 0.25 * sum;
}

std::vector<double> default_delays(const JsaMatrix& f1, InterferingPair pair, std::size_t count) {
  if (count < 3) throw ValidationError("HOM: need at least 3 delays");
  const std::vector<double>& axis = interfering_axis(f1, pair);
  const double center = 0.5 * (axis.front() + axis.back());
  double width_nm = 0.25 * (axis.back() - axis.front());
  try {
    const MarginalPair m = marginal_spectra(f1);
    width_nm = pair == InterferingPair::Signal ? m.signal.fwhm_nm : m.idler.fwhm_nm;
  } catch (const GridBoundaryError&) {
  }
  // Gaussian-spectrum estimate of the dip FWHM: 4√2·ln2 / Δω.
  const double d_omega = kTwoPi * kSpeedOfLightNmPerPs * width_nm / (center * center);
  const double dip_estimate = 4.0 * std::sqrt(2.0) * std::log(2.0) / d_omega;
  const double step_nm = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  const double alias_period = kTwoPi / (kTwoPi * kSpeedOfLightNmPerPs * step_nm / (center * center));
  const double reach = std::min(6.0 * dip_estimate, 0.45 * alias_period);
  std::vector<double> delays(count);
  for (std::size_t k = 0; k < count; ++k) {
    delays[k] = -reach + 2.0 * reach * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return delays;
}

namespace {

/// Width of the region around k_min where p4 ≤ level, by linear interpolation;
/// NaN when the curve never drops to `level` or is still below it at an edge.
double width_below(const HomCurve& curve, std::size_t k_min, double level) {
  const auto& t = curve.delays_ps;
  const auto& p = curve.p4;
  const std::size_t n = p.size();
  if (p[k_min] > level) return std::numeric_limits<double>::quiet_NaN();
  std::size_t left = k_min;
  while (left > 0 && p[left - 1] <= level) --left;
  std::size_t right = k_min;
  while (right + 1 < n && p[right + 1] <= level) ++right;
  if (left == 0 || right + 1 == n) return std::numeric_limits<double>::quiet_NaN();
  const auto cross = [&](std::size_t lo, std::size_t hi) {
    return t[lo] + (level - p[lo]) / (p[hi] - p[lo]) * (t[hi] - t[lo]);
  };
  return cross(right, right + 1) - cross(left - 1, left);
}

}  // namespace

HomCurve hom_curve(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair,
                   const std::vector<double>& delays_ps) {
  if (delays_ps.size() < 3) throw ValidationError("HOM: need at least 3 delays");
  if (!std::is_sorted(delays_ps.begin(), delays_ps.end())) {
    throw ValidationError("HOM: delays must be ascending");
  }
  const HomContraction contraction(f1, f2, pair);
  HomCurve curve;
  curve.delays_ps = delays_ps;
  curve.p4.resize(delays_ps.size());
  for (std::size_t k = 0; k < delays_ps.size(); ++k) curve.p4[k] = contraction.p4(delays_ps[k]);

  const std::size_t n = curve.p4.size();
  const std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.025 * static_cast<double>(n))));
  double edge = 0.0;
  for (std::size_t k = 0; k < tail; ++k) edge += curve.p4[k] + curve.p4[n - 1 - k];
  curve.baseline = edge / static_cast<double>(2 * tail);

  const auto min_it = std::min_element(curve.p4.begin(), curve.p4.end());
  const auto k_min = static_cast<std::size_t>(min_it - curve.p4.begin());
  curve.minimum = *min_it;
  curve.visibility = (curve.baseline - curve.minimum) / curve.baseline;

  curve.dip_fwhm_ps = width_below(curve, k_min, 0.5 * curve.baseline);
  curve.half_depth_width_ps = width_below(curve, k_min, 0.5 * (curve.baseline + curve.minimum));
  return curve;
}

HomCurve hom_curve(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair) {
  return hom_curve(f1, f2, pair, default_delays(f1, pair));
}

VisibilityPurity visibility_vs_purity_check(const JsaMatrix& jsa) {
  const HomCurve curve = hom_curve(jsa, jsa, InterferingPair::Signal);
  VisibilityPurity out;
  out.visibility = curve.visibility;
  out.purity = purity(jsa);
  out.gap = std::abs(out.visibility - out.purity);
  return out;
}

void write_hom_csv(const HomCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "tau_ps,p4\n";
  for (std::size_t k = 0; k < curve.delays_ps.size(); ++k) {
    out << fmt::format("{:.6g},{:.6g}\n", curve.delays_ps[k], curve.p4[k]);
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string hom_summary_json(const HomCurve& curve, InterferingPair pair) {
  const auto r6 = [](double x) { return std::stod(fmt::format("{:.6g}", x)); };
  const auto finite_or_null = [&](double x) { return std::isfinite(x) ? nlohmann::json(r6(x)) : nlohmann::json(nullptr); };
  nlohmann::ordered_json j;
  j["pair"] = std::string(to_string(pair));
  j["visibility"] = r6(curve.visibility);
  j["dip_fwhm_ps"] = finite_or_null(curve.dip_fwhm_ps);
  j["half_depth_width_ps"] = finite_or_null(curve.half_depth_width_ps);
  j["baseline"] = r6(curve.baseline);
  j["minimum"] = r6(curve.minimum);
  j["delays"] = curve.delays_ps.size();
  return j.dump(2) + "\n";
}

}  // namespace cpspdc

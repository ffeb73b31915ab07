#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include "cpspdc/jsa.hpp"

namespace cpspdc {

/// Which photons meet at the beam splitter. Signal: two signals, heralded by
/// the idlers. Idler: two idlers, heralded by the signals.
enum class InterferingPair { Signal, Idler };

std::string_view to_string(InterferingPair pair);
InterferingPair parse_pair(std::string_view text);

/// Fourfold coincidence probability against delay, unit-normalization
/// convention (distinguishable baseline ½).
struct HomCurve {
  std::vector<double> delays_ps;
  std::vector<double> p4;
  double baseline = 0.0;
  double minimum = 0.0;
  double visibility = 0.0;
  /// Full width where P₄ falls to half the baseline. NaN if never reached.
  double dip_fwhm_ps = 0.0;
  /// Full width at half the dip depth, level (baseline + minimum)/2.
  double half_depth_width_ps = 0.0;
};

/// Cross term of the fourfold coincidence sum at delay τ via the reduced
/// matrices M = f₁f₁†, N = f₂f₂† (heralding axis summed out):
///   C(τ) = Σ_{a,b} M[a,b]·N[b,a]·e^{i(ω_b − ω_a)τ}
/// P₄(τ) = ¼(2 − 2·Re C(τ)) for normalized inputs.
class HomContraction {
 public:
  HomContraction(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair);

  std::complex<double> cross_term(double tau_ps) const;
  double p4(double tau_ps) const;

  /// Offsets of the interfering-axis angular frequencies from their mean, rad/ps.
  const std::vector<double>& omega_offsets() const { return omega_; }

 private:
  std::vector<double> omega_;
  Eigen::MatrixXcd weights_;  // W[a,b] = M[a,b]·N[b,a]
};

/// Literal quadruple sum of the cross term; limited to N ≤ 40 per axis.
std::complex<double> cross_term_bruteforce(const JsaMatrix& f1, const JsaMatrix& f2,
                                           InterferingPair pair, double tau_ps);

/// Literal ¼·Σ|f₁f₂ − f₁f₂·e^{−iΔωτ}|² over all four indices; N ≤ 40.
double p4_bruteforce(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair, double tau_ps);

/// 201 delays (by default) symmetric about 0, spanning ±6 anticipated dip
/// widths, capped below half the grid's aliasing period.
std::vector<double> default_delays(const JsaMatrix& f1, InterferingPair pair, std::size_t count = 201);

/// Throws ValidationError on grid mismatch or unnormalized input.
HomCurve hom_curve(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair,
                   const std::vector<double>& delays_ps);
HomCurve hom_curve(const JsaMatrix& f1, const JsaMatrix& f2, InterferingPair pair);

struct VisibilityPurity {
  double visibility = 0.0;
  double purity = 0.0;
  double gap = 0.0;
};

/// Self-interference of two identical independent sources (signal pair).
VisibilityPurity visibility_vs_purity_check(const JsaMatrix& jsa);

void write_hom_csv(const HomCurve& curve, const std::filesystem::path& path);
/// Summary record as pretty-printed JSON text.
std::string hom_summary_json(const HomCurve& curve, InterferingPair pair);

}  // namespace cpspdc

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "cpspdc/dispersion.hpp"
#include "cpspdc/phasematch.hpp"

namespace cpspdc {

/// Gaussian pump. `width_nm` is the Δλ parameter of the wavelength-domain
/// envelope; the pump itself is centred at lambda0_nm / 2.
struct PumpSpec {
  double lambda0_nm = 1550.0;
  double width_nm = 0.16;

  /// Exact intensity FWHM of the envelope in nm (≈ 2√ln2·Δλ when Δλ ≪ λ0).
  double fwhm_nm() const;
};

void validate(const PumpSpec& pump);

/// Uniform wavelength axes, ascending. Rows of a JsaMatrix follow the signal
/// axis, columns the idler axis.
struct SpectralGrid {
  std::vector<double> signal_nm;
  std::vector<double> idler_nm;

  static SpectralGrid centered(double lambda0_nm, double signal_half_span_nm,
                               double idler_half_span_nm, std::size_t n);

  std::size_t signal_size() const { return signal_nm.size(); }
  std::size_t idler_size() const { return idler_nm.size(); }

  /// Throws ValidationError unless both axes have ≥ 2 strictly increasing,
  /// uniformly spaced samples.
  void validate() const;

  bool operator==(const SpectralGrid&) const = default;
};

/// Complex joint spectral amplitude on a signal × idler grid. Matrices built
/// by compute_jsa() are normalized so that Σ|f|² = 1.
class JsaMatrix {
 public:
  /// Stores `amplitudes` as given; throws ValidationError on shape mismatch,
  /// an invalid grid or non-finite entries.
  JsaMatrix(SpectralGrid grid, Eigen::MatrixXcd amplitudes);

  /// Rescales to unit Frobenius norm; throws ValidationError for a zero matrix.
  static JsaMatrix normalized(SpectralGrid grid, Eigen::MatrixXcd amplitudes);

  double norm_squared() const { return amplitudes_.squaredNorm(); }

  const SpectralGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& amplitudes() const { return amplitudes_; }
  std::complex<double> operator()(std::size_t s, std::size_t i) const { return amplitudes_(s, i); }

  /// Joint spectral intensity |f|².
  Eigen::MatrixXd intensity() const { return amplitudes_.cwiseAbs2(); }

  /// Same data with signal and idler roles exchanged.
  JsaMatrix transposed() const;

 private:
  SpectralGrid grid_;
  Eigen::MatrixXcd amplitudes_;
};

/// α(λ_s, λ_i) = exp(−½·[(1/λ_s + 1/λ_i − 2/λ0) / (Δλ/((λ0/2)² − (Δλ/2)²))]²)
double pump_envelope(const PumpSpec& pump, double signal_nm, double idler_nm);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// φ = sinc(Δk·L/2).
double phase_matching_function(const CrystalDatabase& db, const PhaseMatchConfig& config,
                               double signal_nm, double idler_nm);

/// How the wavelength window around λ0 is chosen.
struct SpanRule {
  enum class Kind {
    /// Square window λ0 ± half_span_nm on both axes.
    Fixed,
    /// Signal: ±auto_factor·(pump-limited signal width). Idler: the larger of
    /// ±auto_factor·(sinc idler width) and the offset where the sinc envelope
    /// drops to 1% of its peak.
    Auto,
  };
  Kind kind = Kind::Auto;
  double half_span_nm = 3.0;
  double auto_factor = 5.0;
  /// Multiplies both auto half-spans after the rule above is applied.
  double scale = 1.0;

  static SpanRule fixed(double half_span_nm) { return {Kind::Fixed, half_span_nm, 5.0, 1.0}; }
  static SpanRule automatic(double factor = 5.0) { return {Kind::Auto, 3.0, factor, 1.0}; }
  /// Same rule with every span multiplied by `factor`.
  SpanRule scaled(double factor) const;
};

struct JsaOptions {
  SpanRule span{};
  std::size_t n = 200;
};

/// First-order estimate of the idler marginal FWHM (sinc width at fixed signal).
double estimated_idler_fwhm_nm(const CrystalDatabase& db, const PhaseMatchConfig& config);

/// Half-spans (signal, idler) in nm that `rule` selects for this source.
std::pair<double, double> select_half_spans(const CrystalDatabase& db,
                                            const PhaseMatchConfig& config, const PumpSpec& pump,
                                            const SpanRule& rule);

/// Unnormalized α·φ on `grid`.
Eigen::MatrixXcd sample_jsa(const CrystalDatabase& db, const PhaseMatchConfig& config,
                            const PumpSpec& pump, const SpectralGrid& grid);

/// f = α·φ on a grid centred at (λ0, λ0), normalized to unit Frobenius norm.
JsaMatrix compute_jsa(const CrystalDatabase& db, const PhaseMatchConfig& config,
                      const PumpSpec& pump, const JsaOptions& options = {});

struct MarginalSpectrum {
  std::vector<double> axis_nm;
  std::vector<double> intensity;  // peak normalized to 1
  double fwhm_nm = 0.0;
};

/// Full width at half maximum by linear interpolation between samples.
/// Throws GridBoundaryError if the peak or a half-max crossing is not inside
/// the sampled range.
double fwhm(const std::vector<double>& x, const std::vector<double>& y);

struct MarginalPair {
  MarginalSpectrum signal;
  MarginalSpectrum idler;
};

enum class EdgePolicy {
  Throw,  // GridBoundaryError when a FWHM is not inside the grid
  NaN,    // report such a FWHM as NaN
};

/// Projections of |f|² onto the signal and idler axes.
MarginalPair marginal_spectra(const JsaMatrix& jsa, EdgePolicy policy = EdgePolicy::Throw);

/// Δν = c·Δλ/λ² in GHz.
double bandwidth_nm_to_ghz(double center_nm, double fwhm_nm);

void write_jsa_csv(const JsaMatrix& jsa, const std::filesystem::path& path);
void write_jsa_binary(const JsaMatrix& jsa, const std::filesystem::path& path);
/// Reads either layout, recognising the binary magic.
JsaMatrix read_jsa(const std::filesystem::path& path);

}  // namespace cpspdc

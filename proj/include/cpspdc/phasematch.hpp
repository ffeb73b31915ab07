#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "cpspdc/dispersion.hpp"

namespace cpspdc {

/// Counter-propagating phase-matching configurations (pump → signal + idler):
///   Type0   p(z) → s(z) + i(z)
///   Type2A  p(y) → s(z) + i(y)
///   Type2B  p(y) → s(y) + i(z)
/// Signal co-propagates with the pump; the idler travels backwards.
enum class PmType { Type0, Type2A, Type2B };

std::string_view to_string(PmType type);
/// Accepts "type0", "type2a", "type2b" (case-insensitive; "type2"/"typeII" mean Type2A).
PmType parse_pm_type(std::string_view text);

struct AxisTriple {
  OpticalAxis pump;
  OpticalAxis signal;
  OpticalAxis idler;
};

AxisTriple axes_of(PmType type);

struct PhaseMatchConfig {
  std::string crystal;
  PmType pm_type = PmType::Type0;
  double lambda0_nm = 1550.0;  // degenerate signal/idler wavelength; pump at lambda0/2
  double period_nm = 0.0;      // poling period Λ
  double length_mm = 1.0;

  double pump_center_nm() const { return 0.5 * lambda0_nm; }
};

/// Throws ValidationError unless Λ > 0, L > 0 and the degenerate wavelengths
/// are covered by the relevant axes' dispersion models.
void validate(const CrystalDatabase& db, const PhaseMatchConfig& config);

/// 2π/Λ in rad/µm.
double qpm_wavevector(double period_nm);

/// Δk = k_s(λ_s) − k_i(λ_i) + 2π/Λ − k_p(λ_p), with λ_p = 1/(1/λ_s + 1/λ_i). rad/µm.
double delta_k(const CrystalDatabase& db, const PhaseMatchConfig& config, double signal_nm,
               double idler_nm);

/// Λ that zeroes Δk at λ_s = λ_i = λ0 (closed form). Throws SolverError when
/// k_p − k_s + k_i ≤ 0.
double poling_period(const CrystalDatabase& db, std::string_view crystal, PmType type,
                     double lambda0_nm);

/// Group-velocity mismatch g(λ) = n_g,p(λ/2) − n_g,s(λ), i.e. c·(k'_p − k'_s).
double gvm_mismatch(const CrystalDatabase& db, std::string_view crystal, PmType type,
                    double lambda0_nm);

struct Bracket {
  double lo_nm;
  double hi_nm;
};

/// Degenerate wavelength where the pump and signal inverse group velocities
/// agree. Bisection on a sign-changing bracket; throws SolverError otherwise.
double gvm_wavelength(const CrystalDatabase& db, std::string_view crystal, PmType type,
                      Bracket bracket);

/// First sign change of gvm_mismatch when scanning the wavelength range that
/// every axis (pump at λ/2) covers; throws SolverError if there is none.
Bracket default_gvm_bracket(const CrystalDatabase& db, std::string_view crystal, PmType type,
                            double scan_step_nm = 5.0);
double gvm_wavelength(const CrystalDatabase& db, std::string_view crystal, PmType type);

/// Signed ridge tilt in degrees:
///   tan θ = −(k'_p − k'_s)/(k'_p + k'_i)
/// evaluated at λ0/2 (pump) and λ0 (signal, idler).
double tilt_angle(const CrystalDatabase& db, std::string_view crystal, PmType type,
                  double lambda0_nm);

struct BisectionOptions {
  double relative_tolerance = 1e-12;  // |g| below this fraction of the bracket scale
  double x_tolerance = 1e-10;
  int max_iterations = 200;
};

/// Bracketed bisection; throws SolverError on a missing sign change or when the
/// iteration cap is reached first.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              const BisectionOptions& options = {});

}  // namespace cpspdc

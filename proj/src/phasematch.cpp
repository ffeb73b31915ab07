#include "cpspdc/phasematch.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cpspdc/error.hpp"
#include "cpspdc/units.hpp"

namespace cpspdc {

std::string_view to_string(PmType type) {
  switch (type) {
    case PmType::Type0:
      return "type0";
    case PmType::Type2A:
      return "type2a";
    case PmType::Type2B:
      return "type2b";
  }
  return "?";
}

PmType parse_pm_type(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "type0" || lower == "0") return PmType::Type0;
  if (lower == "type2a" || lower == "type2" || lower == "typeii" || lower == "2a") return PmType::Type2A;
  if (lower == "type2b" || lower == "typeiib" || lower == "2b") return PmType::Type2B;
  throw ValidationError(fmt::format("unknown phase-matching type '{}' (type0|type2a|type2b)", text));
}

AxisTriple axes_of(PmType type) {
  switch (type) {
    case PmType::Type0:
      return {OpticalAxis::Z, OpticalAxis::Z, OpticalAxis::Z};
    case PmType::Type2A:
      return {OpticalAxis::Y, OpticalAxis::Z, OpticalAxis::Y};
    case PmType::Type2B:
      return {OpticalAxis::Y, OpticalAxis::Y, OpticalAxis::Z};
  }
  return {OpticalAxis::Z, OpticalAxis::Z, OpticalAxis::Z};
}

void validate(const CrystalDatabase& db, const PhaseMatchConfig& config) {
  const CrystalRecord& rec = db.at(config.crystal);
  if (!(config.period_nm > 0.0)) throw ValidationError("poling period must be > 0");
  if (!(config.length_mm > 0.0)) throw ValidationError("crystal length must be > 0");
  const AxisTriple ax = axes_of(config.pm_type);
  const auto check = [&](OpticalAxis axis, double nm, const char* role) {
    if (!rec.model(axis).valid_range().contains(nm)) {
      throw DomainError(fmt::format("{}: {} wavelength {} nm outside the {}-axis validity range",
                                    config.crystal, role, nm, to_string(axis)));
    }
  };
  check(ax.pump, config.pump_center_nm(), "pump");
  check(ax.signal, config.lambda0_nm, "signal");
  check(ax.idler, config.lambda0_nm, "idler");
}

double qpm_wavevector(double period_nm) { return kTwoPi / nm_to_um(period_nm); }

double delta_k(const CrystalDatabase& db, const PhaseMatchConfig& config, double signal_nm,
               double idler_nm) {
  const AxisTriple ax = axes_of(config.pm_type);
  const double pump_nm = 1.0 / (1.0 / signal_nm + 1.0 / idler_nm);
  const double ks = wavevector(db, config.crystal, ax.signal, signal_nm);
  const double ki = wavevector(db, config.crystal, ax.idler, idler_nm);
  const double kp = wavevector(db, config.crystal, ax.pump, pump_nm);
  return ks - ki + qpm_wavevector(config.period_nm) - kp;
}

double poling_period(const CrystalDatabase& db, std::string_view crystal, PmType type,
                     double lambda0_nm) {
  const AxisTriple ax = axes_of(type);
  const double kp = wavevector(db, crystal, ax.pump, 0.5 * lambda0_nm);
  const double ks = wavevector(db, crystal, ax.signal, lambda0_nm);
  const double ki = wavevector(db, crystal, ax.idler, lambda0_nm);
  const double k_qpm = kp - ks + ki;
  if (!(k_qpm > 0.0)) {
    throw SolverError(fmt::format("{} {}: no positive QPM vector at {} nm", crystal, to_string(type),
                                  lambda0_nm));
  }
  return kTwoPi / k_qpm * 1e3;
}

double gvm_mismatch(const CrystalDatabase& db, std::string_view crystal, PmType type,
                    double lambda0_nm) {
  const AxisTriple ax = axes_of(type);
  return group_index(db, crystal, ax.pump, 0.5 * lambda0_nm) -
         group_index(db, crystal, ax.signal, lambda0_nm);
}

double bisect(const std::function<double(double)>& g, double lo, double hi,
              const BisectionOptions& options) {
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if (!std::isfinite(g_lo) || !std::isfinite(g_hi) || std::signbit(g_lo) == std::signbit(g_hi)) {
    throw SolverError(fmt::format("no sign change on bracket [{}, {}] (g = {:.6g}, {:.6g})", lo, hi,
                                  g_lo, g_hi));
  }
  const double scale = std::max(std::abs(g_lo), std::abs(g_hi));
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if (std::abs(g_mid) <= options.relative_tolerance * scale ||
        0.5 * (hi - lo) <= options.x_tolerance) {
      return mid;
    }
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  throw SolverError(fmt::format("bisection did not converge in {} iterations", options.max_iterations));
}

double gvm_wavelength(const CrystalDatabase& db, std::string_view crystal, PmType type,
                      Bracket bracket) {
  if (!(bracket.hi_nm > bracket.lo_nm)) {
    throw ValidationError(fmt::format("invalid bracket [{}, {}]", bracket.lo_nm, bracket.hi_nm));
  }
  const auto g = [&](double nm) { return gvm_mismatch(db, crystal, type, nm); };
  try {
    return bisect(g, bracket.lo_nm, bracket.hi_nm);
  } catch (const SolverError& e) {
    throw SolverError(fmt::format("{} {}: GVM search failed: {}", crystal, to_string(type), e.what()));
  }
}

Bracket default_gvm_bracket(const CrystalDatabase& db, std::string_view crystal, PmType type,
                            double scan_step_nm) {
  if (!(scan_step_nm > 0.0)) throw ValidationError("GVM scan step must be > 0");
  const CrystalRecord& rec = db.at(crystal);
  const AxisTriple ax = axes_of(type);
  const WavelengthRange& rp = rec.model(ax.pump).valid_range();
  const WavelengthRange& rs = rec.model(ax.signal).valid_range();
  const WavelengthRange& ri = rec.model(ax.idler).valid_range();
  const double lo = std::max({2.0 * rp.min_nm, rs.min_nm, ri.min_nm}) + scan_step_nm;
  const double hi = std::min({2.0 * rp.max_nm, rs.max_nm, ri.max_nm}) - scan_step_nm;
  if (!(hi > lo)) throw SolverError(fmt::format("{} {}: no wavelength range shared by all three axes", crystal, to_string(type)));
  double x0 = lo;
  double g0 = gvm_mismatch(db, crystal, type, x0);
  for (double x1 = lo + scan_step_nm; x1 <= hi; x1 += scan_step_nm) {
    const double g1 = gvm_mismatch(db, crystal, type, x1);
    if ((g0 < 0.0) != (g1 < 0.0)) return {x0, x1};
    x0 = x1;
    g0 = g1;
  }
  throw SolverError(fmt::format("{} {}: no group-velocity-matched wavelength in [{}, {}] nm", crystal,
                                to_string(type), lo, hi));
}

double gvm_wavelength(const CrystalDatabase& db, std::string_view crystal, PmType type) {
  return gvm_wavelength(db, crystal, type, default_gvm_bracket(db, crystal, type));
}

double tilt_angle(const CrystalDatabase& db, std::string_view crystal, PmType type,
                  double lambda0_nm) {
  const AxisTriple ax = axes_of(type);
  // Inverse group velocities share the factor 1/c, which cancels.
  const double p = group_index(db, crystal, ax.pump, 0.5 * lambda0_nm);
  const double s = group_index(db, crystal, ax.signal, lambda0_nm);
  const double i = group_index(db, crystal, ax.idler, lambda0_nm);
  return rad_to_deg(std::atan(-(p - s) / (p + i)));
}

}  // namespace cpspdc

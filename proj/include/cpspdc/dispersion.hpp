#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cpspdc {

/// Polarization axis of a wave inside the crystal. Only y and z are used by
/// the counter-propagating configurations handled here.
enum class OpticalAxis { Y, Z };

std::string_view to_string(OpticalAxis axis);
OpticalAxis parse_axis(std::string_view text);

/// Algebraic dispersion forms. λ is in µm inside the formulas.
///
///   kato2      n² = A + B/(λ² − C) + D/(λ² − E)            5 coefficients
///   feve       n² = A + B/(1 − (C/λ)²) − D·λ²               4 coefficients
///   sellmeier  n² = 1 + Σ_j B_j·λ²/(λ² − C_j)               2m coefficients
enum class DispersionForm { Kato2, Feve, Sellmeier };

std::string_view to_string(DispersionForm form);
DispersionForm parse_form(std::string_view text);

struct WavelengthRange {
  double min_nm = 0.0;
  double max_nm = 0.0;

  bool contains(double nm) const { return nm >= min_nm && nm <= max_nm; }
  bool contains_strictly(double nm) const { return nm > min_nm && nm < max_nm; }
  bool operator==(const WavelengthRange&) const = default;
};

/// One axis' refractive-index model.
class SellmeierModel {
 public:
  SellmeierModel(DispersionForm form, std::vector<double> coefficients, WavelengthRange valid_range);

  DispersionForm form() const { return form_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const WavelengthRange& valid_range() const { return valid_range_; }

  /// n(λ); throws DomainError outside the validity range.
  double index(double wavelength_nm) const;
  /// dn/dλ in 1/nm; throws DomainError unless λ is strictly inside the range.
  double index_slope(double wavelength_nm) const;
  /// n_g = n − λ·dn/dλ.
  double group_index(double wavelength_nm) const;

  /// Range checks skipped; used by validation and finite-difference oracles.
  double index_unchecked(double wavelength_nm) const;
  double index_slope_unchecked(double wavelength_nm) const;

  bool has_analytic_slope() const;

  bool operator==(const SellmeierModel&) const = default;

 private:
  double index_squared(double um) const;
  double index_squared_slope(double um) const;  // d(n²)/dλ in 1/µm

  DispersionForm form_;
  std::vector<double> coefficients_;
  WavelengthRange valid_range_;
};

/// Richardson-extrapolated central difference, f'(x) ≈ (4·D(h/2) − D(h))/3.
double richardson_derivative(const std::function<double(double)>& f, double x, double h);

struct CrystalRecord {
  std::string name;
  std::string composition;
  std::map<OpticalAxis, SellmeierModel> models;
  double d_eff_type0_pm_per_v = 0.0;
  double d_eff_type2_pm_per_v = 0.0;
  std::string source;

  const SellmeierModel& model(OpticalAxis axis) const;
  bool operator==(const CrystalRecord&) const = default;
};

class CrystalDatabase {
 public:
  CrystalDatabase() = default;
  explicit CrystalDatabase(std::vector<CrystalRecord> records, std::string checksum = {});

  const CrystalRecord& at(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::vector<std::string> names() const;
  std::size_t size() const { return records_.size(); }

  /// SHA-256 of the bytes the database was loaded from (empty when built in memory).
  const std::string& checksum() const { return checksum_; }

  const std::map<std::string, CrystalRecord, std::less<>>& records() const { return records_; }

 private:
  std::map<std::string, CrystalRecord, std::less<>> records_;
  std::string checksum_;
};

/// Validates one record against the type invariants; throws ValidationError
/// naming the record and field.
void validate_record(const CrystalRecord& record);

CrystalDatabase parse_database(std::string_view text, std::string_view origin = "<memory>");
CrystalDatabase load_database(const std::filesystem::path& path);
std::string serialize_database(const CrystalDatabase& db);
void save_database(const CrystalDatabase& db, const std::filesystem::path& path);

/// $CPSPDC_DB if set, otherwise the crystals.json shipped with the sources.
std::filesystem::path default_database_path();
const CrystalDatabase& default_database();

double refractive_index(const CrystalDatabase& db, std::string_view crystal, OpticalAxis axis,
                        double wavelength_nm);
double group_index(const CrystalDatabase& db, std::string_view crystal, OpticalAxis axis,
                   double wavelength_nm);
/// k = 2π·n/λ in rad/µm.
double wavevector(const CrystalDatabase& db, std::string_view crystal, OpticalAxis axis,
                  double wavelength_nm);

}  // namespace cpspdc

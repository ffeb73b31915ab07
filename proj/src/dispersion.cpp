#include "cpspdc/dispersion.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include "json.hpp"

#include "cpspdc/checksum.hpp"
#include "cpspdc/error.hpp"
#include "cpspdc/units.hpp"

#ifndef CPSPDC_DEFAULT_DB
#define CPSPDC_DEFAULT_DB "data/crystals.json"
#endif

namespace cpspdc {

using nlohmann::json;

std::string_view to_string(OpticalAxis axis) {
  return axis == OpticalAxis::Y ? "y" : "z";
}

OpticalAxis parse_axis(std::string_view text) {
  if (text == "y" || text == "Y") return OpticalAxis::Y;
  if (text == "z" || text == "Z") return OpticalAxis::Z;
  throw ValidationError(fmt::format("unknown optical axis '{}' (expected y or z)", text));
}

std::string_view to_string(DispersionForm form) {
  switch (form) {
    case DispersionForm::Kato2:
      return "kato2";
    case DispersionForm::Feve:
      return "feve";
    case DispersionForm::Sellmeier:
      return "sellmeier";
  }
  return "?";
}

DispersionForm parse_form(std::string_view text) {
  if (text == "kato2") return DispersionForm::Kato2;
  if (text == "feve") return DispersionForm::Feve;
  if (text == "sellmeier") return DispersionForm::Sellmeier;
  throw ValidationError(fmt::format("unknown dispersion form '{}'", text));
}

namespace {

bool arity_ok(DispersionForm form, std::size_t count) {
  switch (form) {
    case DispersionForm::Kato2:
      return count == 5;
    case DispersionForm::Feve:
      return count == 4;
    case DispersionForm::Sellmeier:
      return count >= 2 && count % 2 == 0;
  }
  return false;
}

}  // namespace

SellmeierModel::SellmeierModel(DispersionForm form, std::vector<double> coefficients,
                               WavelengthRange valid_range)
    : form_(form), coefficients_(std::move(coefficients)), valid_range_(valid_range) {
  if (!arity_ok(form_, coefficients_.size())) {
    throw ValidationError(fmt::format("form '{}' does not accept {} coefficients", to_string(form_),
                                      coefficients_.size()));
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw ValidationError("non-finite Sellmeier coefficient");
  }
  if (!(valid_range_.min_nm > 0.0) || !(valid_range_.max_nm > valid_range_.min_nm)) {
    throw ValidationError(fmt::format("empty validity range [{}, {}] nm", valid_range_.min_nm,
                                      valid_range_.max_nm));
  }
}

double SellmeierModel::index_squared(double um) const {
  const auto& c = coefficients_;
  const double l2 = um * um;
  switch (form_) {
    case DispersionForm::Kato2:
      return c[0] + c[1] / (l2 - c[2]) + c[3] / (l2 - c[4]);
    case DispersionForm::Feve:
      return c[0] + c[1] / (1.0 - c[2] * c[2] / l2) - c[3] * l2;
    case DispersionForm::Sellmeier: {
      double n2 = 1.0;
      for (std::size_t j = 0; j + 1 < c.size(); j += 2) n2 += c[j] * l2 / (l2 - c[j + 1]);
      return n2;
    }
  }
  return 0.0;
}

double SellmeierModel::index_squared_slope(double um) const {
  const auto& c = coefficients_;
  const double l2 = um * um;
  switch (form_) {
    case DispersionForm::Kato2: {
      const double a = l2 - c[2];
      const double b = l2 - c[4];
      return -2.0 * um * (c[1] / (a * a) + c[3] / (b * b));
    }
    case DispersionForm::Feve: {
      const double u = 1.0 - c[2] * c[2] / l2;
      const double du = 2.0 * c[2] * c[2] / (l2 * um);
      return -c[1] * du / (u * u) - 2.0 * c[3] * um;
    }
    case DispersionForm::Sellmeier: {
      double s = 0.0;
      for (std::size_t j = 0; j + 1 < c.size(); j += 2) {
        const double d = l2 - c[j + 1];
        s += -2.0 * um * c[j] * c[j + 1] / (d * d);
      }
      return s;
    }
  }
  return 0.0;
}

bool SellmeierModel::has_analytic_slope() const {
  // Every registered form has a closed-form derivative.
  return true;
}

double SellmeierModel::index_unchecked(double wavelength_nm) const {
  return std::sqrt(index_squared(nm_to_um(wavelength_nm)));
}

double SellmeierModel::index_slope_unchecked(double wavelength_nm) const {
  if (!has_analytic_slope()) {
    const double h = 1e-3 * wavelength_nm;
    return richardson_derivative([this](double x) { return index_unchecked(x); }, wavelength_nm, h);
  }
  const double um = nm_to_um(wavelength_nm);
  // d(n²)/dλ[1/µm] / (2n), then per nm.
  return index_squared_slope(um) / (2.0 * std::sqrt(index_squared(um))) * 1e-3;
}

double SellmeierModel::index(double wavelength_nm) const {
  if (!valid_range_.contains(wavelength_nm)) {
    throw DomainError(fmt::format("wavelength {} nm outside validity range [{}, {}] nm",
                                  wavelength_nm, valid_range_.min_nm, valid_range_.max_nm));
  }
  return index_unchecked(wavelength_nm);
}

double SellmeierModel::index_slope(double wavelength_nm) const {
  if (!valid_range_.contains_strictly(wavelength_nm)) {
    throw DomainError(fmt::format("wavelength {} nm not strictly inside validity range [{}, {}] nm",
                                  wavelength_nm, valid_range_.min_nm, valid_range_.max_nm));
  }
  return index_slope_unchecked(wavelength_nm);
}

double SellmeierModel::group_index(double wavelength_nm) const {
  const double slope = index_slope(wavelength_nm);
  return index_unchecked(wavelength_nm) - wavelength_nm * slope;
}

double richardson_derivative(const std::function<double(double)>& f, double x, double h) {
  const auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

const SellmeierModel& CrystalRecord::model(OpticalAxis axis) const {
  auto it = models.find(axis);
  if (it == models.end()) {
    throw ValidationError(fmt::format("{}/{}: no dispersion model", name, to_string(axis)));
  }
  return it->second;
}

void validate_record(const CrystalRecord& record) {
  if (record.name.empty()) throw ValidationError("crystal record with empty name");
  for (OpticalAxis axis : {OpticalAxis::Y, OpticalAxis::Z}) {
    auto it = record.models.find(axis);
    if (it == record.models.end()) {
      throw ValidationError(fmt::format("{}/{}: missing axis model", record.name, to_string(axis)));
    }
    const SellmeierModel& m = it->second;
    const auto& r = m.valid_range();
    constexpr int kSamples = 64;
    for (int s = 0; s <= kSamples; ++s) {
      const double nm = r.min_nm + (r.max_nm - r.min_nm) * s / kSamples;
      const double n = m.index_unchecked(nm);
      if (!std::isfinite(n) || !(n > 1.0)) {
        throw ValidationError(fmt::format("{}/{}: refractive index {} at {} nm is not > 1",
                                          record.name, to_string(axis), n, nm));
      }
    }
  }
  if (!(record.d_eff_type0_pm_per_v >= 0.0)) {
    throw ValidationError(fmt::format("{}/d_eff.type0: must be nonnegative", record.name));
  }
  if (!(record.d_eff_type2_pm_per_v >= 0.0)) {
    throw ValidationError(fmt::format("{}/d_eff.type2: must be nonnegative", record.name));
  }
}

CrystalDatabase::CrystalDatabase(std::vector<CrystalRecord> records, std::string checksum)
    : checksum_(std::move(checksum)) {
  for (auto& r : records) {
    validate_record(r);
    std::string name = r.name;
    if (!records_.emplace(name, std::move(r)).second) {
      throw ValidationError(fmt::format("duplicate crystal name '{}'", name));
    }
  }
}

const CrystalRecord& CrystalDatabase::at(std::string_view name) const {
  auto it = records_.find(name);
  if (it == records_.end()) throw UnknownCrystalError(std::string(name));
  return it->second;
}

bool CrystalDatabase::contains(std::string_view name) const {
  return records_.find(name) != records_.end();
}

std::vector<std::string> CrystalDatabase::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : records_) out.push_back(name);
  return out;
}

namespace {

constexpr std::string_view kFormatTag = "cpspdc-crystals/1";

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(fmt::format("{}: missing field '{}'", where, key));
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("{}/{}: {}", where, key, e.what()));
  }
}

SellmeierModel parse_model(const json& j, const std::string& where) {
  const auto form = parse_form(required<std::string>(j, "form", where));
  auto coefficients = required<std::vector<double>>(j, "coefficients", where);
  const auto range = required<std::vector<double>>(j, "valid_range_nm", where);
  if (range.size() != 2) {
    throw ValidationError(fmt::format("{}/valid_range_nm: expected [min, max]", where));
  }
  try {
    return SellmeierModel(form, std::move(coefficients), {range[0], range[1]});
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", where, e.what()));
  }
}

CrystalRecord parse_record(const json& j, std::size_t index) {
  const std::string fallback = fmt::format("crystals[{}]", index);
  CrystalRecord r;
  r.name = required<std::string>(j, "name", fallback);
  const std::string& where = r.name;
  r.composition = j.value("composition", "");
  r.source = j.value("source", "");
  const json deff = j.contains("d_eff_pm_per_v") ? j.at("d_eff_pm_per_v") : json::object();
  r.d_eff_type0_pm_per_v = deff.value("type0", 0.0);
  r.d_eff_type2_pm_per_v = deff.value("type2", 0.0);
  if (!j.contains("axes") || !j.at("axes").is_object()) {
    throw ValidationError(fmt::format("{}: missing field 'axes'", where));
  }
  for (const auto& [key, value] : j.at("axes").items()) {
    if (key != "y" && key != "z") {
      throw ValidationError(fmt::format("{}: unknown axis '{}' (expected y or z)", where, key));
    }
    const OpticalAxis axis = parse_axis(key);
    r.models.emplace(axis, parse_model(value, where + "/" + key));
  }
  validate_record(r);
  return r;
}

}  // namespace

CrystalDatabase parse_database(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
  if (!doc.is_object() || !doc.contains("crystals") || !doc.at("crystals").is_array()) {
    throw ParseError(fmt::format("{}: expected an object with a 'crystals' array", origin));
  }
  if (doc.contains("format") && doc.at("format") != kFormatTag) {
    throw ParseError(fmt::format("{}: unsupported format tag {}", origin, doc.at("format").dump()));
  }
  std::vector<CrystalRecord> records;
  const auto& list = doc.at("crystals");
  for (std::size_t i = 0; i < list.size(); ++i) records.push_back(parse_record(list[i], i));
  return CrystalDatabase(std::move(records), sha256_hex(text));
}

CrystalDatabase load_database(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_database(text, path.string());
}

std::string serialize_database(const CrystalDatabase& db) {
  json list = json::array();
  for (const auto& [name, r] : db.records()) {
    json axes = json::object();
    for (const auto& [axis, m] : r.models) {
      axes[std::string(to_string(axis))] = {
          {"form", std::string(to_string(m.form()))},
          {"coefficients", m.coefficients()},
          {"valid_range_nm", {m.valid_range().min_nm, m.valid_range().max_nm}},
      };
    }
    list.push_back({
        {"name", r.name},
        {"composition", r.composition},
        {"source", r.source},
        {"d_eff_pm_per_v", {{"type0", r.d_eff_type0_pm_per_v}, {"type2", r.d_eff_type2_pm_per_v}}},
        {"axes", axes},
    });
  }
  json doc = {{"format", kFormatTag}, {"crystals", list}};
  return doc.dump(2) + "\n";
}

void save_database(const CrystalDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << serialize_database(db);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::filesystem::path default_database_path() {
  if (const char* env = std::getenv("CPSPDC_DB"); env != nullptr && *env != '\0') return env;
  return CPSPDC_DEFAULT_DB;
}

const CrystalDatabase& default_database() {
  static const CrystalDatabase db = load_database(default_database_path());
  return db;
}

double refractive_index(const CrystalDatabase& db, std::string_view crystal, OpticalAxis axis,
                        double wavelength_nm) {
  return db.at(crystal).model(axis).index(wavelength_nm);
}

double group_index(const CrystalDatabase& db, std::string_view crystal, OpticalAxis axis,
                   double wavelength_nm) {
  return db.at(crystal).model(axis).group_index(wavelength_nm);
}

double wavevector(const CrystalDatabase& db, std::string_view crystal, OpticalAxis axis,
                  double wavelength_nm) {
  const double n = refractive_index(db, crystal, axis, wavelength_nm);
  return kTwoPi * n / nm_to_um(wavelength_nm);
}

}  // namespace cpspdc

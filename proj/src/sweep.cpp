#include "cpspdc/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "cpspdc/error.hpp"
#include "cpspdc/schmidt.hpp"
#include "json.hpp"

namespace cpspdc {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Lambda0: return "lambda0";
    case SweepVariable::Length: return "length";
    case SweepVariable::Width: return "width";
  }
  return "?";
}

std::string_view to_string(SweepOutput o) {
  switch (o) {
    case SweepOutput::Period: return "period";
    case SweepOutput::Tilt: return "tilt";
    case SweepOutput::Purity: return "purity";
    case SweepOutput::IdlerFwhm: return "idler_fwhm";
  }
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view text) {
  if (text == "lambda0" || text == "lambda0_nm") return SweepVariable::Lambda0;
  if (text == "length" || text == "length_mm") return SweepVariable::Length;
  if (text == "width" || text == "width_nm") return SweepVariable::Width;
  throw ValidationError(fmt::format("unknown sweep variable '{}' (lambda0|length|width)", text));
}

SweepOutput parse_sweep_output(std::string_view text) {
  for (SweepOutput o : {SweepOutput::Period, SweepOutput::Tilt, SweepOutput::Purity, SweepOutput::IdlerFwhm}) {
    if (text == to_string(o)) return o;
  }
  throw ValidationError(fmt::format("unknown sweep output '{}' (period|tilt|purity|idler_fwhm)", text));
}

std::vector<double> SweepSpec::values() const {
  if (!(step > 0.0)) throw ValidationError("sweep: step must be > 0");
  if (stop < start) throw ValidationError("sweep: range is empty (stop < start)");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-9)) + 1;
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = start + static_cast<double>(k) * step;
  return v;
}

bool SweepSpec::wants(SweepOutput o) const { return std::find(outputs.begin(), outputs.end(), o) != outputs.end(); }

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(fmt::format("{}: unknown key '{}'", where, key));
    }
  }
}

double number_at(const json& j, const char* key, std::string_view where) {
  if (!j.at(key).is_number()) throw ParseError(fmt::format("{}: '{}' must be a number", where, key));
  return j.at(key).get<double>();
}

std::vector<SweepOutput> canonical_outputs(std::vector<SweepOutput> outs) {
  std::sort(outs.begin(), outs.end());
  outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
  return outs;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view json_text, std::string_view origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
  if (!j.is_object()) throw ParseError(fmt::format("{}: sweep spec must be a JSON object", origin));
  const std::string where(origin);
  try {
    reject_unknown_keys(j, {"crystals", "crystal", "pm_type", "variable", "range", "step", "fixed", "overrides",
                            "outputs", "grid", "threads"},
                        where);
    SweepSpec spec;
    if (j.contains("crystals")) {
      spec.crystals = j.at("crystals").get<std::vector<std::string>>();
    } else if (j.contains("crystal")) {
      spec.crystals = {j.at("crystal").get<std::string>()};
    } else {
      throw ParseError(where + ": missing 'crystals'");
    }
    if (spec.crystals.empty()) throw ParseError(where + ": 'crystals' is empty");
    if (j.contains("pm_type")) spec.pm_type = parse_pm_type(j.at("pm_type").get<std::string>());
    if (j.contains("variable")) spec.variable = parse_sweep_variable(j.at("variable").get<std::string>());
    const auto range = j.at("range").get<std::vector<double>>();
    if (range.size() != 2) throw ParseError(where + ": 'range' must be [start, stop]");
    spec.start = range[0];
    spec.stop = range[1];
    spec.step = number_at(j, "step", where);
    if (j.contains("fixed")) {
      const json& f = j.at("fixed");
      reject_unknown_keys(f, {"lambda0_nm", "length_mm", "width_nm"}, where + ": fixed");
      if (f.contains("lambda0_nm")) spec.lambda0_nm = number_at(f, "lambda0_nm", where);
      if (f.contains("length_mm")) spec.length_mm = number_at(f, "length_mm", where);
      if (f.contains("width_nm")) spec.width_nm = number_at(f, "width_nm", where);
    }
    if (j.contains("overrides")) {
      for (const auto& [name, o] : j.at("overrides").items()) {
        reject_unknown_keys(o, {"length_mm", "width_nm"}, where + ": overrides." + name);
        SweepOverride ov;
        if (o.contains("length_mm")) ov.length_mm = number_at(o, "length_mm", where);
        if (o.contains("width_nm")) ov.width_nm = number_at(o, "width_nm", where);
        spec.overrides[name] = ov;
      }
    }
    if (j.contains("outputs")) {
      spec.outputs.clear();
      for (const auto& o : j.at("outputs")) spec.outputs.push_back(parse_sweep_output(o.get<std::string>()));
    }
    spec.outputs = canonical_outputs(spec.outputs);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown_keys(g, {"n", "span", "half_span_nm", "auto_factor"}, where + ": grid");
      if (g.contains("n")) spec.jsa.n = g.at("n").get<std::size_t>();
      if (g.contains("span")) {
        const auto kind = g.at("span").get<std::string>();
        if (kind == "fixed") {
          spec.jsa.span.kind = SpanRule::Kind::Fixed;
        } else if (kind == "auto") {
          spec.jsa.span.kind = SpanRule::Kind::Auto;
        } else {
          throw ParseError(fmt::format("{}: grid.span must be 'fixed' or 'auto', got '{}'", where, kind));
        }
      }
      if (g.contains("half_span_nm")) spec.jsa.span.half_span_nm = number_at(g, "half_span_nm", where);
      if (g.contains("auto_factor")) spec.jsa.span.auto_factor = number_at(g, "auto_factor", where);
    }
    if (j.contains("threads")) spec.threads = j.at("threads").get<unsigned>();
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", where, e.what()));
  }
}

std::string serialize_sweep_spec(const SweepSpec& spec) {
  nlohmann::ordered_json j;
  j["crystals"] = spec.crystals;
  j["pm_type"] = std::string(to_string(spec.pm_type));
  j["variable"] = std::string(to_string(spec.variable));
  j["range"] = {spec.start, spec.stop};
  j["step"] = spec.step;
  j["fixed"] = {{"lambda0_nm", spec.lambda0_nm}, {"length_mm", spec.length_mm}, {"width_nm", spec.width_nm}};
  nlohmann::ordered_json ov = nlohmann::ordered_json::object();
  for (const auto& [name, o] : spec.overrides) {
    nlohmann::ordered_json e = nlohmann::ordered_json::object();
    if (o.length_mm) e["length_mm"] = *o.length_mm;
    if (o.width_nm) e["width_nm"] = *o.width_nm;
    ov[name] = e;
  }
  j["overrides"] = ov;
  std::vector<std::string> outs;
  for (SweepOutput o : spec.outputs) outs.emplace_back(to_string(o));
  j["outputs"] = outs;
  j["grid"] = {{"n", spec.jsa.n},
               {"span", spec.jsa.span.kind == SpanRule::Kind::Fixed ? "fixed" : "auto"},
               {"half_span_nm", spec.jsa.span.half_span_nm},
               {"auto_factor", spec.jsa.span.auto_factor}};
  return j.dump();
}

namespace {

struct PointParams {
  std::string crystal;
  double lambda0_nm;
  double length_mm;
  double width_nm;
};

std::vector<PointParams> expand(const SweepSpec& spec) {
  const std::vector<double> values = spec.values();
  std::vector<PointParams> points;
  points.reserve(values.size() * spec.crystals.size());
  for (const std::string& crystal : spec.crystals) {
    double length = spec.length_mm;
    double width = spec.width_nm;
    if (auto it = spec.overrides.find(crystal); it != spec.overrides.end()) {
      if (it->second.length_mm) length = *it->second.length_mm;
      if (it->second.width_nm) width = *it->second.width_nm;
    }
    for (double v : values) {
      PointParams p{crystal, spec.lambda0_nm, length, width};
      switch (spec.variable) {
        case SweepVariable::Lambda0: p.lambda0_nm = v; break;
        case SweepVariable::Length: p.length_mm = v; break;
        case SweepVariable::Width: p.width_nm = v; break;
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

void check_wavelength(const CrystalRecord& rec, PmType type, double lambda0_nm) {
  const AxisTriple ax = axes_of(type);
  const auto check = [&](OpticalAxis axis, double nm, const char* role) {
    const WavelengthRange r = rec.model(axis).valid_range();
    if (!r.contains_strictly(nm)) {
      throw ValidationError(fmt::format("sweep: {} {} wavelength {} nm outside {}/{} validity [{}, {}] nm", rec.name,
                                        role, nm, rec.name, to_string(axis), r.min_nm, r.max_nm));
    }
  };
  check(ax.pump, 0.5 * lambda0_nm, "pump");
  check(ax.signal, lambda0_nm, "signal");
  check(ax.idler, lambda0_nm, "idler");
}

}  // namespace

void validate(const CrystalDatabase& db, const SweepSpec& spec) {
  if (spec.crystals.empty()) throw ValidationError("sweep: no crystals");
  const std::vector<double> values = spec.values();
  if (spec.jsa.n < 2) throw ValidationError("sweep: grid n must be >= 2");
  for (const auto& [name, _] : spec.overrides) {
    if (std::find(spec.crystals.begin(), spec.crystals.end(), name) == spec.crystals.end()) {
      throw ValidationError(fmt::format("sweep: override for '{}' which is not swept", name));
    }
  }
  for (const PointParams& p : expand(spec)) {
    const CrystalRecord& rec = db.at(p.crystal);
    if (!(p.length_mm > 0.0)) throw ValidationError(fmt::format("sweep: length must be > 0 (got {})", p.length_mm));
    if (!(p.width_nm > 0.0)) throw ValidationError(fmt::format("sweep: pump width must be > 0 (got {})", p.width_nm));
    check_wavelength(rec, spec.pm_type, p.lambda0_nm);
  }
}

double idler_fwhm_nm(const CrystalDatabase& db, const PhaseMatchConfig& config, const PumpSpec& pump) {
  constexpr std::size_t kN = 200;
  const double idler_half = 10.0 * estimated_idler_fwhm_nm(db, config);
  SpectralGrid grid = SpectralGrid::centered(config.lambda0_nm, 3.0, idler_half, kN);
  Eigen::MatrixXcd f = sample_jsa(db, config, pump, grid);
  const JsaMatrix jsa = JsaMatrix::normalized(std::move(grid), std::move(f));
  return marginal_spectra(jsa).idler.fwhm_nm;
}

SweepRow evaluate_point(const CrystalDatabase& db, std::string_view crystal, PmType type, double lambda0_nm,
                        double length_mm, double width_nm, const std::vector<SweepOutput>& outputs,
                        const JsaOptions& jsa) {
  const auto wants = [&](SweepOutput o) { return std::find(outputs.begin(), outputs.end(), o) != outputs.end(); };
  SweepRow row;
  row.crystal = std::string(crystal);
  row.lambda0_nm = lambda0_nm;
  row.length_mm = length_mm;
  row.width_nm = width_nm;
  row.period_nm = poling_period(db, crystal, type, lambda0_nm);
  row.tilt_deg = wants(SweepOutput::Tilt) ? tilt_angle(db, crystal, type, lambda0_nm) : kNaN;
  const PhaseMatchConfig config{row.crystal, type, lambda0_nm, row.period_nm, length_mm};
  const PumpSpec pump{lambda0_nm, width_nm};
  row.purity = wants(SweepOutput::Purity) ? purity(compute_jsa(db, config, pump, jsa)) : kNaN;
  if (wants(SweepOutput::IdlerFwhm)) {
    row.idler_fwhm_nm = idler_fwhm_nm(db, config, pump);
    row.idler_fwhm_ghz = bandwidth_nm_to_ghz(lambda0_nm, row.idler_fwhm_nm);
  } else {
    row.idler_fwhm_nm = kNaN;
    row.idler_fwhm_ghz = kNaN;
  }
  if (!wants(SweepOutput::Period)) row.period_nm = kNaN;
  return row;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;
  const auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (k < error_index) {
          error_index = k;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SweepRow> run_sweep(const CrystalDatabase& db, const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row) {
  validate(db, spec);
  const std::vector<PointParams> points = expand(spec);
  std::vector<SweepRow> rows(points.size());
  const unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
  const std::size_t block = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(threads));
  for (std::size_t begin = 0; begin < points.size(); begin += block) {
    const std::size_t end = std::min(points.size(), begin + block);
    parallel_for(end - begin, threads, [&](std::size_t k) {
      const PointParams& p = points[begin + k];
      rows[begin + k] =
          evaluate_point(db, p.crystal, spec.pm_type, p.lambda0_nm, p.length_mm, p.width_nm, spec.outputs, spec.jsa);
    });
    if (on_row) {
      for (std::size_t k = begin; k < end; ++k) on_row(rows[k]);
    }
  }
  return rows;
}

std::vector<SweepRow> purity_vs_wavelength(const CrystalDatabase& db, std::string_view crystal, PmType type,
                                           double length_mm, double width_nm, double lo_nm, double hi_nm,
                                           double step_nm, const JsaOptions& jsa) {
  SweepSpec spec;
  spec.crystals = {std::string(crystal)};
  spec.pm_type = type;
  spec.variable = SweepVariable::Lambda0;
  spec.start = lo_nm;
  spec.stop = hi_nm;
  spec.step = step_nm;
  spec.length_mm = length_mm;
  spec.width_nm = width_nm;
  spec.outputs = {SweepOutput::Period, SweepOutput::Tilt, SweepOutput::Purity};
  spec.jsa = jsa;
  return run_sweep(db, spec);
}

std::vector<SweepRow> idler_bandwidth_vs_length(const CrystalDatabase& db, std::string_view crystal, PmType type,
                                                double lambda0_nm, double width_nm,
                                                const std::vector<double>& lengths_mm) {
  if (lengths_mm.empty()) throw ValidationError("idler bandwidth: no lengths given");
  std::vector<SweepRow> rows(lengths_mm.size());
  parallel_for(lengths_mm.size(), 0, [&](std::size_t k) {
    if (!(lengths_mm[k] > 0.0)) throw ValidationError("idler bandwidth: length must be > 0");
    rows[k] = evaluate_point(db, crystal, type, lambda0_nm, lengths_mm[k], width_nm,
                             {SweepOutput::Period, SweepOutput::IdlerFwhm});
  });
  return rows;
}

namespace {

std::vector<double> log_grid(ParameterRange r, std::size_t n, const char* name) {
  if (!(r.lo > 0.0) || !(r.hi >= r.lo)) {
    throw ValidationError(fmt::format("optimize: {} range must satisfy 0 < lo <= hi", name));
  }
  if (r.lo == r.hi || n == 1) return {r.lo};
  std::vector<double> v(n);
  const double ratio = std::log(r.hi / r.lo);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = r.lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  v.back() = r.hi;
  return v;
}

/// True when a ranks ahead of b: higher purity, then smaller L, then smaller Δλ.
bool ranks_ahead(const OptimizationPoint& a, const OptimizationPoint& b) {
  if (std::isnan(b.purity)) return !std::isnan(a.purity);
  if (std::isnan(a.purity)) return false;
  if (a.purity != b.purity) return a.purity > b.purity;
  if (a.length_mm != b.length_mm) return a.length_mm < b.length_mm;
  return a.width_nm < b.width_nm;
}

}  // namespace

OptimizationResult optimize_purity(const CrystalDatabase& db, std::string_view crystal, PmType type,
                                   double lambda0_nm, ParameterRange length_mm, ParameterRange width_nm,
                                   const OptimizeOptions& options) {
  if (options.grid == 0) throw ValidationError("optimize: grid size must be >= 1");
  const std::vector<double> lengths = log_grid(length_mm, options.grid, "length");
  const std::vector<double> widths = log_grid(width_nm, options.grid, "width");
  const double period = poling_period(db, crystal, type, lambda0_nm);
  const std::string name(crystal);

  const auto evaluate = [&](std::vector<OptimizationPoint>& pts) {
    parallel_for(pts.size(), options.threads, [&](std::size_t k) {
      OptimizationPoint& p = pts[k];
      try {
        const PhaseMatchConfig config{name, type, lambda0_nm, period, p.length_mm};
        p.purity = purity(compute_jsa(db, config, PumpSpec{lambda0_nm, p.width_nm}, options.jsa));
      } catch (const ValidationError&) {
        p.purity = kNaN;
      } catch (const SolverError&) {
        p.purity = kNaN;
      }
    });
  };

  OptimizationResult result;
  for (double l : lengths) {
    for (double w : widths) result.evaluations.push_back({l, w, kNaN, false});
  }
  evaluate(result.evaluations);

  const auto best_of = [](const std::vector<OptimizationPoint>& pts) {
    return *std::min_element(pts.begin(), pts.end(),
                             [](const OptimizationPoint& a, const OptimizationPoint& b) { return ranks_ahead(a, b); });
  };
  OptimizationPoint best = best_of(result.evaluations);
  if (std::isnan(best.purity)) throw SolverError("optimize: no grid point could be evaluated");

  if (options.refine) {
    const auto half_steps = [&](const std::vector<double>& g, ParameterRange r, double centre) {
      std::vector<double> out{centre};
      if (g.size() < 2) return out;
      const double h = 0.5 * std::log(r.hi / r.lo) / static_cast<double>(g.size() - 1);
      for (double s : {-h, h}) {
        const double v = centre * std::exp(s);
        if (v >= r.lo && v <= r.hi) out.push_back(v);
      }
      return out;
    };
    std::vector<OptimizationPoint> extra;
    for (double l : half_steps(lengths, length_mm, best.length_mm)) {
      for (double w : half_steps(widths, width_nm, best.width_nm)) {
        if (l == best.length_mm && w == best.width_nm) continue;
        extra.push_back({l, w, kNaN, true});
      }
    }
    evaluate(extra);
    result.evaluations.insert(result.evaluations.end(), extra.begin(), extra.end());
    best = best_of(result.evaluations);
  }
  result.best_length_mm = best.length_mm;
  result.best_width_nm = best.width_nm;
  result.best_purity = best.purity;
  return result;
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json-lines" || text == "jsonl") return OutputFormat::JsonLines;
  throw ValidationError(fmt::format("unknown output format '{}' (csv|json-lines)", text));
}

std::string format6(double x) {
  if (!std::isfinite(x)) return "nan";
  return fmt::format("{:.6g}", x);
}

namespace {

json number6(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt::format("{:.6g}", x));
}

void write_header(std::ostream& out, OutputFormat format,
                  const std::vector<std::pair<std::string, std::string>>& header) {
  if (format == OutputFormat::Csv) {
    for (const auto& [k, v] : header) out << "# " << k << ": " << v << '\n';
  } else {
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    for (const auto& [k, v] : header) h[k] = v;
    out << nlohmann::ordered_json{{"header", h}}.dump() << '\n';
  }
}

}  // namespace

SweepWriter::SweepWriter(std::ostream& out, OutputFormat format, const SweepSpec& spec,
                         const std::vector<std::pair<std::string, std::string>>& header)
    : out_(out), format_(format), variable_(spec.variable), outputs_(canonical_outputs(spec.outputs)) {
  auto full = header;
  full.emplace_back("sweep_spec", serialize_sweep_spec(spec));
  write_header(out_, format_, full);
  if (format_ == OutputFormat::Csv) {
    out_ << "crystal,lambda0_nm,length_mm,width_nm";
    for (SweepOutput o : outputs_) {
      switch (o) {
        case SweepOutput::Period: out_ << ",period_nm"; break;
        case SweepOutput::Tilt: out_ << ",tilt_deg"; break;
        case SweepOutput::Purity: out_ << ",purity"; break;
        case SweepOutput::IdlerFwhm: out_ << ",idler_fwhm_nm,idler_fwhm_ghz"; break;
      }
    }
    out_ << '\n';
  }
}

void SweepWriter::write(const SweepRow& row) {
  if (format_ == OutputFormat::Csv) {
    out_ << row.crystal << ',' << format6(row.lambda0_nm) << ',' << format6(row.length_mm) << ','
         << format6(row.width_nm);
    for (SweepOutput o : outputs_) {
      switch (o) {
        case SweepOutput::Period: out_ << ',' << format6(row.period_nm); break;
        case SweepOutput::Tilt: out_ << ',' << format6(row.tilt_deg); break;
        case SweepOutput::Purity: out_ << ',' << format6(row.purity); break;
        case SweepOutput::IdlerFwhm:
          out_ << ',' << format6(row.idler_fwhm_nm) << ',' << format6(row.idler_fwhm_ghz);
          break;
      }
    }
    out_ << '\n';
  } else {
    nlohmann::ordered_json j;
    j["crystal"] = row.crystal;
    j["lambda0_nm"] = number6(row.lambda0_nm);
    j["length_mm"] = number6(row.length_mm);
    j["width_nm"] = number6(row.width_nm);
    for (SweepOutput o : outputs_) {
      switch (o) {
        case SweepOutput::Period: j["period_nm"] = number6(row.period_nm); break;
        case SweepOutput::Tilt: j["tilt_deg"] = number6(row.tilt_deg); break;
        case SweepOutput::Purity: j["purity"] = number6(row.purity); break;
        case SweepOutput::IdlerFwhm:
          j["idler_fwhm_nm"] = number6(row.idler_fwhm_nm);
          j["idler_fwhm_ghz"] = number6(row.idler_fwhm_ghz);
          break;
      }
    }
    out_ << j.dump() << '\n';
  }
  out_.flush();
}

void write_optimization(std::ostream& out, OutputFormat format, const OptimizationResult& result,
                        const std::vector<std::pair<std::string, std::string>>& header) {
  auto full = header;
  full.emplace_back("best_length_mm", format6(result.best_length_mm));
  full.emplace_back("best_width_nm", format6(result.best_width_nm));
  full.emplace_back("best_purity", format6(result.best_purity));
  write_header(out, format, full);
  if (format == OutputFormat::Csv) out << "length_mm,width_nm,purity,refinement\n";
  for (const OptimizationPoint& p : result.evaluations) {
    if (format == OutputFormat::Csv) {
      out << format6(p.length_mm) << ',' << format6(p.width_nm) << ',' << format6(p.purity) << ','
          << (p.refinement ? 1 : 0) << '\n';
    } else {
      nlohmann::ordered_json j;
      j["length_mm"] = number6(p.length_mm);
      j["width_nm"] = number6(p.width_nm);
      j["purity"] = number6(p.purity);
      j["refinement"] = p.refinement;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace cpspdc

#include "cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>
#include <variant>

#include "CLI11.hpp"
#include "cpspdc/checksum.hpp"
#include "cpspdc/dispersion.hpp"
#include "cpspdc/error.hpp"
#include "cpspdc/hom.hpp"
#include "cpspdc/jsa.hpp"
#include "cpspdc/manifest.hpp"
#include "cpspdc/phasematch.hpp"
#include "cpspdc/schmidt.hpp"
#include "cpspdc/sweep.hpp"

namespace cpspdc::cli {

namespace {

using Json = nlohmann::ordered_json;
using Field = std::pair<std::string, std::variant<std::string, double, long long>>;
using Record = std::vector<Field>;

struct Common {
  std::string db_path;
  std::string out_path;
  std::string format = "csv";
};

struct Context {
  const Common& common;
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;
  std::unique_ptr<CrystalDatabase> db;
  std::string db_path;

  const CrystalDatabase& database() {
    if (!db) {
      db_path = common.db_path.empty() ? default_database_path().string() : common.db_path;
      db = std::make_unique<CrystalDatabase>(load_database(db_path));
    }
    return *db;
  }

  OutputFormat format() const { return parse_output_format(common.format); }

  RunManifest manifest(Json parameters) {
    database();
    RunManifest m;
    m.command_line = args;
    m.database_path = db_path;
    m.database_sha256 = db->checksum();
    m.parameters = std::move(parameters);
    m.version = std::string(version());
    m.timestamp = utc_timestamp();
    return m;
  }

  std::vector<std::pair<std::string, std::string>> provenance() {
    database();
    return {{"tool", fmt::format("cpspdc {}", version())},
            {"database", db_path},
            {"database_sha256", db->checksum()}};
  }
};

std::string render_value(const Field::second_type& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return format6(*d);
  return std::to_string(std::get<long long>(v));
}

Json json_value(const Field::second_type& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return nullptr;
    return std::stod(format6(*d));
  }
  return std::get<long long>(v);
}

void write_records(std::ostream& os, OutputFormat format, const std::vector<Record>& records) {
  if (records.empty()) return;
  if (format == OutputFormat::Csv) {
    for (std::size_t k = 0; k < records.front().size(); ++k) os << (k ? "," : "") << records.front()[k].first;
    os << '\n';
    for (const Record& r : records) {
      for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << render_value(r[k].second);
      os << '\n';
    }
  } else {
    for (const Record& r : records) {
      Json j = Json::object();
      for (const auto& [key, value] : r) j[key] = json_value(value);
      os << j.dump() << '\n';
    }
  }
}

Json record_json(const Record& r) {
  Json j = Json::object();
  for (const auto& [key, value] : r) j[key] = json_value(value);
  return j;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  return f;
}

/// Writes small tabular results to --out (plus manifest) or to stdout.
void emit(Context& ctx, const std::vector<Record>& records, Json parameters) {
  if (ctx.common.out_path.empty()) {
    write_records(ctx.out, ctx.format(), records);
    return;
  }
  {
    std::ofstream f = open_output(ctx.common.out_path);
    write_records(f, ctx.format(), records);
    if (!f) throw IoError("write failed for '" + ctx.common.out_path + "'");
  }
  RunManifest m = ctx.manifest(std::move(parameters));
  m.outputs = {ctx.common.out_path};
  write_manifest(m, ctx.common.out_path);
}

SpanRule parse_span(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::optional<double> value;
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      value = std::stod(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("--span: cannot parse number in '{}'", text));
    }
  }
  if (kind == "auto") return SpanRule::automatic(value.value_or(5.0));
  if (kind == "fixed") return SpanRule::fixed(value.value_or(3.0));
  throw ValidationError(fmt::format("--span must be auto[:factor] or fixed[:half_span_nm], got '{}'", text));
}

std::string describe_span(const SpanRule& r) {
  return r.kind == SpanRule::Kind::Fixed ? fmt::format("fixed:{}", format6(r.half_span_nm))
                                         : fmt::format("auto:{}", format6(r.auto_factor));
}

struct SourceOptions {
  std::string crystal;
  std::string type = "type0";
  double lambda0 = 1550.0;
  double length = 5.0;
  double width = 0.16;
  std::size_t n = 200;
  std::string span = "auto";
  std::optional<double> period;
};

void add_source_options(CLI::App* cmd, SourceOptions& s, bool required) {
  auto* c = cmd->add_option("--crystal,-c", s.crystal, "Crystal name (e.g. PPKTP)");
  if (required) c->required();
  cmd->add_option("--type,-t", s.type, "Phase matching: type0 | type2a | type2b")->capture_default_str();
  cmd->add_option("--lambda0", s.lambda0, "Degenerate signal/idler wavelength, nm")->capture_default_str();
  cmd->add_option("--length,-L", s.length, "Crystal length, mm")->capture_default_str();
  cmd->add_option("--width,-w", s.width, "Pump width parameter Δλ, nm")->capture_default_str();
  cmd->add_option("--n", s.n, "Grid points per axis")->capture_default_str();
  cmd->add_option("--span", s.span, "auto[:factor] | fixed[:half_span_nm]")->capture_default_str();
  cmd->add_option("--period", s.period, "Poling period, nm (default: phase matched at lambda0)");
}

struct Source {
  PhaseMatchConfig config;
  PumpSpec pump;
  JsaOptions options;
};

Source resolve_source(Context& ctx, const SourceOptions& s) {
  const CrystalDatabase& db = ctx.database();
  Source src;
  src.config.crystal = s.crystal;
  src.config.pm_type = parse_pm_type(s.type);
  src.config.lambda0_nm = s.lambda0;
  src.config.length_mm = s.length;
  src.config.period_nm = s.period ? *s.period : poling_period(db, s.crystal, src.config.pm_type, s.lambda0);
  src.pump = PumpSpec{s.lambda0, s.width};
  src.options.span = parse_span(s.span);
  src.options.n = s.n;
  validate(db, src.config);
  validate(src.pump);
  return src;
}

Json source_json(const Source& src) {
  return Json{{"crystal", src.config.crystal},
              {"pm_type", std::string(to_string(src.config.pm_type))},
              {"lambda0_nm", src.config.lambda0_nm},
              {"period_nm", src.config.period_nm},
              {"length_mm", src.config.length_mm},
              {"width_nm", src.pump.width_nm},
              {"n", src.options.n},
              {"span", describe_span(src.options.span)}};
}

int cmd_gvm(Context& ctx, const std::string& crystal, const std::string& type_text,
            const std::vector<double>& bracket) {
  const CrystalDatabase& db = ctx.database();
  const PmType type = parse_pm_type(type_text);
  Bracket b{};
  if (bracket.empty()) {
    b = default_gvm_bracket(db, crystal, type);
  } else {
    b = Bracket{bracket[0], bracket[1]};
  }
  const double l = gvm_wavelength(db, crystal, type, b);
  const Record r{{"crystal", crystal},
                 {"pm_type", std::string(to_string(type))},
                 {"lambda_gvm_nm", l},
                 {"period_nm", poling_period(db, crystal, type, l)},
                 {"tilt_deg", tilt_angle(db, crystal, type, l)}};
  Json p{{"crystal", crystal}, {"pm_type", std::string(to_string(type))}};
  if (!bracket.empty()) p["bracket_nm"] = bracket;
  emit(ctx, {r}, p);
  return kOk;
}

int cmd_period(Context& ctx, const std::string& crystal, const std::string& type_text,
               const std::vector<double>& lambdas, bool tilt) {
  const CrystalDatabase& db = ctx.database();
  const PmType type = parse_pm_type(type_text);
  std::vector<Record> rows;
  for (double l : lambdas) {
    Record r{{"crystal", crystal}, {"pm_type", std::string(to_string(type))}, {"lambda0_nm", l}};
    if (tilt) {
      r.emplace_back("tilt_deg", tilt_angle(db, crystal, type, l));
    } else {
      r.emplace_back("period_nm", poling_period(db, crystal, type, l));
    }
    rows.push_back(std::move(r));
  }
  emit(ctx, rows, Json{{"crystal", crystal}, {"pm_type", std::string(to_string(type))}, {"lambda0_nm", lambdas}});
  return kOk;
}

double fwhm_or_nan(Context& ctx, const MarginalSpectrum& m, const char* which) {
  if (std::isfinite(m.fwhm_nm)) return m.fwhm_nm;
  ctx.err << "warning: " << which << " marginal FWHM undefined (peak or half maximum at grid edge)\n";
  return m.fwhm_nm;
}

void write_marginals(const MarginalPair& m, const std::string& path) {
  std::ofstream f = open_output(path);
  f << "axis,wavelength_nm,intensity\n";
  for (std::size_t k = 0; k < m.signal.axis_nm.size(); ++k) {
    f << "signal," << format6(m.signal.axis_nm[k]) << ',' << format6(m.signal.intensity[k]) << '\n';
  }
  for (std::size_t k = 0; k < m.idler.axis_nm.size(); ++k) {
    f << "idler," << format6(m.idler.axis_nm[k]) << ',' << format6(m.idler.intensity[k]) << '\n';
  }
  if (!f) throw IoError("write failed for '" + path + "'");
}

bool wants_binary(const std::string& jsa_format, const std::string& path) {
  if (jsa_format == "binary" || jsa_format == "bin") return true;
  if (jsa_format == "csv") return false;
  if (jsa_format != "auto") throw ValidationError("--jsa-format must be auto, csv or binary");
  return path.size() >= 4 && path.substr(path.size() - 4) == ".bin";
}

int cmd_jsa(Context& ctx, const SourceOptions& so, const std::string& jsa_format, const std::string& marginals_path) {
  const CrystalDatabase& db = ctx.database();
  const Source src = resolve_source(ctx, so);
  const auto [sh, ih] = select_half_spans(db, src.config, src.pump, src.options.span);
  const JsaMatrix jsa = compute_jsa(db, src.config, src.pump, src.options);
  const SchmidtDecomposition d = decompose(jsa);
  const MarginalPair m = marginal_spectra(jsa, EdgePolicy::NaN);
  const Record r{{"crystal", src.config.crystal},
                 {"pm_type", std::string(to_string(src.config.pm_type))},
                 {"lambda0_nm", src.config.lambda0_nm},
                 {"period_nm", src.config.period_nm},
                 {"length_mm", src.config.length_mm},
                 {"width_nm", src.pump.width_nm},
                 {"n", static_cast<long long>(src.options.n)},
                 {"signal_half_span_nm", sh},
                 {"idler_half_span_nm", ih},
                 {"purity", purity(d)},
                 {"schmidt_number", schmidt_number(d)},
                 {"signal_fwhm_nm", fwhm_or_nan(ctx, m.signal, "signal")},
                 {"idler_fwhm_nm", fwhm_or_nan(ctx, m.idler, "idler")},
                 {"idler_fwhm_ghz", bandwidth_nm_to_ghz(src.config.lambda0_nm, m.idler.fwhm_nm)}};
  write_records(ctx.out, ctx.format(), {r});
  if (!marginals_path.empty()) write_marginals(m, marginals_path);
  if (!ctx.common.out_path.empty()) {
    const bool binary = wants_binary(jsa_format, ctx.common.out_path);
    if (binary) {
      write_jsa_binary(jsa, ctx.common.out_path);
    } else {
      write_jsa_csv(jsa, ctx.common.out_path);
    }
    Json p = source_json(src);
    p["jsa_format"] = binary ? "binary" : "csv";
    p["summary"] = record_json(r);
    RunManifest man = ctx.manifest(p);
    man.outputs = {ctx.common.out_path};
    if (!marginals_path.empty()) man.outputs.push_back(marginals_path);
    write_manifest(man, ctx.common.out_path);
  }
  return kOk;
}

void write_gnuplot_hom(const std::string& csv_path) {
  const std::string gp = csv_path + ".gp";
  std::ofstream f = open_output(gp);
  f << "set datafile separator ','\n"
       "set xlabel 'delay (ps)'\n"
       "set ylabel 'P4'\n"
       "set key off\n"
    << "plot '" << csv_path << "' every ::1 using 1:2 with lines\n";
}

int cmd_hom(Context& ctx, const SourceOptions& so, const std::string& jsa1_path, const std::string& jsa2_path,
            const std::string& pair_text, std::size_t points, std::optional<double> range_ps, bool gnuplot) {
  const InterferingPair pair = parse_pair(pair_text);
  std::optional<JsaMatrix> f1;
  std::optional<JsaMatrix> f2;
  Json p = Json::object();
  if (!jsa1_path.empty()) {
    f1 = read_jsa(jsa1_path);
    f2 = jsa2_path.empty() ? *f1 : read_jsa(jsa2_path);
    p["jsa"] = jsa1_path;
    p["jsa_sha256"] = sha256_hex(read_file(jsa1_path));
    if (!jsa2_path.empty()) {
      p["jsa2"] = jsa2_path;
      p["jsa2_sha256"] = sha256_hex(read_file(jsa2_path));
    }
  } else {
    if (so.crystal.empty()) throw ValidationError("hom: give --jsa FILE or --crystal with source parameters");
    const Source src = resolve_source(ctx, so);
    f1 = compute_jsa(ctx.database(), src.config, src.pump, src.options);
    f2 = *f1;
    p = source_json(src);
  }
  std::vector<double> delays;
  if (range_ps) {
    if (!(*range_ps > 0.0)) throw ValidationError("--range must be > 0");
    if (points < 3) throw ValidationError("--points must be >= 3");
    delays.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
      delays[k] = -*range_ps + 2.0 * *range_ps * static_cast<double>(k) / static_cast<double>(points - 1);
    }
  } else {
    delays = default_delays(*f1, pair, points);
  }
  const HomCurve curve = hom_curve(*f1, *f2, pair, delays);
  if (!std::isfinite(curve.dip_fwhm_ps)) {
    ctx.err << "warning: dip FWHM undefined (visibility below 0.5 or dip wider than the delay range)\n";
  }
  const Record r{{"pair", std::string(to_string(pair))},
                 {"visibility", curve.visibility},
                 {"dip_fwhm_ps", curve.dip_fwhm_ps},
                 {"half_depth_width_ps", curve.half_depth_width_ps},
                 {"baseline", curve.baseline},
                 {"minimum", curve.minimum},
                 {"purity_1", purity(*f1)},
                 {"purity_2", purity(*f2)}};
  write_records(ctx.out, ctx.format(), {r});
  if (!ctx.common.out_path.empty()) {
    write_hom_csv(curve, ctx.common.out_path);
    p["pair"] = std::string(to_string(pair));
    p["points"] = delays.size();
    p["range_ps"] = delays.back();
    p["summary"] = record_json(r);
    RunManifest man = ctx.manifest(p);
    man.outputs = {ctx.common.out_path};
    if (gnuplot) {
      write_gnuplot_hom(ctx.common.out_path);
      man.outputs.push_back(ctx.common.out_path + ".gp");
    }
    write_manifest(man, ctx.common.out_path);
  }
  return kOk;
}

int cmd_sweep(Context& ctx, const std::string& spec_path, std::optional<unsigned> threads) {
  const std::string text = read_file(spec_path);
  SweepSpec spec = parse_sweep_spec(text, spec_path);
  if (threads) spec.threads = *threads;
  const CrystalDatabase& db = ctx.database();
  validate(db, spec);
  auto header = ctx.provenance();
  header.emplace_back("spec_file", spec_path);
  header.emplace_back("spec_sha256", sha256_hex(text));
  if (ctx.common.out_path.empty()) {
    SweepWriter writer(ctx.out, ctx.format(), spec, header);
    run_sweep(db, spec, [&](const SweepRow& row) { writer.write(row); });
    return kOk;
  }
  {
    std::ofstream f = open_output(ctx.common.out_path);
    SweepWriter writer(f, ctx.format(), spec, header);
    run_sweep(db, spec, [&](const SweepRow& row) { writer.write(row); });
    if (!f) throw IoError("write failed for '" + ctx.common.out_path + "'");
  }
  Json p = Json::parse(serialize_sweep_spec(spec));
  p["spec_file"] = spec_path;
  RunManifest man = ctx.manifest(p);
  man.outputs = {ctx.common.out_path};
  write_manifest(man, ctx.common.out_path);
  return kOk;
}

int cmd_optimize(Context& ctx, const SourceOptions& so, const std::vector<double>& lengths,
                 const std::vector<double>& widths, std::size_t grid, bool no_refine) {
  const CrystalDatabase& db = ctx.database();
  const PmType type = parse_pm_type(so.type);
  OptimizeOptions opts;
  opts.grid = grid;
  opts.refine = !no_refine;
  opts.jsa.span = parse_span(so.span);
  opts.jsa.n = so.n;
  const OptimizationResult result =
      optimize_purity(db, so.crystal, type, so.lambda0, {lengths[0], lengths[1]}, {widths[0], widths[1]}, opts);
  const Record best{{"crystal", so.crystal},
                    {"pm_type", std::string(to_string(type))},
                    {"lambda0_nm", so.lambda0},
                    {"best_length_mm", result.best_length_mm},
                    {"best_width_nm", result.best_width_nm},
                    {"best_purity", result.best_purity},
                    {"evaluations", static_cast<long long>(result.evaluations.size())}};
  write_records(ctx.out, ctx.format(), {best});
  if (!ctx.common.out_path.empty()) {
    Json p{{"crystal", so.crystal},
           {"pm_type", std::string(to_string(type))},
           {"lambda0_nm", so.lambda0},
           {"length_range_mm", lengths},
           {"width_range_nm", widths},
           {"grid", grid},
           {"refine", !no_refine},
           {"n", so.n},
           {"span", describe_span(opts.jsa.span)}};
    {
      std::ofstream f = open_output(ctx.common.out_path);
      auto header = ctx.provenance();
      header.emplace_back("parameters", p.dump());
      write_optimization(f, ctx.format(), result, header);
      if (!f) throw IoError("write failed for '" + ctx.common.out_path + "'");
    }
    RunManifest man = ctx.manifest(p);
    man.outputs = {ctx.common.out_path};
    write_manifest(man, ctx.common.out_path);
  }
  return kOk;
}

int cmd_db_validate(Context& ctx) {
  const CrystalDatabase& db = ctx.database();
  std::vector<Record> rows;
  for (const auto& [name, rec] : db.records()) {
    for (const auto& [axis, model] : rec.models) {
      rows.push_back(Record{{"crystal", name},
                            {"axis", std::string(to_string(axis))},
                            {"form", std::string(to_string(model.form()))},
                            {"min_nm", model.valid_range().min_nm},
                            {"max_nm", model.valid_range().max_nm},
                            {"n_1550", model.valid_range().contains(1550.0) ? model.index(1550.0) : std::nan("")}});
    }
  }
  emit(ctx, rows, Json{{"database", ctx.db_path}});
  ctx.err << fmt::format("{}: {} crystals OK, sha256 {}\n", ctx.db_path, db.size(), db.checksum());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counter-propagating SPDC toolkit for KTP-family crystals"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Common common;
  app.add_option("--db", common.db_path, "Crystal database JSON (default: packaged file or $CPSPDC_DB)");
  app.add_option("--out,-o", common.out_path, "Output file; a <out>.manifest.json is written next to it");
  app.add_option("--format", common.format, "csv | json-lines")
      ->check(CLI::IsMember({"csv", "json-lines", "jsonl"}))
      ->capture_default_str();
  app.fallthrough();

  std::string crystal;
  std::string type = "type0";
  std::vector<double> bracket;
  auto* gvm = app.add_subcommand("gvm", "Group-velocity-matched wavelength, its poling period and tilt");
  gvm->add_option("--crystal,-c", crystal, "Crystal name")->required();
  gvm->add_option("--type,-t", type, "type0 | type2a | type2b")->capture_default_str();
  gvm->add_option("--bracket", bracket, "Search bracket lo hi, nm (default: scan)")->expected(2);

  std::vector<double> lambdas{1550.0};
  auto* period = app.add_subcommand("period", "Poling period phase matching degenerate emission at lambda0");
  period->add_option("--crystal,-c", crystal, "Crystal name")->required();
  period->add_option("--type,-t", type, "type0 | type2a | type2b")->capture_default_str();
  period->add_option("--lambda0", lambdas, "Degenerate wavelength(s), nm")->capture_default_str();

  auto* tilt = app.add_subcommand("tilt", "Signed phase-matching ridge tilt angle, degrees");
  tilt->add_option("--crystal,-c", crystal, "Crystal name")->required();
  tilt->add_option("--type,-t", type, "type0 | type2a | type2b")->capture_default_str();
  tilt->add_option("--lambda0", lambdas, "Degenerate wavelength(s), nm")->capture_default_str();

  SourceOptions source;
  std::string jsa_format = "auto";
  std::string marginals_path;
  auto* jsa = app.add_subcommand("jsa", "Sample the JSA; print purity, Schmidt number and marginal widths");
  add_source_options(jsa, source, true);
  jsa->add_option("--jsa-format", jsa_format, "auto | csv | binary (auto: .bin extension is binary)")
      ->capture_default_str();
  jsa->add_option("--marginals", marginals_path, "Write marginal spectra CSV here");

  std::string jsa1;
  std::string jsa2;
  std::string pair = "signal";
  std::size_t points = 201;
  std::optional<double> range_ps;
  bool gnuplot = false;
  auto* hom = app.add_subcommand("hom", "Heralded two-source HOM interference curve");
  add_source_options(hom, source, false);
  hom->add_option("--jsa", jsa1, "JSA file (CSV or binary) for both sources");
  hom->add_option("--jsa2", jsa2, "JSA file for the second source (default: same as --jsa)");
  hom->add_option("--pair", pair, "signal | idler: which photons interfere")->capture_default_str();
  hom->add_option("--points", points, "Number of delays")->capture_default_str();
  hom->add_option("--range", range_ps, "Delay half-range, ps (default: from the spectrum)");
  hom->add_flag("--gnuplot", gnuplot, "Also write <out>.gp");

  std::string spec_path;
  std::optional<unsigned> threads;
  auto* sweep = app.add_subcommand("sweep", "Run a JSON sweep spec");
  sweep->add_option("spec", spec_path, "Sweep spec JSON file")->required();
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::vector<double> length_range{1.0, 20.0};
  std::vector<double> width_range{0.05, 0.5};
  std::size_t grid = 25;
  bool no_refine = false;
  auto* optimize = app.add_subcommand("optimize", "Grid search of (L, Δλ) for maximal purity");
  optimize->add_option("--crystal,-c", source.crystal, "Crystal name")->required();
  optimize->add_option("--type,-t", source.type, "type0 | type2a | type2b")->capture_default_str();
  optimize->add_option("--lambda0", source.lambda0, "Degenerate wavelength, nm")->capture_default_str();
  optimize->add_option("--length-range", length_range, "L range lo hi, mm")->expected(2)->capture_default_str();
  optimize->add_option("--width-range", width_range, "Δλ range lo hi, nm")->expected(2)->capture_default_str();
  optimize->add_option("--grid", grid, "Grid points per parameter")->capture_default_str();
  optimize->add_option("--n", source.n, "JSA grid points per axis")->capture_default_str();
  optimize->add_option("--span", source.span, "auto[:factor] | fixed[:half_span_nm]")->capture_default_str();
  optimize->add_flag("--no-refine", no_refine, "Skip the halved-step refinement pass");

  auto* dbv = app.add_subcommand("db-validate", "Load and validate the crystal database");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  Context ctx{common, args, out, err, nullptr, {}};
  try {
    if (*gvm) return cmd_gvm(ctx, crystal, type, bracket);
    if (*period) return cmd_period(ctx, crystal, type, lambdas, false);
    if (*tilt) return cmd_period(ctx, crystal, type, lambdas, true);
    if (*jsa) return cmd_jsa(ctx, source, jsa_format, marginals_path);
    if (*hom) return cmd_hom(ctx, source, jsa1, jsa2, pair, points, range_ps, gnuplot);
    if (*sweep) return cmd_sweep(ctx, spec_path, threads);
    if (*optimize) return cmd_optimize(ctx, source, length_range, width_range, grid, no_refine);
    if (*dbv) return cmd_db_validate(ctx);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const GridBoundaryError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace cpspdc::cli

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpspdc/jsa.hpp"

namespace cpspdc {

enum class SweepVariable { Lambda0, Length, Width };
enum class SweepOutput { Period, Tilt, Purity, IdlerFwhm };

std::string_view to_string(SweepVariable v);
std::string_view to_string(SweepOutput o);
SweepVariable parse_sweep_variable(std::string_view text);
SweepOutput parse_sweep_output(std::string_view text);

/// Per-crystal replacement of the fixed L and Δλ.
struct SweepOverride {
  std::optional<double> length_mm;
  std::optional<double> width_nm;
};

struct SweepSpec {
  std::vector<std::string> crystals;
  PmType pm_type = PmType::Type0;
  SweepVariable variable = SweepVariable::Lambda0;
  double start = 1500.0;
  double stop = 2000.0;
  double step = 10.0;
  double lambda0_nm = 1550.0;
  double length_mm = 5.0;
  double width_nm = 0.16;
  std::map<std::string, SweepOverride> overrides;
  std::vector<SweepOutput> outputs{SweepOutput::Period, SweepOutput::Tilt, SweepOutput::Purity};
  JsaOptions jsa{};
  unsigned threads = 0;  // 0: hardware concurrency

  /// start, start + step, … up to stop (inclusive within step·1e-9).
  std::vector<double> values() const;
  bool wants(SweepOutput o) const;
};

/// JSON sweep description; see README for the schema.
SweepSpec parse_sweep_spec(std::string_view json_text, std::string_view origin = "<memory>");
std::string serialize_sweep_spec(const SweepSpec& spec);
/// Throws ValidationError for unknown crystals, step ≤ 0, an empty range or
/// sweep wavelengths outside a crystal's dispersion validity.
void validate(const CrystalDatabase& db, const SweepSpec& spec);

struct SweepRow {
  std::string crystal;
  double lambda0_nm = 0.0;
  double length_mm = 0.0;
  double width_nm = 0.0;
  double period_nm = 0.0;
  double tilt_deg = 0.0;
  double purity = 0.0;
  double idler_fwhm_nm = 0.0;
  double idler_fwhm_ghz = 0.0;
};

/// One sweep point; Λ is re-solved at the point's λ0.
SweepRow evaluate_point(const CrystalDatabase& db, std::string_view crystal, PmType type,
                        double lambda0_nm, double length_mm, double width_nm,
                        const std::vector<SweepOutput>& outputs, const JsaOptions& jsa = {});

/// Idler marginal FWHM on a grid resolved for the sinc width: signal ±3 nm,
/// idler ±10 estimated FWHMs, N = 200 on each axis.
double idler_fwhm_nm(const CrystalDatabase& db, const PhaseMatchConfig& config, const PumpSpec& pump);

/// Rows in spec order (crystal-major, then sweep value). `on_row`, when given,
/// is called in that same order as rows complete, independent of scheduling.
std::vector<SweepRow> run_sweep(const CrystalDatabase& db, const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row = {});

std::vector<SweepRow> purity_vs_wavelength(const CrystalDatabase& db, std::string_view crystal,
                                           PmType type, double length_mm, double width_nm,
                                           double lo_nm, double hi_nm, double step_nm,
                                           const JsaOptions& jsa = {});

std::vector<SweepRow> idler_bandwidth_vs_length(const CrystalDatabase& db, std::string_view crystal,
                                                PmType type, double lambda0_nm, double width_nm,
                                                const std::vector<double>& lengths_mm);

struct ParameterRange {
  double lo;
  double hi;
};

struct OptimizationPoint {
  double length_mm = 0.0;
  double width_nm = 0.0;
  double purity = 0.0;  // NaN when the point is invalid
  bool refinement = false;
};

struct OptimizationResult {
  double best_length_mm = 0.0;
  double best_width_nm = 0.0;
  double best_purity = 0.0;
  std::vector<OptimizationPoint> evaluations;
};

struct OptimizeOptions {
  std::size_t grid = 25;
  bool refine = true;
  JsaOptions jsa{};
  unsigned threads = 0;
};

/// Log-uniform grid search over (L, Δλ) followed by one pass at halved steps
/// around the incumbent. Ties go to smaller L, then smaller Δλ. Throws
/// SolverError if no grid point can be evaluated.
OptimizationResult optimize_purity(const CrystalDatabase& db, std::string_view crystal, PmType type,
                                   double lambda0_nm, ParameterRange length_mm,
                                   ParameterRange width_nm, const OptimizeOptions& options = {});

enum class OutputFormat { Csv, JsonLines };
OutputFormat parse_output_format(std::string_view text);

/// Streams rows with a "# key: value" provenance header (CSV) or one JSON
/// object per line. Numbers carry 6 significant digits.
class SweepWriter {
 public:
  SweepWriter(std::ostream& out, OutputFormat format, const SweepSpec& spec,
              const std::vector<std::pair<std::string, std::string>>& header);
  void write(const SweepRow& row);

 private:
  std::ostream& out_;
  OutputFormat format_;
  SweepVariable variable_;
  std::vector<SweepOutput> outputs_;
};

void write_optimization(std::ostream& out, OutputFormat format, const OptimizationResult& result,
                        const std::vector<std::pair<std::string, std::string>>& header);

/// Formats with 6 significant digits; "nan" for non-finite values.
std::string format6(double x);

/// Runs fn(0..n-1) on up to `threads` workers; fn must be safe to call
/// concurrently for different indices.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace cpspdc

#include "cpspdc/jsa.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cpspdc/checksum.hpp"
#include "cpspdc/error.hpp"
#include "cpspdc/units.hpp"

namespace cpspdc {

namespace {

constexpr double kSincHalfPower = 1.391557378251510;  // sinc²(x) = ½
constexpr char kBinaryMagic[8] = {'C', 'P', 'S', 'J', 'S', 'A', '0', '1'};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return out;
}

void validate_axis(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) {
    throw ValidationError(fmt::format("{} axis needs at least 2 samples (got {})", name, axis.size()));
  }
  const double step = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  if (!(step > 0.0)) throw ValidationError(fmt::format("{} axis must be strictly increasing", name));
  for (std::size_t k = 1; k < axis.size(); ++k) {
    const double d = axis[k] - axis[k - 1];
    if (!(d > 0.0) || std::abs(d - step) > 1e-6 * step) {
      throw ValidationError(fmt::format("{} axis is not uniformly spaced at index {}", name, k));
    }
  }
}

}  // namespace

double PumpSpec::fwhm_nm() const {
  const double l2 = lambda0_nm * lambda0_nm;
  const double d2 = width_nm * width_nm;
  return 2.0 * std::sqrt(std::log(2.0)) * l2 * width_nm * (l2 - d2) /
         (l2 * l2 + d2 * d2 - 2.0 * l2 * d2 * (1.0 + std::log(4.0)));
}

void validate(const PumpSpec& pump) {
  if (!(pump.lambda0_nm > 0.0)) throw ValidationError("pump: lambda0 must be > 0");
  if (!(pump.width_nm > 0.0)) throw ValidationError("pump: width must be > 0");
  if (!(pump.width_nm < 0.05 * pump.lambda0_nm)) {
    throw ValidationError("pump: width must be much smaller than lambda0");
  }
}

SpectralGrid SpectralGrid::centered(double lambda0_nm, double signal_half_span_nm,
                                    double idler_half_span_nm, std::size_t n) {
  SpectralGrid g;
  g.signal_nm = linspace(lambda0_nm - signal_half_span_nm, lambda0_nm + signal_half_span_nm, n);
  g.idler_nm = linspace(lambda0_nm - idler_half_span_nm, lambda0_nm + idler_half_span_nm, n);
  g.validate();
  return g;
}

void SpectralGrid::validate() const {
  validate_axis(signal_nm, "signal");
  validate_axis(idler_nm, "idler");
}

JsaMatrix::JsaMatrix(SpectralGrid grid, Eigen::MatrixXcd amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
  grid_.validate();
  if (static_cast<std::size_t>(amplitudes_.rows()) != grid_.signal_size() ||
      static_cast<std::size_t>(amplitudes_.cols()) != grid_.idler_size()) {
    throw ValidationError(fmt::format("JSA shape {}x{} does not match grid {}x{}", amplitudes_.rows(),
                                      amplitudes_.cols(), grid_.signal_size(), grid_.idler_size()));
  }
  if (!amplitudes_.allFinite()) throw ValidationError("JSA has non-finite entries");
}

JsaMatrix JsaMatrix::normalized(SpectralGrid grid, Eigen::MatrixXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("JSA is identically zero or non-finite; cannot normalize");
  }
  amplitudes /= norm;
  return JsaMatrix(std::move(grid), std::move(amplitudes));
}

JsaMatrix JsaMatrix::transposed() const {
  SpectralGrid g{grid_.idler_nm, grid_.signal_nm};
  return JsaMatrix(std::move(g), amplitudes_.transpose());
}

double pump_envelope(const PumpSpec& pump, double signal_nm, double idler_nm) {
  const double half = 0.5 * pump.lambda0_nm;
  const double sigma = pump.width_nm / (half * half - 0.25 * pump.width_nm * pump.width_nm);
  const double x = (1.0 / signal_nm + 1.0 / idler_nm - 1.0 / half) / sigma;
  return std::exp(-0.5 * x * x);
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double phase_matching_function(const CrystalDatabase& db, const PhaseMatchConfig& config,
                               double signal_nm, double idler_nm) {
  const double dk = delta_k(db, config, signal_nm, idler_nm);
  return sinc(0.5 * dk * mm_to_um(config.length_mm));
}

SpanRule SpanRule::scaled(double factor) const {
  SpanRule out = *this;
  out.half_span_nm *= factor;
  out.scale *= factor;
  return out;
}

double estimated_idler_fwhm_nm(const CrystalDatabase& db, const PhaseMatchConfig& config) {
  const CrystalRecord& rec = db.at(config.crystal);
  const AxisTriple ax = axes_of(config.pm_type);
  const double l0 = config.lambda0_nm;
  const double ng_p = rec.model(ax.pump).group_index(0.5 * l0);
  const double ng_i = rec.model(ax.idler).group_index(l0);
  const double c_um_per_ps = kSpeedOfLightNmPerPs * 1e-3;
  const double length_um = mm_to_um(config.length_mm);
  // Δk moves at rate (k'_i + k'_p) with the idler frequency.
  const double dk_rate = (ng_i + ng_p) / c_um_per_ps;
  const double d_omega = 2.0 * 2.0 * kSincHalfPower / (length_um * dk_rate);
  return l0 * l0 * d_omega / (kTwoPi * kSpeedOfLightNmPerPs);
}

std::pair<double, double> select_half_spans(const CrystalDatabase& db,
                                            const PhaseMatchConfig& config, const PumpSpec& pump,
                                            const SpanRule& rule) {
  if (rule.kind == SpanRule::Kind::Fixed) {
    if (!(rule.half_span_nm > 0.0)) throw ValidationError("span: half-span must be > 0");
    return {rule.half_span_nm, rule.half_span_nm};
  }
  if (!(rule.auto_factor > 0.0) || !(rule.scale > 0.0)) throw ValidationError("span: auto factor and scale must be > 0");
  const double l0 = config.lambda0_nm;
  const double idler_fwhm = estimated_idler_fwhm_nm(db, config);
  // ΔkL/2 = 100 where the FWHM corresponds to ΔkL/2 = ±kSincHalfPower.
  const double idler_one_percent = idler_fwhm * 50.0 / kSincHalfPower;
  // Along the ridge the signal follows the pump sum frequency.
  const double half = 0.5 * l0;
  const double sigma = pump.width_nm / (half * half - 0.25 * pump.width_nm * pump.width_nm);
  const double signal_fwhm = l0 * l0 * 2.0 * std::sqrt(std::log(2.0)) * sigma;
  const double signal_half = rule.auto_factor * signal_fwhm;
  const double idler_half = std::max(rule.auto_factor * idler_fwhm, idler_one_percent);
  return {rule.scale * signal_half, rule.scale * idler_half};
}

Eigen::MatrixXcd sample_jsa(const CrystalDatabase& db, const PhaseMatchConfig& config,
                            const PumpSpec& pump, const SpectralGrid& grid) {
  grid.validate();
  const CrystalRecord& rec = db.at(config.crystal);
  const AxisTriple ax = axes_of(config.pm_type);
  const SellmeierModel& mp = rec.model(ax.pump);
  const SellmeierModel& ms = rec.model(ax.signal);
  const SellmeierModel& mi = rec.model(ax.idler);

  const auto inside = [](const SellmeierModel& m, double lo, double hi) {
    return m.valid_range().contains(lo) && m.valid_range().contains(hi);
  };
  const double p_lo = 1.0 / (1.0 / grid.signal_nm.front() + 1.0 / grid.idler_nm.front());
  const double p_hi = 1.0 / (1.0 / grid.signal_nm.back() + 1.0 / grid.idler_nm.back());
  if (!inside(ms, grid.signal_nm.front(), grid.signal_nm.back()) ||
      !inside(mi, grid.idler_nm.front(), grid.idler_nm.back()) || !inside(mp, p_lo, p_hi)) {
    throw DomainError(fmt::format("{}: JSA grid extends outside the dispersion validity range",
                                  config.crystal));
  }

  const auto k_of = [](const SellmeierModel& m, double nm) { return kTwoPi * m.index_unchecked(nm) / nm_to_um(nm); };
  const std::size_t ns = grid.signal_size();
  const std::size_t ni = grid.idler_size();
  std::vector<double> ks(ns), ki(ni);
  for (std::size_t a = 0; a < ns; ++a) ks[a] = k_of(ms, grid.signal_nm[a]);
  for (std::size_t b = 0; b < ni; ++b) ki[b] = k_of(mi, grid.idler_nm[b]);

  const double k_qpm = qpm_wavevector(config.period_nm);
  const double half_length_um = 0.5 * mm_to_um(config.length_mm);
  Eigen::MatrixXcd f(ns, ni);
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < ni; ++b) {
      const double ls = grid.signal_nm[a];
      const double li = grid.idler_nm[b];
      const double lp = 1.0 / (1.0 / ls + 1.0 / li);
      const double dk = ks[a] - ki[b] + k_qpm - k_of(mp, lp);
      f(a, b) = pump_envelope(pump, ls, li) * sinc(dk * half_length_um);
    }
  }
  return f;
}

JsaMatrix compute_jsa(const CrystalDatabase& db, const PhaseMatchConfig& config,
                      const PumpSpec& pump, const JsaOptions& options) {
  validate(pump);
  validate(db, config);
  if (std::abs(pump.lambda0_nm - config.lambda0_nm) > 1e-9 * config.lambda0_nm) {
    throw ValidationError(fmt::format("pump lambda0 {} nm differs from configuration lambda0 {} nm",
                                      pump.lambda0_nm, config.lambda0_nm));
  }
  if (options.n < 2) throw ValidationError(fmt::format("grid size N = {} is too small (N >= 2)", options.n));
  const auto [signal_half, idler_half] = select_half_spans(db, config, pump, options.span);
  SpectralGrid grid = SpectralGrid::centered(config.lambda0_nm, signal_half, idler_half, options.n);
  Eigen::MatrixXcd f = sample_jsa(db, config, pump, grid);
  return JsaMatrix::normalized(std::move(grid), std::move(f));
}

double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw ValidationError("fwhm: need ≥ 3 matching samples");
  const auto peak_it = std::max_element(y.begin(), y.end());
  const auto peak = static_cast<std::size_t>(peak_it - y.begin());
  const double half = 0.5 * *peak_it;
  if (!(*peak_it > 0.0)) throw ValidationError("fwhm: no positive peak");
  if (peak == 0 || peak + 1 == y.size()) {
    throw GridBoundaryError("fwhm: peak lies on the grid boundary; widen the span");
  }
  std::size_t left = peak;
  while (left > 0 && y[left - 1] >= half) --left;
  if (left == 0) throw GridBoundaryError("fwhm: left half-maximum crossing lies outside the grid");
  std::size_t right = peak;
  while (right + 1 < y.size() && y[right + 1] >= half) ++right;
  if (right + 1 == y.size()) {
    throw GridBoundaryError("fwhm: right half-maximum crossing lies outside the grid");
  }
  const auto cross = [&](std::size_t lo, std::size_t hi) {
    return x[lo] + (half - y[lo]) / (y[hi] - y[lo]) * (x[hi] - x[lo]);
  };
  return cross(right, right + 1) - cross(left - 1, left);
}

MarginalPair marginal_spectra(const JsaMatrix& jsa, EdgePolicy policy) {
  const Eigen::MatrixXd jsi = jsa.intensity();
  const Eigen::VectorXd signal = jsi.rowwise().sum();
  const Eigen::VectorXd idler = jsi.colwise().sum().transpose();
  const auto make = [policy](const std::vector<double>& axis, const Eigen::VectorXd& v) {
    MarginalSpectrum m;
    m.axis_nm = axis;
    const double peak = v.maxCoeff();
    m.intensity.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) m.intensity[static_cast<std::size_t>(k)] = v[k] / peak;
    try {
      m.fwhm_nm = fwhm(m.axis_nm, m.intensity);
    } catch (const GridBoundaryError&) {
      if (policy == EdgePolicy::Throw) throw;
      m.fwhm_nm = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
  };
  return {make(jsa.grid().signal_nm, signal), make(jsa.grid().idler_nm, idler)};
}

double bandwidth_nm_to_ghz(double center_nm, double fwhm_nm) {
  // c[m/s]·Δλ[nm]/λ²[nm²] is in units of 1e9 Hz.
  return kSpeedOfLight * fwhm_nm / (center_nm * center_nm);
}

void write_jsa_csv(const JsaMatrix& jsa, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "signal_nm,idler_nm,re,im\n";
  const auto& g = jsa.grid();
  for (std::size_t a = 0; a < g.signal_size(); ++a) {
    for (std::size_t b = 0; b < g.idler_size(); ++b) {
      const auto v = jsa(a, b);
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", g.signal_nm[a], g.idler_nm[b], v.real(),
                         v.imag());
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_jsa_binary(const JsaMatrix& jsa, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "binary JSA layout is little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  const auto& g = jsa.grid();
  const std::uint64_t ns = g.signal_size();
  const std::uint64_t ni = g.idler_size();
  out.write(kBinaryMagic, sizeof kBinaryMagic);
  out.write(reinterpret_cast<const char*>(&ns), sizeof ns);
  out.write(reinterpret_cast<const char*>(&ni), sizeof ni);
  out.write(reinterpret_cast<const char*>(g.signal_nm.data()), static_cast<std::streamsize>(ns * sizeof(double)));
  out.write(reinterpret_cast<const char*>(g.idler_nm.data()), static_cast<std::streamsize>(ni * sizeof(double)));
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < ni; ++b) {
      const double pair[2] = {jsa(a, b).real(), jsa(a, b).imag()};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace {

JsaMatrix parse_binary(const std::string& bytes, const std::string& origin) {
  std::size_t pos = sizeof kBinaryMagic;
  const auto take = [&](void* dst, std::size_t n) {
    if (pos + n > bytes.size()) throw ParseError(origin + ": truncated binary JSA");
    std::memcpy(dst, bytes.data() + pos, n);
    pos += n;
  };
  std::uint64_t ns = 0, ni = 0;
  take(&ns, sizeof ns);
  take(&ni, sizeof ni);
  constexpr std::uint64_t kMax = 1u << 16;
  if (ns > kMax || ni > kMax) throw ParseError(origin + ": implausible JSA dimensions");
  SpectralGrid g;
  g.signal_nm.resize(ns);
  g.idler_nm.resize(ni);
  take(g.signal_nm.data(), ns * sizeof(double));
  take(g.idler_nm.data(), ni * sizeof(double));
  Eigen::MatrixXcd f(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni));
  for (std::uint64_t a = 0; a < ns; ++a) {
    for (std::uint64_t b = 0; b < ni; ++b) {
      double pair[2];
      take(pair, sizeof pair);
      f(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = {pair[0], pair[1]};
    }
  }
  if (pos != bytes.size()) throw ParseError(origin + ": trailing bytes after binary JSA");
  return JsaMatrix(std::move(g), std::move(f));
}

JsaMatrix parse_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("signal_nm,idler_nm,re,im", 0) != 0) {
    throw ParseError(origin + ":1: expected header 'signal_nm,idler_nm,re,im'");
  }
  struct Entry {
    double s, i, re, im;
  };
  std::vector<Entry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    Entry e{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &e.s, &e.i, &e.re, &e.im) != 4) {
      throw ParseError(fmt::format("{}:{}: expected four comma-separated numbers", origin, line_no));
    }
    entries.push_back(e);
  }
  std::map<double, std::size_t> signal_index, idler_index;
  for (const auto& e : entries) {
    signal_index.emplace(e.s, 0);
    idler_index.emplace(e.i, 0);
  }
  SpectralGrid g;
  for (auto& [v, k] : signal_index) {
    k = g.signal_nm.size();
    g.signal_nm.push_back(v);
  }
  for (auto& [v, k] : idler_index) {
    k = g.idler_nm.size();
    g.idler_nm.push_back(v);
  }
  if (entries.size() != g.signal_size() * g.idler_size()) {
    throw ParseError(fmt::format("{}: {} rows do not fill a {}x{} grid", origin, entries.size(),
                                 g.signal_size(), g.idler_size()));
  }
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(g.signal_size()),
                                              static_cast<Eigen::Index>(g.idler_size()));
  for (const auto& e : entries) {
    f(static_cast<Eigen::Index>(signal_index.at(e.s)), static_cast<Eigen::Index>(idler_index.at(e.i))) = {e.re, e.im};
  }
  return JsaMatrix(std::move(g), std::move(f));
}

}  // namespace

JsaMatrix read_jsa(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= sizeof kBinaryMagic && std::memcmp(bytes.data(), kBinaryMagic, sizeof kBinaryMagic) == 0) {
    return parse_binary(bytes, path.string());
  }
  return parse_csv(bytes, path.string());
}

}  // namespace cpspdc

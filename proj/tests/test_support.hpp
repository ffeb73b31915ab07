#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "cpspdc/jsa.hpp"

namespace cpspdc::testutil {

inline std::filesystem::path data_dir() { return CPSPDC_TEST_DATA_DIR; }
inline std::filesystem::path source_dir() { return CPSPDC_SOURCE_DIR; }

/// Fresh directory under the system temp dir, removed by the destructor.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("cpspdc-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                      bool real = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = {g(rng), real ? 0.0 : g(rng)};
  }
  return m;
}

/// Random normalized JSA on a grid around 1550 nm. `rank` > 0 builds a sum of
/// that many random product terms, giving purities spread over (0, 1].
inline JsaMatrix random_jsa(std::mt19937_64& rng, std::size_t ns, std::size_t ni, int rank = 0,
                            bool real = false) {
  SpectralGrid grid = SpectralGrid::centered(1550.0, 2.0, 1.5, ns);
  if (ni != ns) {
    grid.idler_nm.resize(ni);
    for (std::size_t k = 0; k < ni; ++k) {
      grid.idler_nm[k] = 1548.5 + 3.0 * static_cast<double>(k) / static_cast<double>(ni - 1);
    }
  }
  const auto r = static_cast<Eigen::Index>(ns);
  const auto c = static_cast<Eigen::Index>(ni);
  Eigen::MatrixXcd f;
  if (rank > 0) {
    f = random_matrix(rng, r, rank, real) * random_matrix(rng, rank, c, real);
  } else {
    f = random_matrix(rng, r, c, real);
  }
  return JsaMatrix::normalized(std::move(grid), std::move(f));
}

}  // namespace cpspdc::testutil

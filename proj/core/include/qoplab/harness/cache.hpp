#pragma once

// On-disk cache of eigendecompositions, one `<hash>.eig` file per instance:
//   16-byte magic "QOPLAB-EIGCACHE1", u32 version, u64 dimension,
//   u64 eigenvalue count, then little-endian doubles: the eigenvalues
//   followed by the eigenvectors (column-major, real and imaginary parts
//   interleaved).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "qoplab/spectral.hpp"

namespace qoplab::harness {

inline constexpr std::uint32_t kCacheFormatVersion = 1;

class EigenCache {
 public:
  using Logger = std::function<void(const std::string&)>;

  /// Creates the directory if needed. The default logger writes to stderr.
  explicit EigenCache(std::filesystem::path dir, std::uint32_t version = kCacheFormatVersion,
                      Logger logger = {});

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path entry_path(const std::string& key) const;

  /// Miss on absent, stale-version or corrupt entries (corruption is logged;
  /// the file is left in place). The caller supplies the quadrature weights
  /// and grid shape, which are not stored.
  std::optional<SpectralDecomposition> get(const std::string& key, const GridShape& shape,
                                           std::span<const double> weights) const;

  /// Writes through a temporary file and an atomic rename, holding
  /// `<hash>.eig.lock` for the duration.
  void put(const std::string& key, const SpectralDecomposition& decomp) const;

 private:
  std::filesystem::path dir_;
  std::uint32_t version_;
  Logger logger_;
};

}  // namespace qoplab::harness

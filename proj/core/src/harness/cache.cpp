#include "qoplab/harness/cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "qoplab/error.hpp"

namespace qoplab::harness {

namespace {

constexpr std::array<char, 16> kMagic = {'Q', 'O', 'P', 'L', 'A', 'B', '-', 'E',
                                         'I', 'G', 'C', 'A', 'C', 'H', 'E', '1'};

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(bytes.data(), sizeof(T));
}

template <typename T>
bool get_le(std::istream& is, T& value) {
  std::array<char, sizeof(T)> bytes;
  if (!is.read(bytes.data(), sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  std::memcpy(&value, bytes.data(), sizeof(T));
  return true;
}

// Exclusive lock file; released on destruction.
class LockFile {
 public:
  explicit LockFile(std::filesystem::path path) : path_(std::move(path)) {
    using namespace std::chrono_literals;
    const auto deadline = std::chrono::steady_clock::now() + 60s;
    bool broke_stale = false;
    for (;;) {
      fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd_ >= 0) return;
      if (errno != EEXIST) throw Error("cannot create cache lock " + path_.string());
      if (std::chrono::steady_clock::now() > deadline) {
        if (broke_stale) throw Error("cache lock held too long: " + path_.string());
        // A writer that died leaves its lock behind.
        std::error_code ec;
        std::filesystem::remove(path_, ec);
        broke_stale = true;
        continue;
      }
      std::this_thread::sleep_for(20ms);
    }
  }
  ~LockFile() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

}  // namespace

EigenCache::EigenCache(std::filesystem::path dir, std::uint32_t version, Logger logger)
    : dir_(std::move(dir)), version_(version), logger_(std::move(logger)) {
  if (!logger_) logger_ = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw Error("cannot create cache directory " + dir_.string());
  }
}

std::filesystem::path EigenCache::entry_path(const std::string& key) const {
  return dir_ / (key + ".eig");
}

std::optional<SpectralDecomposition> EigenCache::get(const std::string& key, const GridShape& shape,
                                                     std::span<const double> weights) const {
  const auto path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;

  const auto corrupt = [&](const std::string& why) -> std::optional<SpectralDecomposition> {
    logger_("corrupt cache entry " + path.string() + " (" + why + "), treating as miss");
    return std::nullopt;
  };

  std::array<char, 16> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) return corrupt("bad magic");
  std::uint32_t version = 0;
  std::uint64_t dimension = 0, count = 0;
  if (!get_le(in, version)) return corrupt("truncated header");
  if (version != version_) return std::nullopt;  // stale, not corrupt
  if (!get_le(in, dimension) || !get_le(in, count)) return corrupt("truncated header");
  if (dimension != shape.size() || weights.size() != dimension) return corrupt("dimension mismatch");
  if (count > dimension) return corrupt("count exceeds dimension");

  SpectralDecomposition d;
  d.eigenvalues.resize(count);
  for (auto& v : d.eigenvalues) {
    if (!get_le(in, v)) return corrupt("truncated eigenvalues");
  }
  d.eigenvectors.resize(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < d.eigenvectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.eigenvectors.rows(); ++i) {
      double re = 0.0, im = 0.0;
      if (!get_le(in, re) || !get_le(in, im)) return corrupt("truncated eigenvectors");
      d.eigenvectors(i, j) = {re, im};
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) return corrupt("trailing bytes");
  d.weights.assign(weights.begin(), weights.end());
  d.shape = shape;
  return d;
}

void EigenCache::put(const std::string& key, const SpectralDecomposition& decomp) const {
  const auto path = entry_path(key);
  LockFile lock(path.string() + ".lock");
  std::ostringstream tag;
  tag << ".tmp." << ::getpid() << "." << std::this_thread::get_id();
  const std::filesystem::path tmp = path.string() + tag.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out.write(kMagic.data(), kMagic.size());
    put_le(out, version_);
    put_le(out, static_cast<std::uint64_t>(decomp.size()));
    put_le(out, static_cast<std::uint64_t>(decomp.count()));
    for (double v : decomp.eigenvalues) put_le(out, v);
    for (Eigen::Index j = 0; j < decomp.eigenvectors.cols(); ++j) {
      for (Eigen::Index i = 0; i < decomp.eigenvectors.rows(); ++i) {
        put_le(out, decomp.eigenvectors(i, j).real());
        put_le(out, decomp.eigenvectors(i, j).imag());
      }
    }
    if (!out.flush()) throw Error("cannot write cache entry " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot publish cache entry " + path.string());
  }
}

}  // namespace qoplab::harness

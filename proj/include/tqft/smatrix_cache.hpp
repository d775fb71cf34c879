#pragma once

// On-disk memo of dense S-matrices, keyed by (n, k). Enabled by the
// TQFT_CACHE_DIR environment variable. Layout (little-endian host order):
//   "TQFTSMAT" | u32 version | i32 n | i32 k | u64 size | size² (re, im) doubles

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "tqft/io.hpp"
#include "tqft/s_matrix.hpp"

namespace tqft {

inline constexpr std::uint32_t kSMatrixCacheVersion = 1;

inline std::optional<std::filesystem::path> smatrix_cache_dir() {
  const char* dir = std::getenv("TQFT_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

inline std::filesystem::path smatrix_cache_file(const std::filesystem::path& dir, int n, int k) {
  return dir / ("smatrix_n" + std::to_string(n) + "_k" + std::to_string(k) + "_v" +
                std::to_string(kSMatrixCacheVersion) + ".bin");
}

/// Reads a cached matrix; any mismatch or truncation counts as a miss.
inline std::optional<SMatrix> load_smatrix(const std::filesystem::path& file, int n, int k) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  std::uint32_t version = 0;
  std::int32_t fn = 0, fk = 0;
  std::uint64_t size = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&fn), sizeof fn);
  in.read(reinterpret_cast<char*>(&fk), sizeof fk);
  in.read(reinterpret_cast<char*>(&size), sizeof size);
  if (!in || std::string(magic.data(), magic.size()) != "TQFTSMAT" || version != kSMatrixCacheVersion || fn != n ||
      fk != k || size != label_count(n, k)) {
    return std::nullopt;
  }
  Eigen::MatrixXcd entries(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  in.read(reinterpret_cast<char*>(entries.data()), static_cast<std::streamsize>(size * size * sizeof(std::complex<double>)));
  if (!in) return std::nullopt;
  return SMatrix(n, k, enumerate_labels(n, k), std::move(entries));
}

inline void store_smatrix(const std::filesystem::path& file, const SMatrix& s) {
  std::string blob = "TQFTSMAT";
  auto put = [&blob](const auto& v) { blob.append(reinterpret_cast<const char*>(&v), sizeof v); };
  put(kSMatrixCacheVersion);
  put(static_cast<std::int32_t>(s.n()));
  put(static_cast<std::int32_t>(s.k()));
  put(static_cast<std::uint64_t>(s.size()));
  blob.append(reinterpret_cast<const char*>(s.matrix().data()), s.size() * s.size() * sizeof(std::complex<double>));
  std::filesystem::create_directories(file.parent_path());
  io::write_atomic(file.string(), blob);
}

/// Dense S-matrix through the cache when TQFT_CACHE_DIR is set.
inline SMatrix cached_s_matrix(int n, int k, const ComputeOptions& options = {}) {
  const auto dir = smatrix_cache_dir();
  if (!dir) return s_matrix(n, k, options);
  detail::check_label_cap(n, k, options.max_dense_labels, "dense S-matrix");
  const auto file = smatrix_cache_file(*dir, n, k);
  if (auto hit = load_smatrix(file, n, k)) return std::move(*hit);
  SMatrix s = s_matrix(n, k, options);
  store_smatrix(file, s);
  return s;
}

}  // namespace tqft

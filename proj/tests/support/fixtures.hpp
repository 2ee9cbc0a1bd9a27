#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "icn/dataset.hpp"
#include "icn/random.hpp"

namespace icn::test {

inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("ICN_DATA_DIR")) return env;
  return ICN_DATA_DIR;
}

inline bool have_mnist() {
  const auto d = data_dir() / "mnist";
  return std::filesystem::exists(d / "t10k-images-idx3-ubyte") &&
         std::filesystem::exists(d / "t10k-labels-idx1-ubyte");
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("icn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Synthetic labeled images: each class draws a filled bar at a
/// class-specific row band, plus pixel noise. Deterministic in seed.
inline std::vector<GrayImage> synthetic_digits(std::size_t count, std::size_t side, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GrayImage> out;
  for (std::size_t i = 0; i < count; ++i) {
    GrayImage g{side, side, std::vector<std::uint8_t>(side * side, 0), static_cast<int>(i % 10)};
    const std::size_t band = (static_cast<std::size_t>(g.label) * side) / 10;
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        const bool on = (r >= band && r < band + side / 5) && c > side / 6 && c < side - side / 6;
        const auto noise = static_cast<std::uint8_t>(uniform_below(rng, 60));
        g.pixels[r * side + c] = on ? static_cast<std::uint8_t>(255 - noise) : noise;
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

/// Writes images as an MNIST-style IDX directory (t10k file names).
inline std::filesystem::path write_idx_dir(const std::filesystem::path& dir, const std::vector<GrayImage>& images) {
  std::filesystem::create_directories(dir);
  const auto [img, lab] = write_idx(images);
  write_bytes(dir / "t10k-images-idx3-ubyte", img);
  write_bytes(dir / "t10k-labels-idx1-ubyte", lab);
  return dir;
}

}  // namespace icn::test

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icn/bits.hpp"
#include "icn/error.hpp"
#include "icn/random.hpp"

namespace icn {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
  int label = 0;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct BinaryImage {
  std::size_t width = 0;
  std::size_t height = 0;
  Bits bits;  // row-major
  int label = 0;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
};

inline constexpr int kDefaultThreshold = 80;
inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

namespace detail {

inline std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset,
                               const char* file) {
  if (bytes.size() < offset + 4) {
    throw ParseError(ParseError::Where::byte_offset, bytes.size(),
                     std::string(file) + ": truncated header");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

inline void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::dataset_not_found, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace detail

/// Parses an IDX image file (magic 0x803, count, rows, cols, u8 payload) and
/// its IDX label file (magic 0x801, count, u8 labels).
inline std::vector<GrayImage> parse_idx(std::span<const std::uint8_t> images,
                                        std::span<const std::uint8_t> labels) {
  using W = ParseError::Where;
  if (auto magic = detail::read_be32(images, 0, "images"); magic != kIdxImagesMagic) {
    throw ParseError(W::byte_offset, 0, "images: wrong magic " + std::to_string(magic));
  }
  if (auto magic = detail::read_be32(labels, 0, "labels"); magic != kIdxLabelsMagic) {
    throw ParseError(W::byte_offset, 0, "labels: wrong magic " + std::to_string(magic));
  }
  const std::size_t count = detail::read_be32(images, 4, "images");
  const std::size_t rows = detail::read_be32(images, 8, "images");
  const std::size_t cols = detail::read_be32(images, 12, "images");
  const std::size_t label_count = detail::read_be32(labels, 4, "labels");
  if (label_count != count) {
    throw ParseError(W::byte_offset, 4, "labels: count " + std::to_string(label_count) +
                                            " does not match image count " + std::to_string(count));
  }
  const std::size_t area = rows * cols;
  const std::size_t image_bytes = 16 + count * area;
  if (images.size() < image_bytes) {
    throw ParseError(W::byte_offset, images.size(),
                     "images: truncated payload, expected " + std::to_string(image_bytes) + " bytes");
  }
  if (images.size() > image_bytes) {
    throw ParseError(W::byte_offset, image_bytes, "images: trailing bytes after payload");
  }
  if (labels.size() < 8 + count) {
    throw ParseError(W::byte_offset, labels.size(),
                     "labels: truncated payload, expected " + std::to_string(8 + count) + " bytes");
  }
  if (labels.size() > 8 + count) {
    throw ParseError(W::byte_offset, 8 + count, "labels: trailing bytes after payload");
  }

  std::vector<GrayImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto label = labels[8 + i];
    if (label > 9) {
      throw ParseError(W::byte_offset, 8 + i, "labels: label " + std::to_string(label) + " > 9");
    }
    const auto* first = images.data() + 16 + i * area;
    out.push_back({cols, rows, std::vector<std::uint8_t>(first, first + area), label});
  }
  return out;
}

/// Serializes images (all of equal size) to IDX image and label files.
inline std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> write_idx(
    std::span<const GrayImage> images) {
  const std::size_t rows = images.empty() ? 0 : images.front().height;
  const std::size_t cols = images.empty() ? 0 : images.front().width;
  std::vector<std::uint8_t> img, lab;
  detail::write_be32(img, kIdxImagesMagic);
  detail::write_be32(img, static_cast<std::uint32_t>(images.size()));
  detail::write_be32(img, static_cast<std::uint32_t>(rows));
  detail::write_be32(img, static_cast<std::uint32_t>(cols));
  detail::write_be32(lab, kIdxLabelsMagic);
  detail::write_be32(lab, static_cast<std::uint32_t>(images.size()));
  for (const auto& g : images) {
    if (g.width != cols || g.height != rows || g.pixels.size() != rows * cols) {
      throw Error(Errc::invalid_input, "write_idx: images differ in size");
    }
    img.insert(img.end(), g.pixels.begin(), g.pixels.end());
    lab.push_back(static_cast<std::uint8_t>(g.label));
  }
  return {std::move(img), std::move(lab)};
}

inline std::vector<GrayImage> load_idx(const std::filesystem::path& images,
                                       const std::filesystem::path& labels) {
  const auto img = detail::read_file(images);
  const auto lab = detail::read_file(labels);
  return parse_idx(img, lab);
}

/// Parses USPS text records: one per non-empty line, a label 0-9 followed by
/// 256 pixel values separated by whitespace or commas. If every value in the
/// file lies in [-1, 1] the file is treated as scaled and mapped with
/// floor(255 * (v + 1) / 2 + 0.5); otherwise values must lie in [0, 255] and
/// are rounded half-up.
inline std::vector<GrayImage> parse_usps(std::string_view text) {
  constexpr std::size_t kSide = 16;
  constexpr std::size_t kArea = kSide * kSide;
  using W = ParseError::Where;

  struct Record {
    int label;
    std::vector<double> values;
  };
  std::vector<Record> records;
  bool scaled = true;

  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    std::vector<double> fields;
    std::size_t pos = 0;
    auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
    while (pos < line.size()) {
      while (pos < line.size() && is_sep(line[pos])) ++pos;
      if (pos >= line.size()) break;
      auto end = pos;
      while (end < line.size() && !is_sep(line[end])) ++end;
      const auto token = line.substr(pos, end - pos);
      double v = 0;
      auto first = token.data();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
      if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
        throw ParseError(W::line, line_no, "usps: non-numeric field '" + std::string(token) + "'");
      }
      fields.push_back(v);
      pos = end;
    }
    if (fields.empty()) continue;
    if (fields.size() != kArea + 1) {
      throw ParseError(W::line, line_no, "usps: expected 257 fields, found " +
                                             std::to_string(fields.size()));
    }
    const double label = fields.front();
    if (label != std::floor(label) || label < 0 || label > 9) {
      throw ParseError(W::line, line_no, "usps: label must be an integer 0-9");
    }
    fields.erase(fields.begin());
    for (double v : fields) {
      if (v < -1.0 || v > 1.0) scaled = false;
    }
    records.push_back({static_cast<int>(label), std::move(fields)});
  }

  std::vector<GrayImage> out;
  out.reserve(records.size());
  line_no = 0;
  for (const auto& r : records) {
    ++line_no;
    GrayImage g{kSide, kSide, std::vector<std::uint8_t>(kArea), r.label};
    for (std::size_t i = 0; i < kArea; ++i) {
      double v = r.values[i];
      if (scaled) {
        v = 255.0 * (v + 1.0) / 2.0;
      } else if (v < 0.0 || v > 255.0) {
        throw ParseError(W::line, line_no, "usps: pixel value out of [0,255]");
      }
      g.pixels[i] = static_cast<std::uint8_t>(std::min(255.0, std::floor(v + 0.5)));
    }
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<GrayImage> load_usps(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  return parse_usps(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

/// bit = 1 iff pixel > threshold.
inline BinaryImage binarize(const GrayImage& img, int threshold = kDefaultThreshold) {
  if (threshold < 0 || threshold > 255) {
    throw Error(Errc::invalid_parameter, "binarize: threshold outside [0,255]");
  }
  BinaryImage out{img.width, img.height, Bits(img.pixels.size()), img.label};
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    out.bits[i] = img.pixels[i] > threshold ? 1 : 0;
  }
  return out;
}

inline std::vector<BinaryImage> binarize_all(std::span<const GrayImage> images,
                                             int threshold = kDefaultThreshold) {
  std::vector<BinaryImage> out;
  out.reserve(images.size());
  for (const auto& g : images) out.push_back(binarize(g, threshold));
  return out;
}

/// Indices of a uniform sample without replacement, in draw order.
inline std::vector<std::size_t> subsample_indices(std::size_t population, std::size_t size,
                                                  std::uint64_t seed) {
  if (size < 1 || size > population) {
    throw Error(Errc::invalid_parameter, "subsample: size " + std::to_string(size) +
                                             " outside [1, " + std::to_string(population) + "]");
  }
  std::vector<std::size_t> idx(population);
  for (std::size_t i = 0; i < population; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  return idx;
}

template <class T>
std::vector<T> subsample(std::span<const T> items, std::size_t size, std::uint64_t seed) {
  std::vector<T> out;
  out.reserve(size);
  for (auto i : subsample_indices(items.size(), size, seed)) out.push_back(items[i]);
  return out;
}

/// Binary portable graymap (P5).
inline void write_pgm(const GrayImage& img, std::ostream& os) {
  os << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.pixels.data()),
           static_cast<std::streamsize>(img.pixels.size()));
}

}  // namespace icn

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "irmgl/grid.hpp"

namespace irmgl {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Binary greyscale PGM ("P5", maxval 255). Values in [0, 1] are mapped linearly,
// anything outside is clamped first.
void write_pgm(const std::filesystem::path& path, const ImageGrid& image);

// One CSV line per row, full precision; read_csv_values(write) is lossless.
void write_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const double> values);
std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path);

template <typename Tag>
void write_csv(const std::filesystem::path& path, const Array2D<Tag>& a) {
  write_csv(path, a.rows(), a.cols(), a.values());
}

template <typename Tag>
Array2D<Tag> read_csv(const std::filesystem::path& path) {
  auto rows = read_csv_rows(path);
  if (rows.empty() || rows.front().empty()) throw DimensionError("read_csv: empty file");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionError("read_csv: ragged rows in " + path.string());
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Array2D<Tag>(rows.size(), cols, std::move(flat));
}

}  // namespace irmgl

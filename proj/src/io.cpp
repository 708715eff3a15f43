#include "irmgl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irmgl {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const ImageGrid& image) {
  auto out = open_for_write(path, std::ios::binary);
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  std::vector<unsigned char> bytes(image.size());
  for (std::size_t k = 0; k < image.size(); ++k) {
    const double v = std::clamp(image[k], 0.0, 1.0);
    bytes[k] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const double> values) {
  if (values.size() != rows * cols) throw DimensionError("write_csv: shape/value mismatch");
  auto out = open_for_write(path, std::ios::out);
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    line.clear();
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) line += ',';
      line += format_double(values[i * cols + j]);
    }
    line += '\n';
    out << line;
  }
}

std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) throw std::runtime_error("read_csv: bad number in " + path.string());
      row.push_back(v);
      p = next;
      if (p < end && *p == ',') ++p;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace irmgl

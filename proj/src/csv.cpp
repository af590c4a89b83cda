#include "bayesucb/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace bayesucb {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : num_columns_(header.size()) {
  add_row(std::move(header));
}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != num_columns_ && num_columns_ != 0) {
    throw std::invalid_argument("CsvWriter: row width does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("CsvWriter: cannot open '" + path + "'");
  out << text_;
  if (!out) throw std::runtime_error("CsvWriter: write failed for '" + path + "'");
}

}  // namespace bayesucb

// SPDX-License-Identifier: Apache-2.0
#include "patchdg/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace patchdg {

namespace {

std::string nonfinite(double value) {
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return nonfinite(value);
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return {buf.data(), ec == std::errc() ? ptr : buf.data()};
}

std::string format_exact(double value) {
  if (!std::isfinite(value)) return nonfinite(value);
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), ec == std::errc() ? ptr : buf.data()};
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) cell(n);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) os_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  os_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  os_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    os_ << text;
    return *this;
  }
  os_ << '"';
  for (char c : text) {
    if (c == '"') os_ << '"';
    os_ << c;
  }
  os_ << '"';
  return *this;
}

CsvWriter& CsvWriter::empty() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  row_started_ = false;
}

}  // namespace patchdg

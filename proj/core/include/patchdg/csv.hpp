// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace patchdg {

/// 12 significant digits, locale independent ("nan"/"inf" spelled out).
std::string format_number(double value);

/// Shortest representation that round-trips exactly.
std::string format_exact(double value);

/// Comma separated, LF terminated rows with RFC-4180 quoting of text cells.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<std::string_view> names);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(std::string_view text);
  CsvWriter& empty();
  void end_row();

 private:
  void separator();

  std::ostream& os_;
  bool row_started_ = false;
};

}  // namespace patchdg

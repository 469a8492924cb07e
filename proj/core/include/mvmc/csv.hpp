#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mvmc::csv {

// Minimal RFC 4180 reader: comma separated, double-quoted fields with ""
// escapes, embedded newlines inside quotes, CRLF or LF line endings.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next record. Returns false at end of input. `line()` reports the
  // 1-based physical line on which the record started.
  bool Next(std::vector<std::string>& fields);
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t next_line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes a field only when it contains a comma, quote or newline.
std::string Escape(std::string_view field);

void WriteRow(std::ostream& out, std::span<const std::string> fields);

// Maps header names to column indices.
class Header {
 public:
  Header() = default;
  explicit Header(std::vector<std::string> names);

  std::optional<std::size_t> Find(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

}  // namespace mvmc::csv

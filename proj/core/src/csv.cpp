#include "mvmc/csv.hpp"

#include <algorithm>

namespace mvmc::csv {

bool Reader::Next(std::vector<std::string>& fields) {
  fields.clear();
  record_line_ = next_line_;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in_.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++next_line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in_.peek() == '\n') continue;
      ++next_line_;
      fields.push_back(std::move(field));
      return true;
    } else if (c == '\n') {
      ++next_line_;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string Escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteRow(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << Escape(fields[i]);
  }
  out << '\n';
}

Header::Header(std::vector<std::string> names) : names_(std::move(names)) {
  // Tolerate a UTF-8 byte-order mark on the first column.
  if (!names_.empty() && names_.front().rfind("\xEF\xBB\xBF", 0) == 0) {
    names_.front().erase(0, 3);
  }
}

std::optional<std::size_t> Header::Find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

}  // namespace mvmc::csv

#ifndef ZIPBOOST_CSV_H_
#define ZIPBOOST_CSV_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zipboost {

// Streaming RFC-4180 reader: quoted fields, doubled quotes, embedded line
// breaks, CRLF or LF record separators. A UTF-8 byte-order mark is skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in);

  // Reads the next record into `fields`. Returns false at end of input.
  bool next_row(std::vector<std::string>& fields);

  // 1-based physical line on which the last record returned started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t current_line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Strict numeric parse of a whole field (surrounding blanks allowed).
bool parse_double(std::string_view text, double& out);

}  // namespace zipboost

#endif  // ZIPBOOST_CSV_H_

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace citescope::csv {

using Row = std::vector<std::string>;

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// RFC 4180: comma delimited, CRLF line ends, fields quoted when they hold a
// comma, quote, CR or LF.
std::string format_row(const Row& row);
std::string format(const Row& header, const std::vector<Row>& rows);

// Parses a whole document. Accepts CRLF or LF line ends. Throws CsvError on an
// unterminated quoted field.
std::vector<Row> parse(std::string_view document);

}  // namespace citescope::csv

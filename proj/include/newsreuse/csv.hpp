#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsreuse::csv {

using Row = std::vector<std::string>;

/// RFC 4180: fields containing ',', '"', CR or LF are quoted, quotes doubled.
/// Rows end with CRLF.
std::string format_row(const Row& row);
std::string format(const std::vector<Row>& rows);

/// Inverse of format(). Throws BadRecord on an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string number(double value);

}  // namespace newsreuse::csv

#ifndef BLINDSSR_IO_REPORT_HPP
#define BLINDSSR_IO_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blindssr::io {

enum class OutputFormat { Table, Json, Csv };

std::optional<OutputFormat> parse_format(std::string_view name);

/// Paper-precision rendering: `digits` significant figures (e.g. 4.48e-07).
std::string format_significant(double x, int digits);
/// Shortest representation that parses back to the same double.
std::string format_full(double x);

/// Plain monospace table with left-aligned, padded columns.
class TableBuilder {
public:
    void set_header(std::vector<std::string> header);
    void add_row(std::vector<std::string> row);
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// One CSV line; fields containing separators/quotes are quoted.
std::string csv_line(const std::vector<std::string>& fields);

} // namespace blindssr::io

#endif

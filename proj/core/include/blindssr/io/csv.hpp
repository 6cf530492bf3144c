#ifndef BLINDSSR_IO_CSV_HPP
#define BLINDSSR_IO_CSV_HPP

#include <istream>
#include <string>
#include <vector>

namespace blindssr::io {

/// Reads a single numeric outcome column named `y`: optional header, UTF-8,
/// comma-delimited (a data row must not contain extra columns). Blank or
/// non-numeric rows raise CsvParseError with the 1-based line number.
std::vector<double> read_outcome_csv(std::istream& in);
std::vector<double> read_outcome_csv_file(const std::string& path);

class CsvParseError : public std::runtime_error {
public:
    CsvParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

} // namespace blindssr::io

#endif

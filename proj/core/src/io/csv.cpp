#include "blindssr/io/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace blindssr::io {

CsvParseError::CsvParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_bom(std::string s) {
    if (s.size() >= 3 && s[0] == '\xEF' && s[1] == '\xBB' && s[2] == '\xBF')
        return s.substr(3);
    return s;
}

bool parse_value(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size() && end != begin;
}

} // namespace

std::vector<double> read_outcome_csv(std::istream& in) {
    std::vector<double> values;
    std::string raw;
    int line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (line_no == 1) raw = strip_bom(raw);
        const std::string line = trim(raw);
        if (line.empty()) {
            if (first_content_line) continue; // leading blank lines tolerated
            throw CsvParseError(line_no, "blank row");
        }
        if (line.find(',') != std::string::npos)
            throw CsvParseError(line_no, "expected a single column named 'y'");
        if (first_content_line) {
            first_content_line = false;
            std::string lower = line;
            for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (lower == "y") continue; // optional header
        }
        double v = 0.0;
        if (!parse_value(line, v))
            throw CsvParseError(line_no, "not a number: '" + line + "'");
        if (!std::isfinite(v))
            throw CsvParseError(line_no, "non-finite value: '" + line + "'");
        values.push_back(v);
    }
    return values;
}

std::vector<double> read_outcome_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    return read_outcome_csv(in);
}

} // namespace blindssr::io

#include "blindssr/io/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace blindssr::io {

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "table") return OutputFormat::Table;
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    return std::nullopt;
}

std::string format_significant(double x, int digits) {
    if (!std::isfinite(x)) return std::to_string(x);
    if (x == 0.0) return "0";
    // Round to the requested significant figures first, then pick fixed vs
    // scientific so trailing zeros survive (0.2096 -> "0.210", not "0.21").
    char sci[64];
    std::snprintf(sci, sizeof(sci), "%.*e", digits - 1, x);
    const char* epos = std::strchr(sci, 'e');
    const int exp10 = epos ? std::atoi(epos + 1) : 0;
    if (exp10 >= -4 && exp10 < digits + 2) {
        const int decimals = std::max(0, digits - 1 - exp10);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
        return buf;
    }
    return sci;
}

std::string format_full(double x) {
    if (!std::isfinite(x)) return std::to_string(x);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    // Prefer the shorter form when it round-trips.
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.15g", x);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == x) return shorter;
    std::snprintf(shorter, sizeof(shorter), "%.16g", x);
    std::sscanf(shorter, "%lf", &back);
    if (back == x) return shorter;
    return buf;
}

void TableBuilder::set_header(std::vector<std::string> header) { header_ = std::move(header); }

void TableBuilder::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string TableBuilder::str() const {
    std::vector<std::size_t> widths;
    const auto measure = [&](const std::vector<std::string>& row) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    };
    measure(header_);
    for (const auto& r : rows_) measure(r);

    std::ostringstream os;
    const auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << row[i];
            if (i + 1 < row.size())
                os << std::string(widths[i] - row[i].size() + 2, ' ');
        }
        os << '\n';
    };
    if (!header_.empty()) {
        emit(header_);
        std::size_t total = 0;
        for (std::size_t i = 0; i < widths.size(); ++i)
            total += widths[i] + (i + 1 < widths.size() ? 2 : 0);
        os << std::string(total, '-') << '\n';
    }
    for (const auto& r : rows_) emit(r);
    return os.str();
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::ostringstream os;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        const bool needs_quote = f.find_first_of(",\"\n") != std::string::npos;
        if (needs_quote) {
            os << '"';
            for (char c : f) {
                if (c == '"') os << '"';
                os << c;
            }
            os << '"';
        } else {
            os << f;
        }
        if (i + 1 < fields.size()) os << ',';
    }
    os << '\n';
    return os.str();
}

} // namespace blindssr::io

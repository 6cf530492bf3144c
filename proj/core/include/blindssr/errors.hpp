#ifndef BLINDSSR_ERRORS_HPP
#define BLINDSSR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blindssr {

/// Invalid argument outside a function's mathematical domain.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Too few observations (or too small a pilot) for the requested computation.
class InsufficientDataError : public std::invalid_argument {
public:
    explicit InsufficientDataError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to converge; message carries diagnostics.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// The power target cannot be reached anywhere in the confidence bracket.
class CalibrationInfeasibleError : public std::runtime_error {
public:
    explicit CalibrationInfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace blindssr

#endif

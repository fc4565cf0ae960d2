#ifndef PICOH_ERRORS_HPP
#define PICOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace picoh {

// Division by an exact zero scalar.
struct division_by_zero : std::domain_error {
    division_by_zero() : std::domain_error("division by zero") {}
};

// Element is not a unit of its ring (zero value part, non-unit leading term, ...).
struct not_invertible : std::domain_error {
    explicit not_invertible(const std::string& what) : std::domain_error(what) {}
};

// A requested quantity is not determined by the available window/precision.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input documents, invalid box/tail configurations, bad arguments.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace picoh

#endif

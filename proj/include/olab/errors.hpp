#ifndef OLAB_ERRORS_HPP
#define OLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace olab {

// Violation of an operation precondition or a type invariant.
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or inconsistent user configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource budget (node counts, enumeration sizes) was exceeded.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace olab

#endif

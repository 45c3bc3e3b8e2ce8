#pragma once

#include <stdexcept>
#include <string>

namespace wisar {

/// Invalid parameters or scenario description.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Query outside the domain of a spatial structure.
class DomainError : public std::out_of_range {
public:
    explicit DomainError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace wisar

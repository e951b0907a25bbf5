#pragma once

#include <stdexcept>
#include <string>

namespace vecgp {

// Malformed input data: bad cells, ragged rows, label schema violations.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized trees or record files.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run setup (fold count vs class sizes, bad probabilities, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vecgp

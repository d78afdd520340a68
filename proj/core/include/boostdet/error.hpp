#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boostdet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad flags, bad parameter values. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Unreadable or inconsistent inputs. CLI exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed file content; carries the byte offset of the first bad byte.
class ParseError : public DataError {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : DataError(msg + " at byte " + std::to_string(offset)), byte_offset(offset) {}
    std::size_t byte_offset;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

// Training could not produce a usable model. CLI exit code 4.
class TrainError : public Error {
public:
    using Error::Error;
};

}  // namespace boostdet

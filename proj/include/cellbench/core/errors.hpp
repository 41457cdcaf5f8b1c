#pragma once

#include <stdexcept>
#include <string>

namespace cellbench {

// Invalid parameters or configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DataErrorCode {
    Generic,
    MissingFile,
    BadFormat,
    UnsupportedVersion,
    CountMismatch,
    DimMismatch,
    PayloadSize,
    NonFinite,
    DuplicateId,
    MissingKey,
    UnresolvedIds,
    MissingControls,
    DegenerateInput,
};

const char *to_string(DataErrorCode code);

// Malformed or inconsistent input data. CLI exit code 3.
class DataError : public std::runtime_error {
public:
    DataError(DataErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}
    explicit DataError(const std::string &what) : DataError(DataErrorCode::Generic, what) {}

    DataErrorCode code() const noexcept { return code_; }

private:
    DataErrorCode code_;
};

} // namespace cellbench

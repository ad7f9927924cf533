#pragma once

#include <stdexcept>
#include <string>

namespace gendetect {

// Error taxonomy shared across the pipeline. The CLI maps these onto exit
// codes: ConfigError -> 1, DataError -> 2, ClientError/BackendError -> 3.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure of an external text client (translator or generator). Carries the
// number of attempts made before giving up so callers can decide to retry.
struct ClientError : std::runtime_error {
    explicit ClientError(const std::string& what, int attempts_made = 1)
        : std::runtime_error(what), attempts(attempts_made) {}
    int attempts;
};

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gendetect

#pragma once

#include <stdexcept>
#include <string>

namespace mgd {

// Error taxonomy used across the toolkit. The CLI maps these onto exit
// codes: ConfigError -> 1, DatasetError -> 2, anything else -> 3.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct InfeasibleMoments : InvalidParameter {
    using InvalidParameter::InvalidParameter;
};

struct InvalidState : Error {
    using Error::Error;
};

struct UndefinedMetric : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DatasetError : Error {
    using Error::Error;
};

}  // namespace mgd

#pragma once

#include <stdexcept>
#include <string>

namespace rkcf {

/// Precondition violation by the caller (bad shape, bad hyperparameter).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure that depends on the data (zero denominator, singular system).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed external data (images, ground truth, result files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}
}  // namespace detail

}  // namespace rkcf

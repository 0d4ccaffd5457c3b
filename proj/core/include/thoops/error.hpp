#pragma once

#include <stdexcept>
#include <string>

namespace thoops {

/// Caller violated an API precondition (bad mode, shape mismatch, bad flag).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data could not be used (malformed file, missing column, empty filter).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical invariant was broken inside the library; indicates a kernel bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace thoops

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace specflow {

/// Base of every library error. The CLI maps each subclass to a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad text, schema violation, rational where an irrational is required.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The requested computation needs more precision, depth or terms than available.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// A theorem hypothesis does not hold for the input (S = 0, roof not positive, ...).
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Two computational routes that must agree do not. Always a bug or a falsification.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace specflow

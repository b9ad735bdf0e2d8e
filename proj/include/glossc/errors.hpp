#pragma once

#include <stdexcept>
#include <string>

namespace glossc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input bytes (JSON syntax, bad field types, missing fields).
struct ParseError : Error {
    using Error::Error;
};

// Well-formed input whose content violates an invariant.
struct ValidationError : Error {
    using Error::Error;
};

// A referenced name (gloss, word, phoneme symbol) is unknown.
struct LookupError : Error {
    using Error::Error;
};

struct CalibrationError : Error {
    using Error::Error;
};

// Numeric argument outside its documented range.
struct RangeError : Error {
    using Error::Error;
};

} // namespace glossc

#pragma once

#include <stdexcept>
#include <string>

namespace ldgram {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or malformed input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An enumeration or evaluation would exceed a configured size limit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Gram matrix too far from the identity to be inverted safely.
class SingularGram : public Error {
 public:
  using Error::Error;
};

}  // namespace ldgram

#pragma once

#include <stdexcept>
#include <string>

namespace optwist {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatch : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct CompositionNotZero : Error {
  using Error::Error;
};
struct DegreeMismatch : Error {
  using Error::Error;
};
struct FiltrationViolation : Error {
  using Error::Error;
};
struct VariantMismatch : Error {
  using Error::Error;
};
struct NotMaurerCartan : Error {
  using Error::Error;
};
struct NotIsotopy : Error {
  using Error::Error;
};
struct NoCurvatureFunctional : Error {
  using Error::Error;
};
struct UnknownGenerator : Error {
  using Error::Error;
};
struct ArityCapMismatch : Error {
  using Error::Error;
};
struct InputError : Error {
  using Error::Error;
};

}  // namespace optwist

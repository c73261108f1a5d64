#pragma once

#include <stdexcept>
#include <string>

namespace uvsamp {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSquare : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotAFrame : Error { using Error::Error; };
struct IdentityViolated : Error { using Error::Error; };
struct CaseMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NotSquareCase : Error { using Error::Error; };
struct EmptyWindow : Error { using Error::Error; };
struct FactorNotAFrame : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace uvsamp

#pragma once

#include <stdexcept>
#include <string>

namespace aray {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct CenterOutsideError : Error { using Error::Error; };
struct DegenerateGeometryError : Error { using Error::Error; };

// fields
struct FieldTooSmallError : Error { using Error::Error; };
struct EmptyMaskError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };

// evolution
struct NonFiniteError : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };
struct EmptySegmentError : Error { using Error::Error; };

// learning
struct LengthMismatchError : Error { using Error::Error; };
struct TrajectoryMismatchError : Error { using Error::Error; };
struct NoInteriorPointError : Error { using Error::Error; };

// metrics
struct EmptyInputError : Error { using Error::Error; };

// scene
struct PlacementError : Error { using Error::Error; };

// serialization
struct IoError : Error { using Error::Error; };

}  // namespace aray

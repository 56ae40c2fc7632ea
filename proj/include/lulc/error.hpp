#pragma once

#include <stdexcept>
#include <string>

namespace lulc {

// Root of every error raised by the library. Subclasses name the failure
// category so callers (the HTTP layer in particular) can map them to codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LULC_DEFINE_ERROR(Name)        \
    class Name : public Error {        \
    public:                            \
        using Error::Error;            \
    }

LULC_DEFINE_ERROR(FormatError);      // undecodable input bytes or malformed documents
LULC_DEFINE_ERROR(DimensionError);   // zero or inconsistent raster dimensions
LULC_DEFINE_ERROR(IndexError);       // cluster index or colormap entry out of range
LULC_DEFINE_ERROR(BoundsError);      // pixel coordinate outside the raster
LULC_DEFINE_ERROR(ShapeError);       // mismatched lengths between paired inputs
LULC_DEFINE_ERROR(InfeasibleError);  // e.g. more clusters than points
LULC_DEFINE_ERROR(DomainError);      // value outside the RGB unit cube
LULC_DEFINE_ERROR(RangeError);       // parameter outside its admissible range
LULC_DEFINE_ERROR(DegenerateError);  // all-background image, singular cluster
LULC_DEFINE_ERROR(EmptySampleError); // sampling from a cluster with no pixels
LULC_DEFINE_ERROR(PaletteError);     // seed palette violates its invariants
LULC_DEFINE_ERROR(NotFoundError);
LULC_DEFINE_ERROR(ConflictError);

#undef LULC_DEFINE_ERROR

} // namespace lulc

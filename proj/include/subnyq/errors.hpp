// Error types shared across the subnyq library.
//
// Every failure mode declared by a module contract maps to one of these;
// they all derive from subnyq::Error so callers can catch the family.

#ifndef SUBNYQ_ERRORS_HPP
#define SUBNYQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subnyq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or argument geometry (mismatched rates, lengths, ...).
struct ConfigError : Error {
    using Error::Error;
};

// A signal with zero RMS where a nonzero one is required.
struct DegenerateSignal : Error {
    using Error::Error;
};

// No gated samples produced, or an empty sequence where data is required.
struct EmptySampleSet : Error {
    using Error::Error;
};

// Angle grid too small or rank-deficient for the requested fit order.
struct InsufficientAngles : Error {
    using Error::Error;
};

// Second-moment fit gave q1 <= q2: the minor principal component has a
// nonpositive variance estimate, so whitening is undefined.
struct DegenerateCovariance : Error {
    using Error::Error;
};

// Fourth-moment curve is flat; no rotation angle can be extracted.
struct IcaUnidentifiable : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace subnyq

#endif

// Degree-based trigonometry helpers.
//
// All public angles in this library are degrees. cos_deg/sin_deg fold the
// argument and special-case multiples of 90 so that identities the rest of
// the pipeline relies on (projection at 0/90 degrees selecting a channel,
// 180-degree periodicity of moment curves) hold exactly, not just to a few
// ulps of pi conversion.

#ifndef SUBNYQ_ANGLES_HPP
#define SUBNYQ_ANGLES_HPP

#include <cmath>

namespace subnyq {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Fold into [0, period). fmod is exact, so equal angles mod period fold to
// bit-identical values.
inline double fold_deg(double deg, double period) {
    double r = std::fmod(deg, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;  // r == period can appear after the += above
    return r;
}

inline double cos_deg(double deg) {
    const double a = fold_deg(deg, 360.0);
    if (a == 0.0) return 1.0;
    if (a == 90.0) return 0.0;
    if (a == 180.0) return -1.0;
    if (a == 270.0) return 0.0;
    return std::cos(deg_to_rad(a));
}

inline double sin_deg(double deg) {
    const double a = fold_deg(deg, 360.0);
    if (a == 0.0) return 0.0;
    if (a == 90.0) return 1.0;
    if (a == 180.0) return 0.0;
    if (a == 270.0) return -1.0;
    return std::sin(deg_to_rad(a));
}

inline double atan2_deg(double y, double x) { return rad_to_deg(std::atan2(y, x)); }

// Minimal distance between two angles under the given period.
inline double angle_distance_deg(double a, double b, double period) {
    const double d = fold_deg(a - b, period);
    return (d > period / 2.0) ? period - d : d;
}

}  // namespace subnyq

#endif

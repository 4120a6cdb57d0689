#pragma once

#include <cmath>
#include <stdexcept>

namespace fedfraud::features {

// Sphere radius used for all great-circle distances. Intentionally not the
// conventional Earth mean radius; kept as a named constant so downstream
// configs can reference it.
inline constexpr double kSphereRadiusKm = 6334.08;

inline double haversine_km(double lat1, double lon1, double lat2, double lon2,
                           double radius_km = kSphereRadiusKm) {
    if (lat1 < -90.0 || lat1 > 90.0 || lat2 < -90.0 || lat2 > 90.0 || lon1 < -180.0 ||
        lon1 > 180.0 || lon2 < -180.0 || lon2 > 180.0)
        throw std::domain_error("haversine_km: coordinate out of range");

    constexpr double kDegToRad = M_PI / 180.0;
    const double phi1 = lat1 * kDegToRad;
    const double phi2 = lat2 * kDegToRad;
    const double dphi = (lat2 - lat1) * kDegToRad;
    const double dlambda = (lon2 - lon1) * kDegToRad;

    const double sin_dphi = std::sin(dphi / 2.0);
    const double sin_dlambda = std::sin(dlambda / 2.0);
    double a = sin_dphi * sin_dphi + std::cos(phi1) * std::cos(phi2) * sin_dlambda * sin_dlambda;
    a = std::clamp(a, 0.0, 1.0);
    return 2.0 * radius_km * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

}  // namespace fedfraud::features

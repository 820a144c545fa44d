// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace pave {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

/// Great-circle distance in meters between two (lon, lat) points in degrees.
double haversine_m(double lon1, double lat1, double lon2, double lat2);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// (lon, lat) in degrees -> unit vector on the sphere.
Vec3 to_unit_vector(double lon_deg, double lat_deg);

/// Point set stored as unit vectors, structure-of-arrays, so the
/// distance kernels below can run vectorized.
struct UnitVectors {
    std::vector<double> x, y, z;

    std::size_t size() const { return x.size(); }
    bool empty() const { return x.empty(); }
    void add(double lon_deg, double lat_deg);
    Vec3 at(std::size_t i) const { return {x[i], y[i], z[i]}; }
};

/// Squared chord length between the query and every point. out must
/// hold pts.size() doubles. chord^2 is monotone in great-circle
/// distance, so comparisons against it are exact distance comparisons.
void chord_sq(const UnitVectors& pts, const Vec3& q, double* out);

/// Index of the point with minimal chord^2; ties resolve to the lowest
/// index. pts must be nonempty.
std::size_t argmin_chord_sq(const UnitVectors& pts, const Vec3& q);

/// chord^2 equivalent of a great-circle radius in meters.
double chord_sq_from_radius_m(double radius_m);

/// Great-circle distance for a chord^2 value (inverse of the above).
double radius_m_from_chord_sq(double chord_sq);

enum class SimdLevel { Scalar, Avx2 };

/// Kernel variant selected at startup from CPU capabilities.
SimdLevel active_simd_level();

// Reference and SIMD kernels, exposed for equivalence tests. The
// dispatched entry points above select between them at runtime.
namespace kernels {

void chord_sq_scalar(const double* xs, const double* ys, const double* zs,
                     std::size_t n, const Vec3& q, double* out);
std::size_t argmin_chord_sq_scalar(const double* xs, const double* ys, const double* zs,
                                   std::size_t n, const Vec3& q);

#if defined(__x86_64__)
void chord_sq_avx2(const double* xs, const double* ys, const double* zs,
                   std::size_t n, const Vec3& q, double* out);
std::size_t argmin_chord_sq_avx2(const double* xs, const double* ys, const double* zs,
                                 std::size_t n, const Vec3& q);
#endif

}  // namespace kernels

}  // namespace pave

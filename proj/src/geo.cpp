// SPDX-License-Identifier: Apache-2.0
#include "pave/geo.hpp"

#include <algorithm>
#include <cmath>

namespace pave {

double haversine_m(double lon1, double lat1, double lon2, double lat2) {
    const double phi1 = deg_to_rad(lat1);
    const double phi2 = deg_to_rad(lat2);
    const double dphi = deg_to_rad(lat2 - lat1);
    const double dlam = deg_to_rad(lon2 - lon1);
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    double a = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    a = std::clamp(a, 0.0, 1.0);
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(a));
}

Vec3 to_unit_vector(double lon_deg, double lat_deg) {
    const double lon = deg_to_rad(lon_deg);
    const double lat = deg_to_rad(lat_deg);
    const double cl = std::cos(lat);
    return {cl * std::cos(lon), cl * std::sin(lon), std::sin(lat)};
}

void UnitVectors::add(double lon_deg, double lat_deg) {
    const Vec3 v = to_unit_vector(lon_deg, lat_deg);
    x.push_back(v.x);
    y.push_back(v.y);
    z.push_back(v.z);
}

double chord_sq_from_radius_m(double radius_m) {
    const double s = std::sin(radius_m / (2.0 * kEarthRadiusM));
    return 4.0 * s * s;
}

double radius_m_from_chord_sq(double chord_sq) {
    const double half = std::sqrt(std::clamp(chord_sq, 0.0, 4.0)) / 2.0;
    return 2.0 * kEarthRadiusM * std::asin(half);
}

namespace kernels {

void chord_sq_scalar(const double* xs, const double* ys, const double* zs,
                     std::size_t n, const Vec3& q, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - q.x;
        const double dy = ys[i] - q.y;
        const double dz = zs[i] - q.z;
        out[i] = dx * dx + dy * dy + dz * dz;
    }
}

std::size_t argmin_chord_sq_scalar(const double* xs, const double* ys, const double* zs,
                                   std::size_t n, const Vec3& q) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - q.x;
        const double dy = ys[i] - q.y;
        const double dz = zs[i] - q.z;
        const double d = dx * dx + dy * dy + dz * dz;
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace kernels

namespace {

using ChordSqFn = void (*)(const double*, const double*, const double*, std::size_t,
                           const Vec3&, double*);
using ArgminFn = std::size_t (*)(const double*, const double*, const double*, std::size_t,
                                 const Vec3&);
struct Dispatch {
    ChordSqFn chord_sq = &kernels::chord_sq_scalar;
    ArgminFn argmin = &kernels::argmin_chord_sq_scalar;
    SimdLevel level = SimdLevel::Scalar;

    Dispatch() {
#if defined(__x86_64__)
        if (__builtin_cpu_supports("avx2")) {
            chord_sq = &kernels::chord_sq_avx2;
            argmin = &kernels::argmin_chord_sq_avx2;
            level = SimdLevel::Avx2;
        }
#endif
    }
};

const Dispatch& dispatch() {
    static const Dispatch d;
    return d;
}

}  // namespace

SimdLevel active_simd_level() { return dispatch().level; }

void chord_sq(const UnitVectors& pts, const Vec3& q, double* out) {
    dispatch().chord_sq(pts.x.data(), pts.y.data(), pts.z.data(), pts.size(), q, out);
}

std::size_t argmin_chord_sq(const UnitVectors& pts, const Vec3& q) {
    return dispatch().argmin(pts.x.data(), pts.y.data(), pts.z.data(), pts.size(), q);
}

}  // namespace pave

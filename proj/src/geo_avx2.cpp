// SPDX-License-Identifier: Apache-2.0
//
// AVX2 variants of the chord-distance kernels. Compiled with -mavx2 in
// its own translation unit; geo.cpp selects them at runtime. Arithmetic
// matches the scalar kernels operation for operation (mul/add, no FMA),
// so results are bit-identical.

#if defined(__x86_64__)

#include "pave/geo.hpp"

#include <immintrin.h>

namespace pave::kernels {

namespace {

inline __m256d chord_sq_lanes(const double* xs, const double* ys, const double* zs,
                              std::size_t i, __m256d qx, __m256d qy, __m256d qz) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), qx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), qy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), qz);
    const __m256d xx = _mm256_mul_pd(dx, dx);
    const __m256d yy = _mm256_mul_pd(dy, dy);
    const __m256d zz = _mm256_mul_pd(dz, dz);
    return _mm256_add_pd(_mm256_add_pd(xx, yy), zz);
}

inline double chord_sq_one(const double* xs, const double* ys, const double* zs,
                           std::size_t i, const Vec3& q) {
    const double dx = xs[i] - q.x;
    const double dy = ys[i] - q.y;
    const double dz = zs[i] - q.z;
    return dx * dx + dy * dy + dz * dz;
}

}  // namespace

void chord_sq_avx2(const double* xs, const double* ys, const double* zs,
                   std::size_t n, const Vec3& q, double* out) {
    const __m256d qx = _mm256_set1_pd(q.x);
    const __m256d qy = _mm256_set1_pd(q.y);
    const __m256d qz = _mm256_set1_pd(q.z);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, chord_sq_lanes(xs, ys, zs, i, qx, qy, qz));
    }
    for (; i < n; ++i) out[i] = chord_sq_one(xs, ys, zs, i, q);
}

std::size_t argmin_chord_sq_avx2(const double* xs, const double* ys, const double* zs,
                                 std::size_t n, const Vec3& q) {
    const __m256d qx = _mm256_set1_pd(q.x);
    const __m256d qy = _mm256_set1_pd(q.y);
    const __m256d qz = _mm256_set1_pd(q.z);

    __m256d vmin = _mm256_set1_pd(1e300);
    __m256d vidx = _mm256_setzero_pd();
    const __m256d step = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = chord_sq_lanes(xs, ys, zs, i, qx, qy, qz);
        const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), step);
        // Strict less keeps the earliest index within each lane.
        const __m256d lt = _mm256_cmp_pd(d, vmin, _CMP_LT_OQ);
        vmin = _mm256_blendv_pd(vmin, d, lt);
        vidx = _mm256_blendv_pd(vidx, idx, lt);
    }

    alignas(32) double mins[4];
    alignas(32) double idxs[4];
    _mm256_store_pd(mins, vmin);
    _mm256_store_pd(idxs, vidx);

    double best_d = 1e300;
    std::size_t best = 0;
    for (int lane = 0; lane < 4; ++lane) {
        const auto lane_idx = static_cast<std::size_t>(idxs[lane]);
        if (mins[lane] < best_d || (mins[lane] == best_d && lane_idx < best)) {
            best_d = mins[lane];
            best = lane_idx;
        }
    }
    // Tail indices are all larger, so strict less matches the scalar kernel.
    for (; i < n; ++i) {
        const double d = chord_sq_one(xs, ys, zs, i, q);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace pave::kernels

#endif  // __x86_64__

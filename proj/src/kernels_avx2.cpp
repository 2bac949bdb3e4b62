#include "kernels_backends.hpp"

#if defined(PQSQ_HAVE_AVX2_BACKEND)

#include <immintrin.h>

#include <cmath>
#include <limits>

// AVX2 kernels, 4 doubles per lane. Interval selection is done with
// compare+blend against the knot table, so indices and selected
// coefficients are bit-identical to the scalar backend; reductions use
// four parallel accumulators and differ from scalar only by rounding.

namespace pqsq::kernels::avx2 {

namespace {

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

inline __m256d abs4(__m256d v) { return _mm256_and_pd(v, kAbsMask); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

inline int scalar_idx(double d, const PotentialRow& row) {
    const double ad = std::fabs(d);
    int s = 0;
    for (int j = 1; j <= row.p; ++j) s += (ad >= row.r[j]);
    return s;
}

void interval_index(const double* x, double shift, const PotentialRow& row,
                    std::int32_t* out, std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ad = abs4(_mm256_sub_pd(_mm256_loadu_pd(x + i), vshift));
        __m256i idx = _mm256_setzero_si256();
        for (int j = 1; j <= row.p; ++j) {
            const __m256d m = _mm256_cmp_pd(ad, _mm256_set1_pd(row.r[j]), _CMP_GE_OQ);
            idx = _mm256_sub_epi64(idx, _mm256_castpd_si256(m));
        }
        alignas(32) std::int64_t tmp[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), idx);
        out[i + 0] = static_cast<std::int32_t>(tmp[0]);
        out[i + 1] = static_cast<std::int32_t>(tmp[1]);
        out[i + 2] = static_cast<std::int32_t>(tmp[2]);
        out[i + 3] = static_cast<std::int32_t>(tmp[3]);
    }
    for (; i < n; ++i) out[i] = static_cast<std::int32_t>(scalar_idx(x[i] - shift, row));
}

// Blend the per-interval tables down a lane of |d| values.
inline void select_ab(__m256d ad, const PotentialRow& row, __m256d* a, __m256d* b) {
    __m256d av = _mm256_set1_pd(row.a[0]);
    __m256d bv = _mm256_set1_pd(row.b[0]);
    for (int j = 1; j <= row.p; ++j) {
        const __m256d m = _mm256_cmp_pd(ad, _mm256_set1_pd(row.r[j]), _CMP_GE_OQ);
        av = _mm256_blendv_pd(av, _mm256_set1_pd(row.a[j]), m);
        bv = _mm256_blendv_pd(bv, _mm256_set1_pd(row.b[j]), m);
    }
    *a = av;
    *b = bv;
}

void interval_weights(const double* x, double shift, const PotentialRow& row,
                      double* out, std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ad = abs4(_mm256_sub_pd(_mm256_loadu_pd(x + i), vshift));
        __m256d av = _mm256_set1_pd(row.a[0]);
        for (int j = 1; j <= row.p; ++j) {
            const __m256d m = _mm256_cmp_pd(ad, _mm256_set1_pd(row.r[j]), _CMP_GE_OQ);
            av = _mm256_blendv_pd(av, _mm256_set1_pd(row.a[j]), m);
        }
        _mm256_storeu_pd(out + i, av);
    }
    for (; i < n; ++i) out[i] = row.a[scalar_idx(x[i] - shift, row)];
}

void potential_eval(const double* x, double shift, const PotentialRow& row,
                    double* out, std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vshift);
        __m256d av, bv;
        select_ab(abs4(d), row, &av, &bv);
        const __m256d u = _mm256_add_pd(bv, _mm256_mul_pd(av, _mm256_mul_pd(d, d)));
        _mm256_storeu_pd(out + i, u);
    }
    for (; i < n; ++i) {
        const double d = x[i] - shift;
        const int s = scalar_idx(d, row);
        out[i] = row.b[s] + row.a[s] * (d * d);
    }
}

void potential_accum(const double* x, double shift, const PotentialRow& row,
                     double* acc, std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vshift);
        __m256d av, bv;
        select_ab(abs4(d), row, &av, &bv);
        const __m256d u = _mm256_add_pd(bv, _mm256_mul_pd(av, _mm256_mul_pd(d, d)));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), u));
    }
    for (; i < n; ++i) {
        const double d = x[i] - shift;
        const int s = scalar_idx(d, row);
        acc[i] += row.b[s] + row.a[s] * (d * d);
    }
}

double potential_sum(const double* x, double shift, const PotentialRow& row,
                     std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vshift);
        __m256d av, bv;
        select_ab(abs4(d), row, &av, &bv);
        acc = _mm256_add_pd(acc, _mm256_add_pd(bv, _mm256_mul_pd(av, _mm256_mul_pd(d, d))));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - shift;
        const int s = scalar_idx(d, row);
        total += row.b[s] + row.a[s] * (d * d);
    }
    return total;
}

void residual(double* dst, const double* x, double center, const double* nu,
              double vk, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(center);
    const __m256d vv = _mm256_set1_pd(vk);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d nv = _mm256_loadu_pd(nu + i);
        _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_sub_pd(xv, vc), _mm256_mul_pd(vv, nv)));
    }
    for (; i < n; ++i) dst[i] = x[i] - center - vk * nu[i];
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
        acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += w[i] * x[i] * y[i];
    return total;
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

void scaled_mul_add(double* dst, const double* a, const double* x, double c,
                    std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ca = _mm256_mul_pd(vc, _mm256_loadu_pd(a + i));
        const __m256d d = _mm256_fmadd_pd(ca, _mm256_loadu_pd(x + i), _mm256_loadu_pd(dst + i));
        _mm256_storeu_pd(dst + i, d);
    }
    for (; i < n; ++i) dst[i] += c * a[i] * x[i];
}

void scaled_add(double* dst, const double* a, double c, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_fmadd_pd(vc, _mm256_loadu_pd(a + i), _mm256_loadu_pd(dst + i));
        _mm256_storeu_pd(dst + i, d);
    }
    for (; i < n; ++i) dst[i] += c * a[i];
}

void minmax(const double* x, std::size_t n, double* lo, double* hi) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vmn = _mm256_set1_pd(mn);
        __m256d vmx = _mm256_set1_pd(mx);
        for (; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(x + i);
            vmn = _mm256_min_pd(vmn, v);
            vmx = _mm256_max_pd(vmx, v);
        }
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, vmn);
        for (double t : tmp) mn = t < mn ? t : mn;
        _mm256_store_pd(tmp, vmx);
        for (double t : tmp) mx = t > mx ? t : mx;
    }
    for (; i < n; ++i) {
        mn = x[i] < mn ? x[i] : mn;
        mx = x[i] > mx ? x[i] : mx;
    }
    *lo = mn;
    *hi = mx;
}

void argmin_merge(double* best, std::int32_t* best_idx, const double* cand,
                  std::int32_t idx, std::size_t n) {
    const __m128i vidx = _mm_set1_epi32(idx);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(cand + i);
        const __m256d b = _mm256_loadu_pd(best + i);
        const __m256d m = _mm256_cmp_pd(c, b, _CMP_LT_OQ);
        _mm256_storeu_pd(best + i, _mm256_blendv_pd(b, c, m));
        // compress the 64-bit lane mask to 32-bit lanes for the index blend
        const __m128i mlo = _mm256_castsi256_si128(_mm256_castpd_si256(m));
        const __m128i mhi = _mm256_extractf128_si256(_mm256_castpd_si256(m), 1);
        const __m128i m32 = _mm_castps_si128(
            _mm_shuffle_ps(_mm_castsi128_ps(mlo), _mm_castsi128_ps(mhi), 0x88));
        const __m128i old = _mm_loadu_si128(reinterpret_cast<const __m128i*>(best_idx + i));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(best_idx + i),
                         _mm_blendv_epi8(old, vidx, m32));
    }
    for (; i < n; ++i) {
        if (cand[i] < best[i]) {
            best[i] = cand[i];
            best_idx[i] = idx;
        }
    }
}

}  // namespace

const Ops ops = {
    interval_index, interval_weights, potential_eval, potential_accum,
    potential_sum,  residual,         dot,            dot3,
    sum,            scaled_mul_add,   scaled_add,     minmax,
    argmin_merge,
};

}  // namespace pqsq::kernels::avx2

#endif  // PQSQ_HAVE_AVX2_BACKEND

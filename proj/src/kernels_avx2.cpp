// AVX2+FMA kernel backend. This translation unit is compiled with
// -mavx2 -mfma on x86-64; avx2_table() still checks the running CPU before
// handing the table out.

#include "kernels_table.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define CARASCALE_AVX2_BUILT 1
#include <immintrin.h>
#else
#define CARASCALE_AVX2_BUILT 0
#endif

namespace carascale::kernels {

#if CARASCALE_AVX2_BUILT

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void gemv_rows_avx2(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out) {
    for (std::size_t i = 0; i < rows; ++i) out[i] = dot_avx2(m + i * cols, v, cols);
}

double positive_sq_norm_avx2(const double* v, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d p = _mm256_max_pd(_mm256_loadu_pd(v + i), zero);
        acc = _mm256_fmadd_pd(p, p, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double p = v[i] > 0.0 ? v[i] : 0.0;
        s += p * p;
    }
    return s;
}

double min_value_avx2(const double* v, std::size_t n) {
    std::size_t i = 0;
    double m;
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(v);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(v + i));
        __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        m = _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
    } else {
        m = v[0];
        i = 1;
    }
    for (; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

double max_value_avx2(const double* v, std::size_t n) {
    std::size_t i = 0;
    double m;
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(v);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
        __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    } else {
        m = v[0];
        i = 1;
    }
    for (; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

constexpr KernelTable kAvx2Table = {
    Backend::Avx2,  dot_avx2,  axpy_avx2, scal_avx2,
    gemv_rows_avx2, positive_sq_norm_avx2, min_value_avx2, max_value_avx2,
};

} // namespace

const KernelTable* avx2_table() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Table;
    return nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

} // namespace carascale::kernels

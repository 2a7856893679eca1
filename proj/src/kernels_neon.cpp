// NEON kernel backend for aarch64, where the instructions are baseline.

#include "kernels_table.hpp"

#if defined(__aarch64__)
#define CARASCALE_NEON_BUILT 1
#include <arm_neon.h>
#else
#define CARASCALE_NEON_BUILT 0
#endif

namespace carascale::kernels {

#if CARASCALE_NEON_BUILT

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    if (i + 2 <= n) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        i += 2;
    }
    double s = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_neon(double alpha, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void gemv_rows_neon(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out) {
    for (std::size_t i = 0; i < rows; ++i) out[i] = dot_neon(m + i * cols, v, cols);
}

double positive_sq_norm_neon(const double* v, std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t p = vmaxq_f64(vld1q_f64(v + i), zero);
        acc = vfmaq_f64(acc, p, p);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double p = v[i] > 0.0 ? v[i] : 0.0;
        s += p * p;
    }
    return s;
}

double min_value_neon(const double* v, std::size_t n) {
    std::size_t i = 0;
    double m;
    if (n >= 2) {
        float64x2_t acc = vld1q_f64(v);
        for (i = 2; i + 2 <= n; i += 2) acc = vminq_f64(acc, vld1q_f64(v + i));
        m = vminvq_f64(acc);
    } else {
        m = v[0];
        i = 1;
    }
    for (; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

double max_value_neon(const double* v, std::size_t n) {
    std::size_t i = 0;
    double m;
    if (n >= 2) {
        float64x2_t acc = vld1q_f64(v);
        for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(v + i));
        m = vmaxvq_f64(acc);
    } else {
        m = v[0];
        i = 1;
    }
    for (; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

constexpr KernelTable kNeonTable = {
    Backend::Neon,  dot_neon,  axpy_neon, scal_neon,
    gemv_rows_neon, positive_sq_norm_neon, min_value_neon, max_value_neon,
};

} // namespace

const KernelTable* neon_table() { return &kNeonTable; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

} // namespace carascale::kernels

#include "carascale/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "kernels_table.hpp"

namespace carascale::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void gemv_rows(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out) {
    for (std::size_t i = 0; i < rows; ++i) out[i] = dot(m + i * cols, v, cols);
}

double positive_sq_norm(const double* v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = v[i] > 0.0 ? v[i] : 0.0;
        s += p * p;
    }
    return s;
}

double min_value(const double* v, std::size_t n) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] < m) m = v[i];
    return m;
}

double max_value(const double* v, std::size_t n) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

} // namespace scalar

namespace {

constexpr KernelTable kScalarTable = {
    Backend::Scalar,    scalar::dot,       scalar::axpy,      scalar::scal,
    scalar::gemv_rows, scalar::positive_sq_norm, scalar::min_value, scalar::max_value,
};

} // namespace

namespace {

const KernelTable* detect() {
    if (const KernelTable* t = avx2_table()) return t;
    if (const KernelTable* t = neon_table()) return t;
    return &kScalarTable;
}

std::atomic<const KernelTable*> g_table{nullptr};

const KernelTable& table() {
    const KernelTable* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        t = detect();
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

} // namespace

Backend active_backend() { return table().backend; }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "?";
}

void force_backend(Backend b) {
    const KernelTable* t = nullptr;
    switch (b) {
        case Backend::Scalar: t = &kScalarTable; break;
        case Backend::Avx2: t = avx2_table(); break;
        case Backend::Neon: t = neon_table(); break;
    }
    if (!t) throw std::invalid_argument("kernel backend not available on this machine");
    g_table.store(t, std::memory_order_release);
}

void reset_backend() { g_table.store(detect(), std::memory_order_release); }

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
void scal(double alpha, double* x, std::size_t n) { table().scal(alpha, x, n); }
void gemv_rows(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out) {
    table().gemv_rows(m, rows, cols, v, out);
}
double positive_sq_norm(const double* v, std::size_t n) { return table().positive_sq_norm(v, n); }
double min_value(const double* v, std::size_t n) { return table().min_value(v, n); }
double max_value(const double* v, std::size_t n) { return table().max_value(v, n); }

std::size_t argmin_first(const double* v, std::size_t n) {
    const double m = min_value(v, n);
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] == m) return i;
    return 0; // unreachable for finite input
}

} // namespace carascale::kernels

#pragma once

#include <cstddef>

// Dense inner-loop kernels. Every kernel has a scalar reference
// implementation in kernels::scalar; the unqualified entry points dispatch at
// runtime to the widest vector backend the CPU supports (AVX2+FMA on x86-64,
// NEON on aarch64). Backends are equivalence-tested against the scalar
// reference; results may differ from it only by reassociation roundoff.
// min/max reductions are exact and backend-independent.

namespace carascale::kernels {

enum class Backend { Scalar, Avx2, Neon };

/// Backend selected for this process (detected once, on first use).
Backend active_backend();
const char* backend_name(Backend b);

/// Force a specific backend (tests). Throws std::invalid_argument if the
/// backend is not available on this machine.
void force_backend(Backend b);
void reset_backend();

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
/// out[i] = <row_i of m, v>, m row-major rows x cols.
void gemv_rows(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out);
/// sum of max(v[i],0)^2
double positive_sq_norm(const double* v, std::size_t n);
double min_value(const double* v, std::size_t n);
double max_value(const double* v, std::size_t n);
} // namespace scalar

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
void gemv_rows(const double* m, std::size_t rows, std::size_t cols, const double* v, double* out);
double positive_sq_norm(const double* v, std::size_t n);
double min_value(const double* v, std::size_t n);
double max_value(const double* v, std::size_t n);

inline double nrm2_sq(const double* v, std::size_t n) { return dot(v, v, n); }

/// Smallest index attaining the minimum. Deterministic across backends
/// (the min itself is exact; the index scan is scalar).
std::size_t argmin_first(const double* v, std::size_t n);

} // namespace carascale::kernels

#pragma once

#include "carascale/kernels.hpp"

// Internal: per-backend function table. Each backend TU fills one of these;
// kernels.cpp picks at runtime.

namespace carascale::kernels {

struct KernelTable {
    Backend backend;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scal)(double, double*, std::size_t);
    void (*gemv_rows)(const double*, std::size_t, std::size_t, const double*, double*);
    double (*positive_sq_norm)(const double*, std::size_t);
    double (*min_value)(const double*, std::size_t);
    double (*max_value)(const double*, std::size_t);
};

const KernelTable* avx2_table();
const KernelTable* neon_table();

} // namespace carascale::kernels

#include "carascale/instance.hpp"

#include <cmath>
#include <stdexcept>

#include "carascale/kernels.hpp"
#include "carascale/linalg.hpp"
#include "carascale/rng.hpp"

namespace carascale {

namespace ks = kernels::scalar;

const char* witness_tag_name(WitnessTag tag) {
    switch (tag) {
        case WitnessTag::None: return "None";
        case WitnessTag::PrimalInterior: return "PrimalInterior";
        case WitnessTag::DualInterior: return "DualInterior";
    }
    return "?";
}

namespace {

constexpr int kMaxAttempts = 100;

void validate_dims(std::size_t n, std::size_t m) {
    if (m < 1 || m >= n) throw DimensionMismatchError("instance generator: need 1 <= m < n");
}

DenseVector sample_witness(CounterRng& rng, std::size_t n, double hardness) {
    DenseVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = rng.next_uniform(0.1, 1.0);
    if (hardness > 1.0) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (w[i] < w[arg]) arg = i;
        w[arg] /= hardness;
    }
    return w;
}

std::string make_id(const char* base, double hardness) {
    std::string id = base;
    if (hardness != 1.0) id += ";hardness=" + std::to_string(hardness);
    return id;
}

} // namespace

Instance gen_primal_feasible(std::size_t n, std::size_t m, std::uint64_t seed, const GenOptions& opts) {
    validate_dims(n, m);
    CounterRng rng = CounterRng(seed).fork(0x7072696d616cULL); // "primal"
    const DenseVector witness = sample_witness(rng, n, opts.hardness);

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        DenseMatrix basis(n, m);
        for (std::size_t r = 0; r < n; ++r) basis.at(r, 0) = witness[r];
        for (std::size_t c = 1; c < m; ++c)
            for (std::size_t r = 0; r < n; ++r) basis.at(r, c) = rng.next_normal();
        try {
            orthonormalize(basis);
        } catch (const RankDeficientError&) {
            continue;
        }
        Instance inst;
        inst.n = n;
        inst.m = m;
        inst.basis = std::move(basis);
        inst.witness = witness;
        inst.witness_tag = WitnessTag::PrimalInterior;
        inst.seed = seed;
        inst.generator_id = make_id("primal-v1", opts.hardness);
        const WitnessCheck chk = check_witness(inst);
        if (!chk.valid) throw std::logic_error("gen_primal_feasible: witness validation failed");
        return inst;
    }
    throw std::logic_error("gen_primal_feasible: no full-rank basis after 100 attempts");
}

Instance gen_dual_feasible(std::size_t n, std::size_t m, std::uint64_t seed, const GenOptions& opts) {
    validate_dims(n, m);
    CounterRng rng = CounterRng(seed).fork(0x6475616cULL); // "dual"
    const DenseVector witness = sample_witness(rng, n, opts.hardness);

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        // Embed y* in an (n-m)-dimensional space W, then L = W-perp.
        DenseMatrix w(n, n - m);
        for (std::size_t r = 0; r < n; ++r) w.at(r, 0) = witness[r];
        for (std::size_t c = 1; c < n - m; ++c)
            for (std::size_t r = 0; r < n; ++r) w.at(r, c) = rng.next_normal();
        OrthonormalBasis qw;
        try {
            qw = orthonormalize(w);
        } catch (const RankDeficientError&) {
            continue;
        }
        Instance inst;
        inst.n = n;
        inst.m = m;
        inst.basis = complement_basis(qw).q;
        inst.witness = witness;
        inst.witness_tag = WitnessTag::DualInterior;
        inst.seed = seed;
        inst.generator_id = make_id("dual-v1", opts.hardness);
        const WitnessCheck chk = check_witness(inst);
        if (!chk.valid) throw std::logic_error("gen_dual_feasible: witness validation failed");
        return inst;
    }
    throw std::logic_error("gen_dual_feasible: no full-rank construction after 100 attempts");
}

WitnessCheck check_witness(const Instance& inst) {
    WitnessCheck chk;
    if (inst.witness.size() != inst.n || inst.witness_tag == WitnessTag::None) return chk;

    chk.min_entry = ks::min_value(inst.witness.data(), inst.n);
    const double norm = std::sqrt(ks::dot(inst.witness.data(), inst.witness.data(), inst.n));
    const OrthonormalBasis q = orthonormalize(inst.basis);
    const DenseVector proj = project(q, inst.witness);

    double resid_sq = 0.0;
    if (inst.witness_tag == WitnessTag::PrimalInterior) {
        for (std::size_t i = 0; i < inst.n; ++i) {
            const double d = proj[i] - inst.witness[i];
            resid_sq += d * d;
        }
    } else {
        resid_sq = ks::dot(proj.data(), proj.data(), inst.n);
    }
    chk.residual = std::sqrt(resid_sq);
    chk.valid = chk.min_entry > 0.0 && chk.residual <= 1e-8 * norm;
    return chk;
}

} // namespace carascale

// carascale: conic-feasibility solver CLI.
//
// Subcommands: generate | solve | bench | verify.
// Exit codes: 0 success / strict solution / verification pass,
//             1 I/O failure or numerical breakdown,
//             2 invalid arguments,
//             3 undetermined solve,
//             4 bench invariant violation,
//             5 verification failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "carascale/basic_procedures.hpp"
#include "carascale/errors.hpp"
#include "carascale/instance.hpp"
#include "carascale/io.hpp"
#include "carascale/solver.hpp"

using namespace carascale;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUndetermined = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitVerifyFail = 5;

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoull(tok));
    }
    return out;
}

// "1..20" or "1,2,5"
std::vector<std::uint64_t> parse_seed_spec(const std::string& text) {
    std::vector<std::uint64_t> out;
    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = std::stoull(text.substr(0, dots));
        const std::uint64_t hi = std::stoull(text.substr(dots + 2));
        for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoull(tok));
    }
    return out;
}

Instance generate_kind(const std::string& kind, std::size_t n, std::size_t m, std::uint64_t seed,
                       double hardness) {
    GenOptions opts;
    opts.hardness = hardness;
    if (kind == "primal") return gen_primal_feasible(n, m, seed, opts);
    if (kind == "dual") return gen_dual_feasible(n, m, seed, opts);
    throw std::invalid_argument("unknown instance kind: " + kind);
}

// ---------------------------------------------------------------- generate

int cmd_generate(std::size_t n, std::size_t m, std::uint64_t seed, const std::string& kind,
                 double hardness, const std::string& out_path) {
    if (m < 1 || m >= n) {
        std::cerr << "generate: need 1 <= m < n\n";
        return kExitUsage;
    }
    const Instance inst = generate_kind(kind, n, m, seed, hardness);
    io::write_instance_file(out_path, inst);
    std::cout << "wrote " << out_path << " (n=" << n << " m=" << m << " seed=" << seed
              << " witness=" << witness_tag_name(inst.witness_tag) << ")\n";
    return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveStats {
    std::uint64_t iterations = 0;
    std::size_t max_support = 0;
    std::uint64_t counted_ops = 0;
};

SolveStats collect_stats(const SolveOutcome& out) {
    SolveStats st;
    for (const RunSummary& run : out.runs) {
        st.iterations += run.trace.iterations;
        st.max_support = std::max(st.max_support, run.trace.max_support);
        st.counted_ops += run.trace.counted_ops;
    }
    return st;
}

int cmd_solve(const std::string& instance_path, const std::string& procedure,
              std::uint64_t max_rounds, std::uint64_t budget, const std::string& format,
              const std::string& solution_out) {
    const auto kind = procedure_from_name(procedure);
    if (!kind) {
        std::cerr << "solve: unknown procedure '" << procedure << "'\n";
        return kExitUsage;
    }
    const Instance inst = io::read_instance_file(instance_path);

    SolveConfig cfg;
    cfg.procedure = *kind;
    cfg.max_rounds = max_rounds;
    cfg.per_round_budget = budget;

    SolveOutcome out;
    try {
        out = solve(inst, cfg);
    } catch (const NumericalBreakdownError& e) {
        std::cerr << "solve: numerical breakdown: " << e.what() << "\n";
        return kExitError;
    }

    const SolveStats st = collect_stats(out);
    const bool strict = out.verdict != SolveOutcome::Verdict::Undetermined;
    VerificationReport rep;
    if (strict) rep = verify_certificate(inst, out);

    if (format == "json") {
        nlohmann::json doc;
        doc["verdict"] = verdict_name(out.verdict);
        doc["rounds"] = out.rounds_used;
        doc["rescalings"] = out.primal_rescalings + out.dual_rescalings;
        doc["iterations"] = st.iterations;
        doc["max_support"] = st.max_support;
        doc["counted_ops"] = st.counted_ops;
        doc["procedure"] = procedure;
        if (strict) {
            doc["verified"] = rep.pass;
            doc["min_entry"] = rep.min_entry;
            doc["membership_residual"] = rep.membership_residual;
            doc["y"] = out.y;
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "verdict " << verdict_name(out.verdict) << "\n"
                  << "procedure " << procedure << "\n"
                  << "rounds " << out.rounds_used << "\n"
                  << "rescalings " << out.primal_rescalings + out.dual_rescalings << "\n"
                  << "iterations " << st.iterations << "\n"
                  << "max_support " << st.max_support << "\n"
                  << "counted_ops " << st.counted_ops << "\n";
        if (strict) {
            std::cout << "verify " << (rep.pass ? "pass" : "FAIL")
                      << " (min_entry=" << rep.min_entry
                      << ", membership_residual=" << rep.membership_residual << ")\n";
            std::cout << "y";
            for (double v : out.y) std::cout << ' ' << io::render_double(v);
            std::cout << "\n";
        }
    }

    if (!strict) return kExitUndetermined;
    if (!rep.pass) {
        std::cerr << "solve: solution failed independent verification\n";
        return kExitError;
    }
    if (!solution_out.empty()) io::write_vector_file(solution_out, out.y);
    return kExitOk;
}

// ------------------------------------------------------------------- bench

struct BenchTask {
    Instance instance;
    std::string instance_id;
    ProcedureKind procedure;
};

struct BenchRowResult {
    io::BenchRecord record;
    std::vector<std::string> violations;
};

BenchRowResult run_bench_task(const BenchTask& task, std::uint64_t max_rounds, std::uint64_t budget) {
    BenchRowResult rr;
    io::BenchRecord& rec = rr.record;
    rec.instance_id = task.instance_id;
    rec.procedure = procedure_name(task.procedure);
    rec.n = task.instance.n;
    rec.m = task.instance.m;

    SolveConfig cfg;
    cfg.procedure = task.procedure;
    cfg.max_rounds = max_rounds;
    cfg.per_round_budget = budget;

    const auto start = std::chrono::steady_clock::now();
    try {
        const SolveOutcome out = solve(task.instance, cfg);
        const auto stop = std::chrono::steady_clock::now();
        rec.wall_nanoseconds =
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
        rec.result_tag = verdict_name(out.verdict);
        rec.rescalings = out.primal_rescalings + out.dual_rescalings;

        const bool ls = is_limited_support(task.procedure);
        for (const RunSummary& run : out.runs) {
            rec.iterations += run.trace.iterations;
            rec.max_support = std::max(rec.max_support, run.trace.max_support);
            rec.counted_ops += run.trace.counted_ops;
            if (!ls) continue;
            // the limited-support bounds hold per run, against that run's
            // own subspace dimension
            const std::size_t dim = run.subspace_dim;
            if (run.trace.max_support > dim + 1)
                rr.violations.push_back(task.instance_id + "/" + rec.procedure + ": support " +
                                        std::to_string(run.trace.max_support) + " > " +
                                        std::to_string(dim + 1));
            if (budget == 0 && run.outcome == BasicResult::Outcome::BudgetExhausted)
                rr.violations.push_back(task.instance_id + "/" + rec.procedure +
                                        ": run exceeded the 9(m+1)^2 n iteration bound");
            if (run.trace.iterations > iteration_bound(task.instance.n, dim))
                rr.violations.push_back(task.instance_id + "/" + rec.procedure +
                                        ": iterations above the bound");
        }
    } catch (const NumericalBreakdownError&) {
        const auto stop = std::chrono::steady_clock::now();
        rec.wall_nanoseconds =
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
        rec.result_tag = "breakdown";
    }
    return rr;
}

std::size_t bench_workers(std::size_t tasks) {
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CARASCALE_THREADS")) {
        const unsigned long cap = std::strtoul(env, nullptr, 10);
        if (cap >= 1) workers = std::min<std::size_t>(workers, cap);
    }
    return std::min(workers, std::max<std::size_t>(tasks, 1));
}

int cmd_bench(const std::string& n_list, const std::string& m_list, const std::string& seed_spec,
              const std::string& proc_list, const std::string& kind, double hardness,
              std::uint64_t max_rounds, std::uint64_t budget, const std::string& out_csv) {
    const auto ns = parse_size_list(n_list);
    const auto ms = parse_size_list(m_list);
    const auto seeds = parse_seed_spec(seed_spec);
    std::vector<ProcedureKind> procedures;
    {
        std::stringstream ss(proc_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            const auto k = procedure_from_name(tok);
            if (!k) {
                std::cerr << "bench: unknown procedure '" << tok << "'\n";
                return kExitUsage;
            }
            procedures.push_back(*k);
        }
    }
    if (ns.empty() || ms.empty() || seeds.empty() || procedures.empty()) {
        std::cerr << "bench: need non-empty --n, --m, --seeds, --procedures\n";
        return kExitUsage;
    }
    std::vector<std::string> kinds;
    if (kind == "both")
        kinds = {"primal", "dual"};
    else if (kind == "primal" || kind == "dual")
        kinds = {kind};
    else {
        std::cerr << "bench: --kind must be primal, dual, or both\n";
        return kExitUsage;
    }
    for (std::size_t n : ns)
        for (std::size_t m : ms)
            if (m < 1 || m >= n) {
                std::cerr << "bench: invalid combination n=" << n << " m=" << m << "\n";
                return kExitUsage;
            }

    // materialize tasks up front; generation is cheap and deterministic
    std::vector<BenchTask> tasks;
    for (const std::string& k : kinds)
        for (std::size_t n : ns)
            for (std::size_t m : ms)
                for (std::uint64_t seed : seeds)
                    for (ProcedureKind proc : procedures) {
                        BenchTask task;
                        task.instance = generate_kind(k, n, m, seed, hardness);
                        task.instance_id = k + "-n" + std::to_string(n) + "-m" + std::to_string(m) +
                                           "-s" + std::to_string(seed);
                        task.procedure = proc;
                        tasks.push_back(std::move(task));
                    }

    std::vector<BenchRowResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = bench_workers(tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                results[i] = run_bench_task(tasks[i], max_rounds, budget);
            }
        });
    for (std::thread& th : pool) th.join();

    // canonical row order regardless of worker schedule
    std::sort(results.begin(), results.end(), [](const BenchRowResult& a, const BenchRowResult& b) {
        if (a.record.instance_id != b.record.instance_id) return a.record.instance_id < b.record.instance_id;
        return a.record.procedure < b.record.procedure;
    });

    std::ofstream os(out_csv);
    if (!os) {
        std::cerr << "bench: cannot open " << out_csv << "\n";
        return kExitError;
    }
    os << io::bench_csv_header() << "\n";
    std::size_t violations = 0;
    std::uint64_t strict = 0, undetermined = 0, breakdown = 0;
    for (const BenchRowResult& rr : results) {
        os << io::to_csv_row(rr.record) << "\n";
        violations += rr.violations.size();
        for (const std::string& v : rr.violations) std::cerr << "VIOLATION " << v << "\n";
        if (rr.record.result_tag == "undetermined")
            ++undetermined;
        else if (rr.record.result_tag == "breakdown")
            ++breakdown;
        else
            ++strict;
    }
    os.close();
    if (!os) {
        std::cerr << "bench: write failed for " << out_csv << "\n";
        return kExitError;
    }

    std::cerr << "bench: " << results.size() << " runs (" << strict << " strict, " << undetermined
              << " undetermined, " << breakdown << " breakdown), " << violations << " violations, "
              << workers << " workers -> " << out_csv << "\n";
    return violations ? kExitInvariant : kExitOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               const std::string& side) {
    const Instance inst = io::read_instance_file(instance_path);
    const DenseVector y = io::read_vector_file(solution_path);
    if (y.size() != inst.n) {
        std::cerr << "verify: solution length " << y.size() << " != n " << inst.n << "\n";
        return kExitVerifyFail;
    }

    auto report = [&](const VerificationReport& rep, const char* which) {
        std::cout << "side " << which << "\n"
                  << "positivity " << (rep.positivity_ok ? "ok" : "FAIL")
                  << " (min_entry=" << rep.min_entry << ")\n"
                  << "membership " << (rep.membership_ok ? "ok" : "FAIL")
                  << " (residual=" << rep.membership_residual << ", norm=" << rep.solution_norm
                  << ")\n"
                  << "verify " << (rep.pass ? "pass" : "FAIL") << "\n";
    };

    if (side == "primal" || side == "dual") {
        const VerificationReport rep = verify_vector(inst, y, side == "dual");
        report(rep, side.c_str());
        return rep.pass ? kExitOk : kExitVerifyFail;
    }
    // auto: accept membership on either side
    const VerificationReport primal = verify_vector(inst, y, false);
    if (primal.pass) {
        report(primal, "primal");
        return kExitOk;
    }
    const VerificationReport dual = verify_vector(inst, y, true);
    if (dual.pass) {
        report(dual, "dual");
        return kExitOk;
    }
    report(primal.membership_residual <= dual.membership_residual ? primal : dual, "auto");
    return kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"carascale: finds a strictly positive vector in a linear subspace (or in its "
                 "orthogonal complement) by projection and rescaling"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a random instance with a known witness");
    std::size_t gen_n = 50, gen_m = 5;
    std::uint64_t gen_seed = 1;
    std::string gen_kind = "primal", gen_out;
    double gen_hardness = 1.0;
    gen->add_option("--n", gen_n, "ambient dimension")->required();
    gen->add_option("--m", gen_m, "subspace dimension")->required();
    gen->add_option("--seed", gen_seed, "random seed")->required();
    gen->add_option("--kind", gen_kind, "primal | dual")->check(CLI::IsMember({"primal", "dual"}));
    gen->add_option("--hardness", gen_hardness, "divide the smallest witness entry (>= 1)")
        ->check(CLI::Range(1.0, 1e12));
    gen->add_option("-o,--out", gen_out, "output instance path")->required();

    // solve
    auto* sol = app.add_subcommand("solve", "run the projection-and-rescaling driver");
    std::string sol_instance, sol_procedure = "lsvn", sol_format = "text", sol_out;
    std::uint64_t sol_rounds = 200, sol_budget = 0;
    sol->add_option("instance", sol_instance, "instance file")->required();
    sol->add_option("--procedure", sol_procedure,
                    "lsp | lsvn | lsvna | baseline_p | baseline_vn | baseline_vna");
    sol->add_option("--max-rounds", sol_rounds, "rescaling rounds before undetermined");
    sol->add_option("--budget", sol_budget, "per-round iteration budget (0 = 9(m+1)^2 n)");
    sol->add_option("--format", sol_format, "text | json")->check(CLI::IsMember({"text", "json"}));
    sol->add_option("--solution-out", sol_out, "write the verified solution vector here");

    // bench
    auto* ben = app.add_subcommand("bench", "run a suite and write one CSV row per run");
    std::string ben_n, ben_m, ben_seeds, ben_procs, ben_kind = "primal", ben_out;
    std::uint64_t ben_rounds = 200, ben_budget = 0;
    double ben_hardness = 1.0;
    ben->add_option("--n", ben_n, "comma list of ambient dimensions")->required();
    ben->add_option("--m", ben_m, "comma list of subspace dimensions")->required();
    ben->add_option("--seeds", ben_seeds, "seed list: 1..20 or 1,2,5")->required();
    ben->add_option("--procedures", ben_procs, "comma list of procedure names")->required();
    ben->add_option("--kind", ben_kind, "primal | dual | both");
    ben->add_option("--hardness", ben_hardness, "witness tightening factor");
    ben->add_option("--max-rounds", ben_rounds, "rescaling rounds per solve");
    ben->add_option("--budget", ben_budget, "per-round iteration budget (0 = bound)");
    ben->add_option("-o,--out", ben_out, "output CSV path")->required();

    // verify
    auto* ver = app.add_subcommand("verify", "check a solution vector against an instance");
    std::string ver_instance, ver_solution, ver_side = "auto";
    ver->add_option("instance", ver_instance, "instance file")->required();
    ver->add_option("solution", ver_solution, "solution vector file")->required();
    ver->add_option("--side", ver_side, "primal | dual | auto")
        ->check(CLI::IsMember({"primal", "dual", "auto"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return cmd_generate(gen_n, gen_m, gen_seed, gen_kind, gen_hardness, gen_out);
        if (*sol) return cmd_solve(sol_instance, sol_procedure, sol_rounds, sol_budget, sol_format, sol_out);
        if (*ben)
            return cmd_bench(ben_n, ben_m, ben_seeds, ben_procs, ben_kind, ben_hardness, ben_rounds,
                             ben_budget, ben_out);
        if (*ver) return cmd_verify(ver_instance, ver_solution, ver_side);
    } catch (const DimensionMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}

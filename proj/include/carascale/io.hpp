#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "carascale/dense.hpp"
#include "carascale/instance.hpp"

// File formats. All files are UTF-8 plain text; lines starting with '#' are
// comments. Doubles are rendered with 17 significant digits so that
// parse(render(x)) == x.
//
//   matrix ("prmat"):   header `prmat <rows> <cols>`, then <rows> lines of
//                       <cols> space-separated decimal literals.
//   vector:             whitespace-separated decimal literals, any layout.
//   instance:           `key value` lines (n, m, seed, generator_id,
//                       witness_tag, witness, basis); basis is either
//                       `basis inline` followed by a prmat block or
//                       `basis path <relative-path>`.
//   bench CSV:          fixed column order, see bench_csv_header().

namespace carascale::io {

std::string render_double(double v);

void write_matrix(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const DenseMatrix& m);
DenseMatrix read_matrix_file(const std::string& path);

void write_vector_file(const std::string& path, const DenseVector& v);
DenseVector read_vector_file(const std::string& path);

void write_instance(std::ostream& os, const Instance& inst);
/// `base_dir` resolves a `basis path ...` reference; pass "" to forbid.
Instance read_instance(std::istream& is, const std::string& base_dir = "");
void write_instance_file(const std::string& path, const Instance& inst);
Instance read_instance_file(const std::string& path);

struct BenchRecord {
    std::string instance_id;
    std::string procedure;
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t iterations = 0;
    std::size_t max_support = 0;
    std::uint64_t rescalings = 0;
    std::uint64_t counted_ops = 0;
    std::uint64_t wall_nanoseconds = 0;
    std::string result_tag; // primal_strict | dual_strict | undetermined | breakdown
};

std::string bench_csv_header();
std::string to_csv_row(const BenchRecord& rec);
BenchRecord parse_csv_row(const std::string& line);

} // namespace carascale::io

#include "carascale/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "carascale/errors.hpp"

namespace carascale::io {

namespace {

std::string next_content_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        return line.substr(start);
    }
    throw ParseError("unexpected end of input");
}

double parse_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ParseError("bad numeric literal: '" + tok + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& tok) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') throw ParseError("bad integer literal: '" + tok + "'");
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open for reading: " + path);
    return is;
}

} // namespace

std::string render_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix(std::ostream& os, const DenseMatrix& m) {
    os << "prmat " << m.rows << ' ' << m.cols << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) os << ' ';
            os << render_double(m.at(r, c));
        }
        os << '\n';
    }
}

DenseMatrix read_matrix(std::istream& is) {
    std::istringstream header(next_content_line(is));
    std::string magic;
    std::size_t rows = 0, cols = 0;
    if (!(header >> magic >> rows >> cols) || magic != "prmat")
        throw ParseError("matrix: expected header 'prmat <rows> <cols>'");
    if (rows == 0 || cols == 0) throw ParseError("matrix: zero dimension");

    DenseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::istringstream row(next_content_line(is));
        std::string tok;
        for (std::size_t c = 0; c < cols; ++c) {
            if (!(row >> tok)) throw ParseError("matrix: short row " + std::to_string(r));
            m.at(r, c) = parse_double(tok);
        }
        if (row >> tok) throw ParseError("matrix: trailing tokens in row " + std::to_string(r));
    }
    if (!m.all_finite()) throw ParseError("matrix: non-finite entry");
    return m;
}

void write_matrix_file(const std::string& path, const DenseMatrix& m) {
    auto os = open_out(path);
    write_matrix(os, m);
    if (!os) throw ParseError("write failed: " + path);
}

DenseMatrix read_matrix_file(const std::string& path) {
    auto is = open_in(path);
    return read_matrix(is);
}

void write_vector_file(const std::string& path, const DenseVector& v) {
    auto os = open_out(path);
    for (std::size_t i = 0; i < v.size(); ++i) os << render_double(v[i]) << '\n';
    if (!os) throw ParseError("write failed: " + path);
}

DenseVector read_vector_file(const std::string& path) {
    auto is = open_in(path);
    DenseVector v;
    std::string line;
    while (std::getline(is, line)) {
        const std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) v.push_back(parse_double(tok));
    }
    if (v.empty()) throw ParseError("vector file has no values: " + path);
    return v;
}

void write_instance(std::ostream& os, const Instance& inst) {
    os << "# carascale instance\n";
    os << "n " << inst.n << '\n';
    os << "m " << inst.m << '\n';
    os << "seed " << inst.seed << '\n';
    os << "generator_id " << (inst.generator_id.empty() ? "unknown" : inst.generator_id) << '\n';
    os << "witness_tag " << witness_tag_name(inst.witness_tag) << '\n';
    if (!inst.witness.empty()) {
        os << "witness";
        for (double v : inst.witness) os << ' ' << render_double(v);
        os << '\n';
    }
    os << "basis inline\n";
    write_matrix(os, inst.basis);
}

Instance read_instance(std::istream& is, const std::string& base_dir) {
    Instance inst;
    bool have_n = false, have_m = false, have_basis = false;

    std::string line;
    while (true) {
        try {
            line = next_content_line(is);
        } catch (const ParseError&) {
            break; // clean EOF
        }
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "n") {
            std::string tok;
            ss >> tok;
            inst.n = parse_u64(tok);
            have_n = true;
        } else if (key == "m") {
            std::string tok;
            ss >> tok;
            inst.m = parse_u64(tok);
            have_m = true;
        } else if (key == "seed") {
            std::string tok;
            ss >> tok;
            inst.seed = parse_u64(tok);
        } else if (key == "generator_id") {
            ss >> inst.generator_id;
        } else if (key == "witness_tag") {
            std::string tag;
            ss >> tag;
            if (tag == "None")
                inst.witness_tag = WitnessTag::None;
            else if (tag == "PrimalInterior")
                inst.witness_tag = WitnessTag::PrimalInterior;
            else if (tag == "DualInterior")
                inst.witness_tag = WitnessTag::DualInterior;
            else
                throw ParseError("instance: unknown witness_tag '" + tag + "'");
        } else if (key == "witness") {
            std::string tok;
            while (ss >> tok) inst.witness.push_back(parse_double(tok));
        } else if (key == "basis") {
            std::string mode;
            ss >> mode;
            if (mode == "inline") {
                inst.basis = read_matrix(is);
            } else if (mode == "path") {
                std::string rel;
                ss >> rel;
                if (rel.empty()) throw ParseError("instance: basis path missing");
                if (base_dir.empty()) throw ParseError("instance: basis path reference not allowed here");
                inst.basis = read_matrix_file(base_dir + "/" + rel);
            } else {
                throw ParseError("instance: basis must be 'inline' or 'path'");
            }
            have_basis = true;
        } else {
            throw ParseError("instance: unknown key '" + key + "'");
        }
    }

    if (!have_n || !have_m || !have_basis) throw ParseError("instance: missing n, m, or basis");
    if (inst.basis.rows != inst.n || inst.basis.cols != inst.m)
        throw ParseError("instance: declared dimensions do not match the basis matrix");
    if (!inst.witness.empty() && inst.witness.size() != inst.n)
        throw ParseError("instance: witness length != n");
    if (inst.m < 1 || inst.m >= inst.n) throw ParseError("instance: need 1 <= m < n");
    return inst;
}

void write_instance_file(const std::string& path, const Instance& inst) {
    auto os = open_out(path);
    write_instance(os, inst);
    if (!os) throw ParseError("write failed: " + path);
}

Instance read_instance_file(const std::string& path) {
    auto is = open_in(path);
    const std::size_t slash = path.find_last_of('/');
    return read_instance(is, slash == std::string::npos ? "." : path.substr(0, slash));
}

std::string bench_csv_header() {
    return "instance_id,procedure,n,m,iterations,max_support,rescalings,counted_ops,"
           "wall_nanoseconds,result_tag";
}

std::string to_csv_row(const BenchRecord& rec) {
    std::ostringstream ss;
    ss << rec.instance_id << ',' << rec.procedure << ',' << rec.n << ',' << rec.m << ','
       << rec.iterations << ',' << rec.max_support << ',' << rec.rescalings << ','
       << rec.counted_ops << ',' << rec.wall_nanoseconds << ',' << rec.result_tag;
    return ss.str();
}

BenchRecord parse_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    if (fields.size() != 10) throw ParseError("bench csv: expected 10 fields");

    BenchRecord rec;
    rec.instance_id = fields[0];
    rec.procedure = fields[1];
    rec.n = parse_u64(fields[2]);
    rec.m = parse_u64(fields[3]);
    rec.iterations = parse_u64(fields[4]);
    rec.max_support = parse_u64(fields[5]);
    rec.rescalings = parse_u64(fields[6]);
    rec.counted_ops = parse_u64(fields[7]);
    rec.wall_nanoseconds = parse_u64(fields[8]);
    rec.result_tag = fields[9];
    return rec;
}

} // namespace carascale::io

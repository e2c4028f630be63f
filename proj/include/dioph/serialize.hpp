#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dioph/best_approx.hpp"
#include "dioph/errors.hpp"
#include "dioph/linalg.hpp"
#include "dioph/scalar.hpp"

namespace dioph {

inline constexpr const char* artifact_version = "1.0.0";

// Matrix JSON: {"n": int, "m": int, "entries": [[scalar-literal, ...], ...]}
// with n rows of m scalar literals each.
inline Matrix read_matrix(const nlohmann::json& j) {
    if (!j.contains("n") || !j.contains("m") || !j.contains("entries"))
        throw input_error("matrix JSON needs fields n, m, entries");
    size_t n = j.at("n").get<size_t>();
    size_t m = j.at("m").get<size_t>();
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != n)
        throw input_error("matrix entries must hold n rows");
    std::vector<Scalar> a;
    a.reserve(n * m);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != m)
            throw input_error("each matrix row must hold m scalar literals");
        for (const auto& cell : row) {
            if (cell.is_number_integer())
                a.push_back(Scalar::rational(mpq_class(cell.get<long>())));
            else if (cell.is_string())
                a.push_back(parse_scalar(cell.get<std::string>()));
            else
                throw input_error("matrix cells must be strings or integers");
        }
    }
    return Matrix(n, m, std::move(a));
}

inline Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("matrix file not found: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("bad JSON in " + path + ": " + e.what());
    }
    return read_matrix(j);
}

inline nlohmann::json matrix_to_json(const Matrix& th) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 0; i < th.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (size_t j = 0; j < th.m; ++j) {
            const Scalar& s = th.at(i, j);
            row.push_back(s.tag().empty() ? s.str() : s.tag());
        }
        rows.push_back(row);
    }
    return {{"n", th.n}, {"m", th.m}, {"entries", rows}};
}

inline Vec read_vector(const nlohmann::json& j) {
    if (!j.is_array()) throw input_error("vector JSON must be an array");
    Vec v;
    v.e.reserve(j.size());
    for (const auto& cell : j) {
        if (cell.is_number_integer())
            v.e.push_back(Scalar::rational(mpq_class(cell.get<long>())));
        else if (cell.is_string())
            v.e.push_back(parse_scalar(cell.get<std::string>()));
        else
            throw input_error("vector cells must be strings or integers");
    }
    return v;
}

namespace detail {

inline std::string csv_value(const Scalar& s) {
    if (s.is_rational()) return s.rat().get_str();
    std::ostringstream os;
    os.precision(25);
    os << s.to_double() << "(+-" << s.radius() << ")";
    return os.str();
}

inline std::string csv_header_comment() {
    return "# precision_bits=" + std::to_string(working_bits_ref()) +
           " version=" + artifact_version + "\n";
}

} // namespace detail

inline nlohmann::json sequence_to_json(const BestApproxSequence& seq) {
    nlohmann::json recs = nlohmann::json::array();
    size_t nu = 1;
    for (const auto& r : seq.records) {
        recs.push_back({{"nu", nu++},
                        {"P", r.P},
                        {"r", r.r.to_double()},
                        {"r_exact", r.r.is_rational() ? r.r.rat().get_str()
                                                      : std::string{}},
                        {"p", r.p},
                        {"a", r.a}});
    }
    nlohmann::json j;
    j["matrix"] = matrix_to_json(seq.matrix);
    j["t_max"] = seq.t_max;
    j["records"] = recs;
    j["trivially_singular"] = seq.trivially_singular();
    if (seq.trivially_singular())
        j["singular_witness"] = *seq.trivially_singular_witness;
    j["precision_bits"] = working_bits_ref();
    return j;
}

inline nlohmann::json sequence_to_json(const InhomApproxSequence& seq) {
    nlohmann::json recs = nlohmann::json::array();
    size_t nu = 1;
    for (const auto& r : seq.records) {
        recs.push_back({{"nu", nu++},
                        {"Q", r.Q},
                        {"value", r.value.to_double()},
                        {"q", r.q}});
    }
    nlohmann::json j;
    j["matrix"] = matrix_to_json(seq.matrix);
    j["t_max"] = seq.t_max;
    j["records"] = recs;
    j["trivially_singular"] = seq.trivially_singular();
    if (seq.trivially_singular())
        j["singular_witness"] = *seq.trivially_singular_witness;
    j["precision_bits"] = working_bits_ref();
    return j;
}

inline std::string sequence_to_csv(const BestApproxSequence& seq) {
    std::ostringstream os;
    os << detail::csv_header_comment();
    os << "nu,P,r";
    for (size_t j = 0; j < seq.matrix.m; ++j) os << ",p" << j + 1;
    for (size_t i = 0; i < seq.matrix.n; ++i) os << ",a" << i + 1;
    os << "\n";
    size_t nu = 1;
    for (const auto& r : seq.records) {
        os << nu++ << "," << r.P << "," << detail::csv_value(r.r);
        for (long long x : r.p) os << "," << x;
        for (long long x : r.a) os << "," << x;
        os << "\n";
    }
    return os.str();
}

inline std::string sequence_to_csv(const InhomApproxSequence& seq) {
    std::ostringstream os;
    os << detail::csv_header_comment();
    os << "nu,Q,value";
    for (size_t j = 0; j < seq.matrix.m; ++j) os << ",q" << j + 1;
    os << "\n";
    size_t nu = 1;
    for (const auto& r : seq.records) {
        os << nu++ << "," << r.Q << "," << detail::csv_value(r.value);
        for (long long x : r.q) os << "," << x;
        os << "\n";
    }
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write " + path);
    out << body;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace dioph

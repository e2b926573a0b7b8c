// io.hpp: JSON state/channel files, solver reports and sweep CSV.
//
// StateFile:   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...], "name": ..., "F": ...}
// ChannelFile: {"d_in": n, "d_out": m, "kraus": [ <m × n matrix as above>, ... ]}
// Matrices are row-major nested arrays of [re, im] pairs.

#pragma once

#include "symext/boundary.hpp"
#include "symext/extend.hpp"
#include "symext/param.hpp"
#include "symext/quantum.hpp"

#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace symext::io {

using json = nlohmann::json;

// Malformed input: the message names the offending field.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StateFile {
    DensityMatrix state;
    std::optional<std::string> name;
    std::optional<double> F;
};

// ------------------------------- matrices ------------------------------------

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& field, Index rows, Index cols) {
    if (!j.is_array()) throw format_error(field + ": expected an array of rows");
    if (j.size() != rows)
        throw format_error(field + ": has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[r];
        const std::string rf = field + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != cols)
            throw format_error(rf + ": expected " + std::to_string(cols) + " [re, im] entries");
        for (Index c = 0; c < cols; ++c) {
            const json& e = row[c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw format_error(rf + "[" + std::to_string(c) + "]: expected a [re, im] pair of numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

namespace detail {

inline const json& require_field(const json& j, const char* key) {
    if (!j.is_object()) throw format_error("document: expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw format_error(std::string(key) + ": missing field");
    return *it;
}

inline Index require_dim(const json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() <= 0) throw format_error(field + ": expected a positive integer");
    return j.get<Index>();
}

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw format_error(std::string("document: malformed JSON: ") + e.what());
    }
}

} // namespace detail

// -------------------------------- states -------------------------------------

inline json state_to_json(const DensityMatrix& rho, const std::optional<std::string>& name = std::nullopt,
                          const std::optional<double>& f = std::nullopt) {
    json j;
    j["dims"] = rho.dims().values();
    j["matrix"] = matrix_to_json(rho.matrix());
    if (name) j["name"] = *name;
    if (f) j["F"] = *f;
    return j;
}

inline StateFile state_from_json(const json& j) {
    const json& dj = detail::require_field(j, "dims");
    if (!dj.is_array() || dj.empty()) throw format_error("dims: expected a non-empty array of positive integers");
    std::vector<Index> dims;
    for (std::size_t k = 0; k < dj.size(); ++k) dims.push_back(detail::require_dim(dj[k], "dims[" + std::to_string(k) + "]"));
    const TensorDims td(dims);
    const ComplexMatrix m = matrix_from_json(detail::require_field(j, "matrix"), "matrix", td.total(), td.total());

    std::optional<std::string> name;
    std::optional<double> f;
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw format_error("name: expected a string");
        name = it->get<std::string>();
    }
    if (auto it = j.find("F"); it != j.end()) {
        if (!it->is_number()) throw format_error("F: expected a number");
        f = it->get<double>();
    }
    return {DensityMatrix(m, td), name, f};
}

inline StateFile parse_state(const std::string& text) { return state_from_json(detail::parse_text(text)); }

// ------------------------------- channels ------------------------------------

inline json channel_to_json(const KrausChannel& ch) {
    json j;
    j["d_in"] = ch.d_in();
    j["d_out"] = ch.d_out();
    j["kraus"] = json::array();
    for (const auto& k : ch.kraus()) j["kraus"].push_back(matrix_to_json(k));
    return j;
}

inline KrausChannel channel_from_json(const json& j) {
    const Index d_in = detail::require_dim(detail::require_field(j, "d_in"), "d_in");
    const Index d_out = detail::require_dim(detail::require_field(j, "d_out"), "d_out");
    const json& kj = detail::require_field(j, "kraus");
    if (!kj.is_array() || kj.empty()) throw format_error("kraus: expected a non-empty array of matrices");
    std::vector<ComplexMatrix> kraus;
    for (std::size_t k = 0; k < kj.size(); ++k)
        kraus.push_back(matrix_from_json(kj[k], "kraus[" + std::to_string(k) + "]", d_out, d_in));
    return KrausChannel(d_in, d_out, std::move(kraus));
}

inline KrausChannel parse_channel(const std::string& text) { return channel_from_json(detail::parse_text(text)); }

/// A document is a channel file when it carries a "kraus" field.
inline bool looks_like_channel(const json& j) { return j.is_object() && j.contains("kraus"); }

// -------------------------------- reports ------------------------------------

inline json certificate_to_json(const ExtensionCertificate& c) {
    json j;
    j["verdict"] = to_string(c.verdict);
    j["psd_residual"] = c.psd_residual;
    j["swap_residual"] = c.swap_residual;
    j["pt_residual"] = c.pt_residual;
    j["iterations"] = c.iterations;
    j["face_dimension"] = c.face_dimension;
    if (c.verdict == Verdict::Feasible) {
        j["extension"] = {{"dims", c.dims.values()}, {"matrix", matrix_to_json(c.candidate)}};
    }
    return j;
}

inline json bound_report_to_json(const BoundReport& b) {
    return {{"hashing", b.hashing},
            {"lower", b.lower},
            {"r_estimate", b.r_estimate},
            {"fw_gap", b.fw_gap},
            {"extendibility", to_string(b.extendibility)},
            {"zero_certified", b.zero_certified},
            {"upper", b.upper},
            {"negativity", b.negativity},
            {"consistent", b.consistent}};
}

/// Human-readable bound report.
inline std::string render_bound_report(const BoundReport& b) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    os << "lower bound (hashing)   : " << b.lower << "  (coherent information " << b.hashing << ")\n";
    os << "R_E estimate            : " << b.r_estimate << "  (Frank-Wolfe gap " << std::scientific
       << std::setprecision(2) << b.fw_gap << std::fixed << std::setprecision(6) << ")\n";
    os << "symmetric extension     : " << to_string(b.extendibility) << "\n";
    os << "upper bound on D->      : " << b.upper << "\n";
    os << "negativity              : " << b.negativity << "\n";
    if (b.zero_certified) {
        os << "D\u2192 = 0 (symmetric extension found)";
        if (b.negativity > 1e-9) os << "; negativity > 0";
        os << "\nverdict                 : D\u2192 = 0 certified\n";
    }
    if (!b.consistent) os << "warning: hashing bound exceeds the single-copy R_E estimate\n";
    return os.str();
}

inline constexpr const char* sweep_csv_header = "F,verdict,psd_res,swap_res,pt_res,iters";

inline void write_sweep_csv(std::ostream& os, const SweepResult& s) {
    os << sweep_csv_header << '\n';
    os << std::setprecision(10);
    for (const auto& r : s.rows)
        os << r.F << ',' << to_string(r.verdict) << ',' << r.psd_residual << ',' << r.swap_residual << ','
           << r.pt_residual << ',' << r.iterations << '\n';
}

// --------------------------------- files -------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot write file");
    out << text;
}

} // namespace symext::io

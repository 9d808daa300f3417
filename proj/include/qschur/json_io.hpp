#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qschur/qmatrix.hpp"
#include "qschur/quaternion.hpp"
#include "qschur/realization.hpp"
#include "qschur/series.hpp"

namespace qschur {

using json = nlohmann::json;

// Wire formats: quaternion [w,x,y,z]; matrix {"rows","cols","data"} row-major;
// series {"trunc","coeffs"}; realization {"A","B","C","D"}. Parsers unwrap a
// {"result": ...} envelope so that one command's report feeds the next.

inline json to_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

namespace detail {

inline const json& unwrap(const json& j) {
    if (j.is_object() && j.contains("result")) return unwrap(j.at("result"));
    return j;
}

inline double number_at(const json& j, const char* what) {
    if (!j.is_number()) raise(Errc::ParseError, std::string(what) + ": expected a number");
    return j.get<double>();
}

} // namespace detail

inline Quaternion quaternion_from_json(const json& jin) {
    const json& j = detail::unwrap(jin);
    if (!j.is_array() || j.size() != 4)
        raise(Errc::ParseError, "quaternion: expected [w, x, y, z]");
    return Quaternion{detail::number_at(j[0], "quaternion[0]"), detail::number_at(j[1], "quaternion[1]"),
                      detail::number_at(j[2], "quaternion[2]"), detail::number_at(j[3], "quaternion[3]")};
}

inline json to_json(const QMatrix& m) {
    json data = json::array();
    for (const auto& q : m.data()) data.push_back(to_json(q));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline QMatrix qmatrix_from_json(const json& jin) {
    const json& j = detail::unwrap(jin);
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        raise(Errc::ParseError, "matrix: expected {rows, cols, data}");
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols)
        raise(Errc::ParseError, "matrix: data length must be rows*cols");
    QMatrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t jcol = 0; jcol < cols; ++jcol) m(i, jcol) = quaternion_from_json(data[k++]);
    return m;
}

inline json to_json(const QSeries& s) {
    json coeffs = json::array();
    for (const auto& q : s.coeffs()) coeffs.push_back(to_json(q));
    return json{{"trunc", s.trunc()}, {"coeffs", coeffs}};
}

inline QSeries qseries_from_json(const json& jin) {
    const json& j0 = detail::unwrap(jin);
    const json& j = j0.is_object() && j0.contains("series") ? j0.at("series") : j0;
    if (!j.is_object() || !j.contains("coeffs"))
        raise(Errc::ParseError, "series: expected {trunc, coeffs}");
    const json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || coeffs.empty())
        raise(Errc::ParseError, "series: coeffs must be a nonempty array");
    std::vector<Quaternion> c;
    c.reserve(coeffs.size());
    for (const auto& cj : coeffs) c.push_back(quaternion_from_json(cj));
    QSeries s(std::move(c));
    if (j.contains("trunc")) {
        const auto trunc = j.at("trunc").get<std::size_t>();
        s = s.resized(trunc);  // pad with zeros or cut to the declared degree
    }
    return s;
}

inline json to_json(const MatrixQSeries& s) {
    json coeffs = json::array();
    for (const auto& m : s.coeffs()) coeffs.push_back(to_json(m));
    return json{{"trunc", s.trunc()}, {"coeffs", coeffs}};
}

inline MatrixQSeries matrix_qseries_from_json(const json& jin) {
    const json& j0 = detail::unwrap(jin);
    const json& j = j0.is_object() && j0.contains("series") ? j0.at("series") : j0;
    if (!j.is_object() || !j.contains("coeffs"))
        raise(Errc::ParseError, "matrix series: expected {trunc, coeffs}");
    const json& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || coeffs.empty())
        raise(Errc::ParseError, "matrix series: coeffs must be a nonempty array");
    // scalar series are accepted and promoted to 1x1 blocks
    if (coeffs[0].is_array()) return MatrixQSeries::from_scalar(qseries_from_json(j));
    std::vector<QMatrix> c;
    c.reserve(coeffs.size());
    for (const auto& cj : coeffs) c.push_back(qmatrix_from_json(cj));
    return MatrixQSeries(std::move(c));
}

inline json to_json(const Realization& r) {
    return json{{"A", to_json(r.A)}, {"B", to_json(r.B)}, {"C", to_json(r.C)}, {"D", to_json(r.D)}};
}

inline Realization realization_from_json(const json& jin) {
    const json& j0 = detail::unwrap(jin);
    const json& j = j0.is_object() && j0.contains("realization") ? j0.at("realization") : j0;
    if (!j.is_object() || !j.contains("A") || !j.contains("B") || !j.contains("C") || !j.contains("D"))
        raise(Errc::ParseError, "realization: expected {A, B, C, D}");
    return Realization(qmatrix_from_json(j.at("A")), qmatrix_from_json(j.at("B")),
                       qmatrix_from_json(j.at("C")), qmatrix_from_json(j.at("D")));
}

inline std::vector<Quaternion> points_from_json(const json& jin) {
    const json& j = detail::unwrap(jin);
    const json& arr = j.is_object() && j.contains("points") ? j.at("points") : j;
    if (!arr.is_array()) raise(Errc::ParseError, "points: expected an array of quaternions");
    std::vector<Quaternion> pts;
    pts.reserve(arr.size());
    for (const auto& pj : arr) pts.push_back(quaternion_from_json(pj));
    return pts;
}

/// Input sequence for simulations: array of quaternions (1x1 blocks) or of
/// matrix objects.
inline std::vector<QMatrix> input_sequence_from_json(const json& jin) {
    const json& j = detail::unwrap(jin);
    const json& arr = j.is_object() && j.contains("inputs") ? j.at("inputs") : j;
    if (!arr.is_array() || arr.empty())
        raise(Errc::ParseError, "inputs: expected a nonempty array");
    std::vector<QMatrix> seq;
    seq.reserve(arr.size());
    for (const auto& uj : arr) {
        if (uj.is_array())
            seq.push_back(QMatrix::scalar(quaternion_from_json(uj)));
        else
            seq.push_back(qmatrix_from_json(uj));
    }
    return seq;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, path + ": cannot open");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) raise(Errc::ParseError, path + ": malformed JSON");
    return j;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(Errc::ParseError, what + ": malformed JSON");
    return j;
}

} // namespace qschur

#include "framekit/json_io.hpp"

#include <fstream>
#include <sstream>

#include "framekit/errors.hpp"

namespace framekit::io {

namespace {

double number(const json& j, const char* what) {
    if (!j.is_number()) throw InputError(std::string(what) + ": expected a number");
    return j.get<double>();
}

Eigen::Index count(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number_integer())
        throw InputError(std::string("missing integer field \"") + key + "\"");
    const auto v = obj[key].get<std::int64_t>();
    if (v < 1) throw InputError(std::string("field \"") + key + "\" must be positive");
    return static_cast<Eigen::Index>(v);
}

} // namespace

json to_json(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw InputError("complex entry must be [re, im]");
    return {number(j[0], "complex re"), number(j[1], "complex im")};
}

json vector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

CVector vector_from_json(const json& j) {
    if (!j.is_array()) throw InputError("vector must be an array of [re, im] pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    require_finite(v, "vector");
    return v;
}

json matrix_to_json(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
    return out;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
    const auto cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw InputError("matrix rows must be non-empty arrays");
    CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const CVector row = vector_from_json(j[r]);
        if (static_cast<std::size_t>(row.size()) != cols) throw InputError("matrix rows differ in length");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

json frame_to_json(const Frame& f) {
    json out;
    out["dim"] = f.dim();
    json vecs = json::array();
    for (Eigen::Index n = 0; n < f.size(); ++n) vecs.push_back(vector_to_json(f.vector(n)));
    out["vectors"] = std::move(vecs);
    return out;
}

Frame frame_from_json(const json& j) {
    if (!j.is_object()) throw InputError("frame: expected an object");
    const Eigen::Index d = count(j, "dim");
    if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
        throw InputError("frame: \"vectors\" must be a non-empty array");
    std::vector<CVector> vecs;
    vecs.reserve(j["vectors"].size());
    for (const auto& v : j["vectors"]) {
        vecs.push_back(vector_from_json(v));
        if (vecs.back().size() != d) throw InputError("frame: vector length differs from dim");
    }
    return Frame::from_vectors(vecs);
}

ApproxDualParams params_from_json(const json& j, const Frame& f) {
    if (!j.is_object()) throw InputError("params: expected an object");
    CMatrix A = j.contains("A") ? matrix_from_json(j["A"]) : identity(f.dim());
    CMatrix theta = j.contains("Theta") ? matrix_from_json(j["Theta"])
                                        : CMatrix::Zero(f.size(), f.dim());
    if (A.rows() != f.dim() || A.cols() != f.dim()) throw InputError("params: A must be d x d");
    if (theta.rows() != f.size() || theta.cols() != f.dim())
        throw InputError("params: Theta must be N x d");
    return make_params(std::move(A), std::move(theta));
}

json gabor_to_json(const GaborSystem& sys) {
    json out;
    out["L"] = sys.L;
    out["a"] = sys.a;
    out["b"] = sys.b;
    out["window"] = vector_to_json(sys.window);
    return out;
}

GaborSystem gabor_from_json(const json& j) {
    if (!j.is_object()) throw InputError("Gabor system: expected an object");
    GaborSystem sys;
    sys.L = count(j, "L");
    sys.a = count(j, "a");
    sys.b = count(j, "b");
    if (!j.contains("window")) throw InputError("Gabor system: missing \"window\"");
    sys.window = vector_from_json(j["window"]);
    sys.validate();
    return sys;
}

json audit_to_json(const BoundAudit& a) {
    json out;
    out["name"] = a.name;
    out["lhs"] = a.lhs;
    out["rhs"] = a.rhs;
    out["preconditions_met"] = a.preconditions_met;
    out["holds"] = a.holds;
    out["slack"] = a.slack;
    return out;
}

json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << dump(j);
    if (!out) throw InputError("write failed for " + path.string());
}

} // namespace framekit::io

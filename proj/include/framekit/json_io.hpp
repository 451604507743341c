#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "framekit/approx_dual.hpp"
#include "framekit/audit.hpp"
#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"

namespace framekit::io {

using json = nlohmann::ordered_json;

/// [re, im]. Plain numbers are accepted on input as real values.
json to_json(cdouble z);
cdouble complex_from_json(const json& j);

/// Array of complex pairs.
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

/// Row-major: [[[re, im], ...], ...]. Throws InputError on ragged input.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// {"dim": d, "vectors": [[[re, im], ...], ...]}
json frame_to_json(const Frame& f);
Frame frame_from_json(const json& j);

/// {"A": ..., "Theta": ...}; "Theta" may be omitted (zero).
ApproxDualParams params_from_json(const json& j, const Frame& f);

/// {"L", "a", "b", "window"}
json gabor_to_json(const GaborSystem& sys);
GaborSystem gabor_from_json(const json& j);

json audit_to_json(const BoundAudit& a);

/// Throws InputError on I/O or parse failure.
json read_file(const std::filesystem::path& path);

/// Pretty-printed with a trailing newline. Throws InputError if unwritable.
void write_file(const std::filesystem::path& path, const json& j);

std::string dump(const json& j);

} // namespace framekit::io

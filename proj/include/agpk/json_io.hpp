#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "agpk/idempotent_lab.hpp"
#include "agpk/norm_engine.hpp"
#include "agpk/pick_sdp.hpp"
#include "agpk/presentation.hpp"

/// JSON encodings shared by the CLI, the tests and golden files.
///
///   complex       number | [re, im]
///   complexmatrix {"rows": m, "cols": n, "re": [...], "im": [...]}   row-major
///   point         [complex, ...]                                      one per coordinate
///   poly          {"terms": [{"exp": [..], "re": .., "im": ..}, ...]}
///   entry         {"num": poly, "den": poly} | poly                   den defaults to 1
///   fnmatrix      {"rows": m, "cols": n, "entries": [[entry, ...], ...]}
///   presentation  {"dim": N, "name": str, "functions": [fnmatrix, ...]}
///                 | {"preset": name, "params": {...}}
namespace agpk::json_io {

using Json = nlohmann::ordered_json;

/// Input data does not follow the schema above.
class SchemaError : public Error {
  public:
    using Error::Error;
};

Complex parse_complex(const Json& j);
Json complex_to_json(Complex z);

CMatrix parse_complex_matrix(const Json& j);
/// complexmatrix, or a bare complex read as 1×1.
CMatrix parse_matrix_or_scalar(const Json& j);
Json matrix_to_json(const CMatrix& m);

Point parse_point(const Json& j);
Json point_to_json(const Point& z);
std::vector<Point> parse_points(const Json& j);
Json points_to_json(const std::vector<Point>& pts);

MultiPoly parse_poly(const Json& j, std::size_t dim);
Json poly_to_json(const MultiPoly& p);
FnMatrix parse_fn_matrix(const Json& j, std::size_t dim);
Json fn_matrix_to_json(const FnMatrix& f);

Presentation parse_presentation(const Json& j);
Json presentation_to_json(const Presentation& p);

Certificate parse_certificate(const Json& j);
Json certificate_to_json(const Certificate& c);

KIdempotentAlgebra parse_algebra(const Json& j);
Json algebra_to_json(const KIdempotentAlgebra& a);

Json norm_result_to_json(const NormResult& r);

/// Serializes with doubles at 17 significant digits and non-finite values as
/// null. indent < 0 gives compact output.
std::string dump(const Json& j, int indent = 2);

/// Input text is not valid JSON.
class MalformedJsonError : public Error {
  public:
    using Error::Error;
};

/// Parse text; throws MalformedJsonError carrying "line L, column C" on malformed input.
Json parse_text(const std::string& text);

}  // namespace agpk::json_io

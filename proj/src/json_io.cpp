#include "agpk/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace agpk::json_io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw SchemaError(what); }

double number(const Json& j, const char* what) {
    if (!j.is_number()) schema(std::string(what) + " must be a number");
    return j.get<double>();
}

std::size_t count(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
        schema(std::string("field '") + key + "' must be a nonnegative integer");
    }
    return j.at(key).get<std::size_t>();
}

Json finite(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Complex parse_complex(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    schema("complex number must be a number or [re, im]");
}

Json complex_to_json(Complex z) { return Json::array({finite(z.real()), finite(z.imag())}); }

CMatrix parse_complex_matrix(const Json& j) {
    if (!j.is_object()) schema("complex matrix must be an object");
    const std::size_t rows = count(j, "rows");
    const std::size_t cols = count(j, "cols");
    if (!j.contains("re") || !j.at("re").is_array() || j.at("re").size() != rows * cols) {
        schema("complex matrix 're' must hold rows*cols numbers");
    }
    const bool has_im = j.contains("im") && !j.at("im").is_null();
    if (has_im && (!j.at("im").is_array() || j.at("im").size() != rows * cols)) {
        schema("complex matrix 'im' must hold rows*cols numbers");
    }
    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t k = r * cols + c;
            const double re = number(j.at("re")[k], "matrix entry");
            const double im = has_im ? number(j.at("im")[k], "matrix entry") : 0.0;
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re, im);
        }
    }
    return m;
}

CMatrix parse_matrix_or_scalar(const Json& j) {
    if (j.is_object()) return parse_complex_matrix(j);
    return CMatrix::Constant(1, 1, parse_complex(j));
}

Json matrix_to_json(const CMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(finite(m(r, c).real()));
            im.push_back(finite(m(r, c).imag()));
        }
    }
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

Point parse_point(const Json& j) {
    if (!j.is_array() || j.empty()) schema("point must be a non-empty array of complex coordinates");
    Point z;
    for (const auto& c : j) z.push_back(parse_complex(c));
    return z;
}

Json point_to_json(const Point& z) {
    Json out = Json::array();
    for (const Complex c : z) out.push_back(complex_to_json(c));
    return out;
}

std::vector<Point> parse_points(const Json& j) {
    if (!j.is_array()) schema("points must be an array");
    std::vector<Point> out;
    for (const auto& p : j) out.push_back(parse_point(p));
    return out;
}

Json points_to_json(const std::vector<Point>& pts) {
    Json out = Json::array();
    for (const auto& p : pts) out.push_back(point_to_json(p));
    return out;
}

MultiPoly parse_poly(const Json& j, std::size_t dim) {
    if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array()) {
        schema("polynomial must be {\"terms\": [...]}");
    }
    MultiPoly p(dim);
    for (const auto& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("exp") || !t.at("exp").is_array()) schema("term needs an 'exp' array");
        Exponent e;
        for (const auto& x : t.at("exp")) {
            if (!x.is_number_integer()) schema("exponents must be integers");
            e.push_back(x.get<int>());
        }
        if (e.size() != dim) {
            schema("term exponent has length " + std::to_string(e.size()) + ", expected " + std::to_string(dim));
        }
        const double re = t.contains("re") ? number(t.at("re"), "term 're'") : 0.0;
        const double im = t.contains("im") ? number(t.at("im"), "term 'im'") : 0.0;
        p.add_term(e, {re, im});
    }
    return p;
}

Json poly_to_json(const MultiPoly& p) {
    Json terms = Json::array();
    for (const auto& [exp, c] : p.terms()) {
        Json t;
        t["exp"] = exp;
        t["re"] = finite(c.real());
        t["im"] = finite(c.imag());
        terms.push_back(std::move(t));
    }
    Json out;
    out["terms"] = std::move(terms);
    return out;
}

FnMatrix parse_fn_matrix(const Json& j, std::size_t dim) {
    if (!j.is_object()) schema("function matrix must be an object");
    const std::size_t rows = count(j, "rows");
    const std::size_t cols = count(j, "cols");
    if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").size() != rows) {
        schema("'entries' must have one array per row");
    }
    std::vector<RationalFn> entries;
    for (const auto& row : j.at("entries")) {
        if (!row.is_array() || row.size() != cols) schema("each entries row must have 'cols' items");
        for (const auto& e : row) {
            if (e.contains("num")) {
                MultiPoly num = parse_poly(e.at("num"), dim);
                if (e.contains("den") && !e.at("den").is_null()) {
                    entries.emplace_back(std::move(num), parse_poly(e.at("den"), dim));
                } else {
                    entries.emplace_back(std::move(num));
                }
            } else {
                entries.emplace_back(parse_poly(e, dim));
            }
        }
    }
    return FnMatrix(rows, cols, std::move(entries));
}

Json fn_matrix_to_json(const FnMatrix& f) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < f.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < f.cols(); ++c) {
            Json e;
            e["num"] = poly_to_json(f(r, c).num);
            e["den"] = poly_to_json(f(r, c).den);
            row.push_back(std::move(e));
        }
        rows.push_back(std::move(row));
    }
    Json out;
    out["rows"] = f.rows();
    out["cols"] = f.cols();
    out["entries"] = std::move(rows);
    return out;
}

Presentation parse_presentation(const Json& j) {
    if (j.is_string()) return preset(j.get<std::string>(), PresetParams{});
    if (!j.is_object()) schema("domain must be an object or a preset name");
    if (j.contains("preset")) {
        if (!j.at("preset").is_string()) schema("'preset' must be a string");
        PresetParams params;
        if (j.contains("params")) {
            const Json& pj = j.at("params");
            if (!pj.is_object()) schema("'params' must be an object");
            if (pj.contains("n")) params.n = count(pj, "n");
            if (pj.contains("rows")) params.rows = count(pj, "rows");
            if (pj.contains("cols")) params.cols = count(pj, "cols");
            if (pj.contains("a")) params.a = parse_complex(pj.at("a"));
            if (pj.contains("b")) params.b = parse_complex(pj.at("b"));
            if (pj.contains("r")) params.r = number(pj.at("r"), "'r'");
        }
        return preset(j.at("preset").get<std::string>(), params);
    }
    Presentation p;
    p.dim = count(j, "dim");
    if (j.contains("name")) {
        if (!j.at("name").is_string()) schema("'name' must be a string");
        p.name = j.at("name").get<std::string>();
    }
    if (!j.contains("functions") || !j.at("functions").is_array()) schema("'functions' must be an array");
    for (const auto& f : j.at("functions")) p.functions.push_back(parse_fn_matrix(f, p.dim));
    if (j.contains("sample_center")) p.sample_center = parse_point(j.at("sample_center"));
    if (j.contains("sample_radius")) p.sample_radius = number(j.at("sample_radius"), "'sample_radius'");
    p.validate();
    return p;
}

Json presentation_to_json(const Presentation& p) {
    Json out;
    out["dim"] = p.dim;
    out["name"] = p.name;
    Json fns = Json::array();
    for (const auto& f : p.functions) fns.push_back(fn_matrix_to_json(f));
    out["functions"] = std::move(fns);
    if (!p.sample_center.empty()) out["sample_center"] = point_to_json(p.sample_center);
    out["sample_radius"] = p.sample_radius;
    return out;
}

Certificate parse_certificate(const Json& j) {
    if (!j.is_object()) schema("certificate must be an object");
    const Json& c = j.contains("certificate") ? j.at("certificate") : j;
    if (!c.contains("gamma0") || !c.contains("gammas") || !c.at("gammas").is_array()) {
        schema("certificate needs 'gamma0' and a 'gammas' array");
    }
    Certificate cert;
    cert.gamma0 = parse_complex_matrix(c.at("gamma0"));
    for (const auto& g : c.at("gammas")) cert.gammas.push_back(parse_complex_matrix(g));
    if (c.contains("R") && !c.at("R").is_null()) cert.r = parse_complex_matrix(c.at("R"));
    if (c.contains("residual") && c.at("residual").is_number()) cert.residual = c.at("residual").get<double>();
    if (c.contains("min_eig") && c.at("min_eig").is_number()) cert.min_eig = c.at("min_eig").get<double>();
    if (c.contains("level")) cert.level = number(c.at("level"), "'level'");
    return cert;
}

Json certificate_to_json(const Certificate& c) {
    Json out;
    out["gamma0"] = matrix_to_json(c.gamma0);
    Json gammas = Json::array();
    for (const auto& g : c.gammas) gammas.push_back(matrix_to_json(g));
    out["gammas"] = std::move(gammas);
    out["R"] = c.r ? matrix_to_json(*c.r) : Json(nullptr);
    out["residual"] = finite(c.residual);
    out["min_eig"] = finite(c.min_eig);
    out["level"] = finite(c.level);
    return out;
}

KIdempotentAlgebra parse_algebra(const Json& j) {
    const Json& list = j.is_object() && j.contains("idempotents") ? j.at("idempotents") : j;
    if (!list.is_array() || list.empty()) schema("algebra must be a non-empty list of complex matrices");
    KIdempotentAlgebra alg;
    for (const auto& m : list) alg.idempotents.push_back(parse_complex_matrix(m));
    return alg;
}

Json algebra_to_json(const KIdempotentAlgebra& a) {
    Json out = Json::array();
    for (const auto& e : a.idempotents) out.push_back(matrix_to_json(e));
    return out;
}

Json norm_result_to_json(const NormResult& r) {
    Json out;
    out["lower"] = finite(r.lower);
    out["upper"] = finite(r.upper);
    out["witness"] = points_to_json(r.witness);
    out["certificate"] = certificate_to_json(r.certificate);
    out["iterations"] = r.iterations;
    out["stalled"] = r.stalled;
    out["inconclusive"] = r.inconclusive;
    return out;
}

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // keep it a float token so readers do not reparse it as an integer
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void write(std::ostringstream& out, const Json& j, int indent, int depth) {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (pretty) out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out << ',';
                first = false;
                newline(depth + 1);
                out << Json(key).dump() << (pretty ? ": " : ":");
                write(out, value, indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // numeric arrays stay on one line
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            out << '[';
            bool first = true;
            for (const auto& value : j) {
                if (!first) out << (flat && pretty ? ", " : ",");
                first = false;
                if (!flat) newline(depth + 1);
                write(out, value, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out << ']';
            return;
        }
        case Json::value_t::number_float:
            out << format_double(j.get<double>());
            return;
        default:
            out << j.dump();
    }
}

}  // namespace

std::string dump(const Json& j, int indent) {
    std::ostringstream out;
    write(out, j, indent, 0);
    return out.str();
}

Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << "malformed JSON at line " << line << ", column " << column << ": " << e.what();
        throw MalformedJsonError(msg.str());
    }
}

}  // namespace agpk::json_io

#include <cmath>
#include <sstream>

#include "agpk/errors.hpp"
#include "agpk/presentation.hpp"

namespace agpk {

namespace {

FnMatrix coordinate_row(std::size_t n) {
    std::vector<RationalFn> entries;
    for (std::size_t j = 0; j < n; ++j) entries.emplace_back(MultiPoly::variable(n, j));
    return FnMatrix(1, n, std::move(entries));
}

FnMatrix coordinate_col(std::size_t n) {
    std::vector<RationalFn> entries;
    for (std::size_t j = 0; j < n; ++j) entries.emplace_back(MultiPoly::variable(n, j));
    return FnMatrix(n, 1, std::move(entries));
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"disk", "polydisk", "ball_row", "ball_col", "ball_rowcol", "lens",
            "annulus", "matrix_ball", "disk_pow", "halfplane"};
}

Presentation preset(const std::string& name, const PresetParams& params) {
    Presentation p;
    p.name = name;
    if (name == "disk" || name == "polydisk") {
        const std::size_t n = name == "disk" ? 1 : params.n;
        require(n >= 1, "polydisk: n must be at least 1");
        p.dim = n;
        for (std::size_t j = 0; j < n; ++j) p.functions.push_back(FnMatrix::scalar(MultiPoly::variable(n, j)));
    } else if (name == "ball_row" || name == "ball_col" || name == "ball_rowcol") {
        require(params.n >= 1, name + ": n must be at least 1");
        p.dim = params.n;
        if (name != "ball_col") p.functions.push_back(coordinate_row(params.n));
        if (name != "ball_row") p.functions.push_back(coordinate_col(params.n));
    } else if (name == "lens") {
        require(std::abs(params.a - params.b) < 1.0, "lens: requires |a - b| < 1");
        p.dim = 1;
        const MultiPoly z = MultiPoly::variable(1, 0);
        p.functions.push_back(FnMatrix::scalar(z - MultiPoly::constant(1, params.a)));
        p.functions.push_back(FnMatrix::scalar(z - MultiPoly::constant(1, params.b)));
        p.sample_center = {0.5 * (params.a + params.b)};
    } else if (name == "annulus") {
        require(params.r > 0.0 && params.r < 1.0, "annulus: requires 0 < r < 1");
        p.dim = 1;
        const MultiPoly z = MultiPoly::variable(1, 0);
        p.functions.push_back(FnMatrix::scalar(z));
        p.functions.push_back(FnMatrix::scalar(RationalFn(MultiPoly::constant(1, params.r), z)));
    } else if (name == "matrix_ball") {
        require(params.rows >= 1 && params.cols >= 1, "matrix_ball: rows and cols must be at least 1");
        const std::size_t n = params.rows * params.cols;
        p.dim = n;
        std::vector<RationalFn> entries;
        for (std::size_t j = 0; j < n; ++j) entries.emplace_back(MultiPoly::variable(n, j));
        p.functions.emplace_back(params.rows, params.cols, std::move(entries));
    } else if (name == "disk_pow") {
        p.dim = 1;
        p.functions.push_back(FnMatrix::scalar(MultiPoly::monomial(1, {2})));
        p.functions.push_back(FnMatrix::scalar(MultiPoly::monomial(1, {3})));
    } else if (name == "halfplane") {
        require(params.n >= 1, "halfplane: n must be at least 1");
        p.dim = params.n;
        for (std::size_t j = 0; j < params.n; ++j) {
            const MultiPoly z = MultiPoly::variable(params.n, j);
            const MultiPoly one = MultiPoly::constant(params.n, 1.0);
            p.functions.push_back(FnMatrix::scalar(RationalFn(z - one, z + one)));
        }
        p.sample_center = Point(params.n, 1.0);
    } else {
        std::ostringstream msg;
        msg << "unknown preset '" << name << "'; known:";
        for (const auto& known : preset_names()) msg << ' ' << known;
        throw ParameterError(msg.str());
    }
    return p;
}

}  // namespace agpk

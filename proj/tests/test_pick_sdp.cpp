#include <doctest.h>

#include "agpk/errors.hpp"
#include "agpk/pick_sdp.hpp"
#include "support.hpp"

using namespace agpk;
using agpk::testing::random_in_disk;
using agpk::testing::scalar;

namespace {

const Presentation& disk() {
    static const Presentation p = preset("disk");
    return p;
}

InterpolationProblem disk_problem(const std::vector<Complex>& z, const std::vector<Complex>& w) {
    std::vector<Point> pts;
    std::vector<CMatrix> targets;
    for (Complex c : z) pts.push_back({c});
    for (Complex c : w) targets.push_back(scalar(c));
    return InterpolationProblem(disk(), pts, targets);
}

bool feasible(const InterpolationProblem& prob, double strict_eps = 0.0, SolverOptions opts = {}) {
    return std::holds_alternative<Feasible>(solve_feasibility(build_lmi(prob, strict_eps), opts));
}

// 2×2 determinant of the Pick matrix, written out by hand
double pick_det_2(Complex z1, Complex z2, Complex w1, Complex w2) {
    const double a = (1.0 - std::norm(w1)) / (1.0 - std::norm(z1));
    const double d = (1.0 - std::norm(w2)) / (1.0 - std::norm(z2));
    const Complex b = (1.0 - w1 * std::conj(w2)) / (1.0 - z1 * std::conj(z2));
    return a * d - std::norm(b);
}

}  // namespace

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(disk_problem({0.0, 0.0}, {0.1, 0.2}), DuplicatePointError);
    try {
        disk_problem({1.2}, {0.1});
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.margin() == doctest::Approx(-0.2));
    }
    CHECK_THROWS_AS(disk_problem({0.0, 0.5}, {0.1}), DimensionError);
    CHECK_THROWS_AS(InterpolationProblem(disk(), {{0.0}, {0.5}}, {scalar(0.1), CMatrix::Zero(2, 1)}), DimensionError);
    CHECK_THROWS_AS(InterpolationProblem(disk(), {{0.0, 0.1}}, {scalar(0.1)}), DimensionError);
}

TEST_CASE("delta blocks are Hermitian with positive diagonal") {
    const Presentation p = preset("ball_col", {.n = 2});
    const InterpolationProblem prob(p, {{0.1, 0.2}, {Complex(0, 0.3), -0.4}, {0.5, 0.1}},
                                    {scalar(0.1), scalar(0.2), scalar(0.3)});
    const DeltaBlocks db = compute_delta_blocks(prob);
    REQUIRE(db.blocks.size() == 1);
    REQUIRE(db.block_sizes[0] == 2);
    const CMatrix& big = db.blocks[0];
    CHECK((big - big.adjoint()).norm() == 0.0);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(linalg::min_eigenvalue(big.block(2 * i, 2 * i, 2, 2)) > 0.0);
}

TEST_CASE("build_lmi shapes") {
    SUBCASE("disk, one point") {
        const LmiDescriptor lmi = build_lmi(disk_problem({0.3}, {0.5}));
        CHECK(lmi.op->blocks == std::vector<Eigen::Index>{1, 1});
        CHECK(lmi.op->constraints() == 1);
        CHECK(lmi.target_blocks(0, 0).real() == doctest::Approx(0.75));
        CHECK(std::real(lmi.delta.blocks[0](0, 0)) == doctest::Approx(1.0 - 0.09));
    }
    SUBCASE("polydisk N=2, two points, scalar targets") {
        const InterpolationProblem prob(preset("polydisk", {.n = 2}), {{0.1, 0.2}, {0.3, -0.1}},
                                        {scalar(0.1), scalar(0.2)});
        const LmiDescriptor lmi = build_lmi(prob);
        // Γ₀ plus one 2×2 unknown per coordinate function
        CHECK(lmi.op->blocks == std::vector<Eigen::Index>{2, 2, 2});
        // a 2×2 Hermitian array: four real equations, three of them off the diagonal pair
        CHECK(lmi.op->constraints() == 4);
        CHECK(lmi.op->variables() == 12);
    }
    SUBCASE("matrix targets on the disk") {
        CMatrix w1(2, 2);
        CMatrix w2(2, 2);
        w1 << 0.1, 0.2, 0.0, 0.3;
        w2 << 0.0, 0.1, Complex(0, 0.2), 0.1;
        const InterpolationProblem prob(disk(), {{0.0}, {0.4}}, {w1, w2});
        const LmiDescriptor lmi = build_lmi(prob);
        CHECK(lmi.op->blocks == std::vector<Eigen::Index>{4, 4});
        const CMatrix s12 = CMatrix::Identity(2, 2) - w1 * w2.adjoint();
        CHECK((lmi.target_blocks.block(0, 2, 2, 2) - s12).norm() < 1e-15);
    }
    SUBCASE("strict_eps adds an R block") {
        const LmiDescriptor lmi = build_lmi(disk_problem({0.3, 0.1}, {0.5, 0.2}), 1e-3);
        CHECK(lmi.op->has_r);
        CHECK(lmi.op->blocks.back() == 1);
    }
}

TEST_CASE("target blocks are exactly Hermitian") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        std::vector<Point> pts;
        std::vector<CMatrix> targets;
        for (int i = 0; i < 3; ++i) {
            pts.push_back({random_in_disk(rng, 0.9)});
            targets.push_back(agpk::testing::random_matrix(rng, 2, 3));
        }
        const LmiDescriptor lmi = build_lmi(InterpolationProblem(disk(), pts, targets));
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index j = 0; j < 3; ++j)
                CHECK(lmi.target_blocks.block(i * 2, j * 2, 2, 2).adjoint() == lmi.target_blocks.block(j * 2, i * 2, 2, 2));
    }
}

TEST_CASE("solve_feasibility examples") {
    SUBCASE("single point, |w| < 1") {
        const auto prob = disk_problem({0.0}, {0.5});
        const SolveOutcome out = solve_feasibility(build_lmi(prob));
        REQUIRE(std::holds_alternative<Feasible>(out));
        const Certificate& c = std::get<Feasible>(out).certificate;
        CHECK(verify_certificate(prob, c).verdict);
        // 1 − |w|² = Γ₀ + γ·(1 − |z|²) with z = 0
        CHECK((c.gamma0(0, 0) + c.gammas[0](0, 0)).real() == doctest::Approx(0.75).epsilon(1e-6));
    }
    SUBCASE("Pick matrix with negative determinant") {
        CHECK(pick_det_2(0.0, 0.5, 0.0, 0.9) == doctest::Approx(-0.74666666).epsilon(1e-6));
        const SolveOutcome out = solve_feasibility(build_lmi(disk_problem({0.0, 0.5}, {0.0, 0.9})));
        REQUIRE(std::holds_alternative<Stalled>(out));
        CHECK(std::get<Stalled>(out).gap >= 1e-7);
    }
    SUBCASE("identity interpolant") {
        const auto prob = disk_problem({0.0, 0.5}, {0.0, 0.5});
        const SolveOutcome out = solve_feasibility(build_lmi(prob));
        REQUIRE(std::holds_alternative<Feasible>(out));
        const VerificationReport rep = verify_certificate(prob, std::get<Feasible>(out).certificate);
        CHECK(rep.verdict);
        CHECK(rep.residual < 1e-6);
    }
}

TEST_CASE("alternating projections reach the same verdicts on easy instances") {
    SolverOptions opts;
    opts.method = SolverMethod::dykstra;
    opts.max_iter = 200000;
    const auto easy = disk_problem({0.0, 0.5}, {0.1, 0.2});
    const SolveOutcome out = solve_feasibility(build_lmi(easy), opts);
    REQUIRE(std::holds_alternative<Feasible>(out));
    CHECK(verify_certificate(easy, std::get<Feasible>(out).certificate).verdict);
    CHECK(feasible(disk_problem({0.2}, {0.9}), 0.0, opts));
}

TEST_CASE("solver stops with InconclusiveError when out of iterations") {
    SolverOptions opts;
    opts.max_iter = 2;
    CHECK_THROWS_AS(solve_feasibility(build_lmi(disk_problem({0.0, 0.5, -0.3}, {0.0, 0.49, -0.2})), opts),
                    InconclusiveError);
}

TEST_CASE("verify_certificate") {
    SUBCASE("hand-built single-point certificate") {
        const Complex z = Complex(0.3, -0.2);
        const Complex w = 0.6;
        const auto prob = disk_problem({z}, {w});
        Certificate c;
        c.gamma0 = CMatrix::Zero(1, 1);
        c.gammas = {scalar((1.0 - std::norm(w)) / (1.0 - std::norm(z)))};
        const VerificationReport rep = verify_certificate(prob, c);
        CHECK(rep.verdict);
        CHECK(rep.residual < 1e-15);
    }
    SUBCASE("perturbed certificate is rejected") {
        const auto prob = disk_problem({0.0, 0.5}, {0.0, 0.5});
        Certificate c = std::get<Feasible>(solve_feasibility(build_lmi(prob))).certificate;
        c.gamma0(1, 1) += 1e-3;
        const VerificationReport rep = verify_certificate(prob, c);
        CHECK_FALSE(rep.verdict);
        CHECK(rep.residual == doctest::Approx(1e-3).epsilon(0.01));
    }
    SUBCASE("negative Gram block is rejected") {
        const auto prob = disk_problem({0.0}, {0.5});
        Certificate c;
        c.gamma0 = scalar(1.0);
        c.gammas = {scalar(-0.25)};
        const VerificationReport rep = verify_certificate(prob, c);
        CHECK(rep.residual < 1e-15);
        CHECK_FALSE(rep.verdict);
    }
    SUBCASE("shape mismatch") {
        const auto prob = disk_problem({0.0, 0.5}, {0.0, 0.5});
        Certificate c;
        c.gamma0 = CMatrix::Zero(1, 1);
        c.gammas = {CMatrix::Zero(2, 2)};
        CHECK_THROWS_AS(verify_certificate(prob, c), DimensionError);
    }
}

TEST_CASE("classical_pick_test examples") {
    CHECK_FALSE(classical_pick_test({0.0, 0.5}, {0.0, 0.9}, 1.0));
    CHECK(classical_pick_test({0.0, 0.5}, {0.0, 0.5}, 1.0));
    const CMatrix m = pick_matrix({0.0, 0.5}, {0.0, 0.5}, 1.0);
    CHECK((m - CMatrix::Ones(2, 2)).norm() < 1e-15);
    CHECK(classical_pick_test({0.1, Complex(0, 0.7), -0.4, 0.9}, {0.0, 0.0, 0.0, 0.0}, 1.0));
    CHECK_THROWS_AS(classical_pick_test({0.1, 0.1}, {0.0, 0.0}, 1.0), DuplicatePointError);
    CHECK_THROWS_AS(classical_pick_test({1.0}, {0.0}, 1.0), DomainError);
}

TEST_CASE("solver agrees with the classical Pick test on random disk instances") {
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int ell = 1 + trial % 4;
        std::vector<Complex> z;
        std::vector<Complex> w;
        for (int i = 0; i < ell; ++i) {
            z.push_back(random_in_disk(rng, 0.95));
            w.push_back(random_in_disk(rng, 1.5));
        }
        const double lam = linalg::min_eigenvalue(pick_matrix(z, w, 1.0));
        if (std::abs(lam) <= 1e-4) continue;
        ++compared;
        const auto prob = disk_problem(z, w);
        const SolveOutcome out = solve_feasibility(build_lmi(prob));
        CAPTURE(trial);
        CHECK(std::holds_alternative<Feasible>(out) == classical_pick_test(z, w, 1.0));
        if (auto* f = std::get_if<Feasible>(&out)) CHECK(verify_certificate(prob, f->certificate).verdict);
    }
    CHECK(compared > 30);
}

TEST_CASE("feasibility is preserved by shrinking the targets") {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Complex> z;
        std::vector<Complex> w;
        for (int i = 0; i < 3; ++i) {
            z.push_back(random_in_disk(rng, 0.9));
            w.push_back(random_in_disk(rng, 0.6));
        }
        if (!feasible(disk_problem(z, w))) continue;
        ++checked;
        for (double c : {0.0, 0.5, 0.9}) {
            std::vector<Complex> cw;
            for (Complex x : w) cw.push_back(c * x);
            CHECK(feasible(disk_problem(z, cw)));
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("strict feasibility implies non-strict feasibility") {
    std::mt19937_64 rng(31);
    int strict_count = 0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> z;
        std::vector<Complex> w;
        for (int i = 0; i < 3; ++i) {
            z.push_back(random_in_disk(rng, 0.9));
            w.push_back(random_in_disk(rng, 1.0));
        }
        const auto prob = disk_problem(z, w);
        const SolveOutcome strict = solve_feasibility(build_lmi(prob, 1e-6));
        if (auto* f = std::get_if<Feasible>(&strict)) {
            ++strict_count;
            REQUIRE(f->certificate.r.has_value());
            CHECK(verify_certificate(prob, f->certificate).verdict);
            CHECK(feasible(prob));
        }
    }
    CHECK(strict_count > 0);
}

TEST_CASE("scaled problems divide the targets") {
    const auto prob = disk_problem({0.0, 0.5}, {0.0, 0.6});
    CHECK_FALSE(feasible(prob));
    const auto scaled = prob.scaled(1.25);
    CHECK(std::abs(scaled.targets()[1](0, 0) - Complex(0.48)) < 1e-15);
    CHECK(feasible(scaled));
}

TEST_CASE("multi-constraint certificate verifies on the annulus") {
    const Presentation ann = preset("annulus", {.r = 0.5});
    const InterpolationProblem prob(ann, {{0.7}, {Complex(0, -0.8)}}, {scalar(0.1), scalar(0.2)});
    const SolveOutcome out = solve_feasibility(build_lmi(prob));
    REQUIRE(std::holds_alternative<Feasible>(out));
    const Certificate& c = std::get<Feasible>(out).certificate;
    CHECK(c.gammas.size() == 2);
    CHECK(verify_certificate(prob, c).verdict);
}

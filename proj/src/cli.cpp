#include "agpk/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "agpk/idempotent_lab.hpp"
#include "agpk/json_io.hpp"
#include "agpk/norm_engine.hpp"
#include "agpk/pick_sdp.hpp"
#include "agpk/repsearch.hpp"

namespace agpk::cli {

namespace {

using json_io::Json;

constexpr const char* kExitCodeHelp = R"(Exit codes:
  0   success (feasible / verified / check passed)
  1   numerically infeasible, verification failed, or check failed
  2   inconclusive (iteration limit reached while still improving)
  64  malformed JSON (message gives line and column)
  65  point outside the domain or duplicate points
  66  JSON schema or dimension error
  67  invalid parameter
  68  evaluation error (pole, singular denominator, non-commuting or inadmissible tuple)
  69  input file could not be read
  70  command-line usage error
Environment: AGPK_THREADS caps worker threads (default: hardware threads).)";

struct GlobalFlags {
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_iter = 0;
    int json_indent = 2;
    bool quiet = false;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* max_iter_opt = nullptr;
};

/// A problem file: domain plus whatever the command needs.
struct ProblemFile {
    Presentation domain;
    std::vector<Point> points;
    std::optional<std::vector<CMatrix>> targets;
    std::optional<FnMatrix> function;
    Json options = Json::object();
    Json raw;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProblemFile load_problem(const std::string& path, bool need_domain = true) {
    ProblemFile pf;
    pf.raw = json_io::parse_text(read_file(path));
    const Json& j = pf.raw;
    if (!j.is_object()) throw json_io::SchemaError("problem file must be a JSON object");
    if (j.contains("options")) pf.options = j.at("options");
    if (!need_domain) return pf;
    if (!j.contains("domain")) throw json_io::SchemaError("problem file needs a 'domain'");
    pf.domain = json_io::parse_presentation(j.at("domain"));
    if (j.contains("points")) pf.points = json_io::parse_points(j.at("points"));
    if (j.contains("targets")) {
        if (!j.at("targets").is_array()) throw json_io::SchemaError("'targets' must be an array");
        std::vector<CMatrix> targets;
        for (const auto& t : j.at("targets")) targets.push_back(json_io::parse_matrix_or_scalar(t));
        pf.targets = std::move(targets);
    }
    if (j.contains("function")) pf.function = json_io::parse_fn_matrix(j.at("function"), pf.domain.dim);
    return pf;
}

double option_double(const ProblemFile& pf, const char* key, double fallback) {
    if (pf.options.contains(key)) {
        if (!pf.options.at(key).is_number()) throw json_io::SchemaError(std::string("option '") + key + "' must be a number");
        return pf.options.at(key).get<double>();
    }
    return fallback;
}

std::size_t option_count(const Json& obj, const char* key, std::size_t fallback) {
    if (obj.contains(key)) {
        if (!obj.at(key).is_number_unsigned()) {
            throw json_io::SchemaError(std::string("option '") + key + "' must be a nonnegative integer");
        }
        return obj.at(key).get<std::size_t>();
    }
    return fallback;
}

/// Targets from the file, or f evaluated at the points.
std::vector<CMatrix> resolve_targets(const ProblemFile& pf) {
    if (pf.targets) return *pf.targets;
    if (pf.function) return evaluate_targets(*pf.function, pf.points);
    throw json_io::SchemaError("problem file needs 'targets' or 'function'");
}

const FnMatrix& require_function(const ProblemFile& pf) {
    if (!pf.function) throw json_io::SchemaError("problem file needs a 'function'");
    return *pf.function;
}

std::uint64_t resolve_seed(const GlobalFlags& g, const Json& section) {
    if (*g.seed_opt) return g.seed;
    if (section.contains("seed") && section.at("seed").is_number_unsigned()) return section.at("seed").get<std::uint64_t>();
    return 0;
}

SolverOptions solver_options(const GlobalFlags& g, const ProblemFile& pf) {
    SolverOptions s;
    s.max_iter = *g.max_iter_opt ? g.max_iter : option_count(pf.options, "max_iter", s.max_iter);
    if (pf.options.contains("method")) {
        const std::string m = pf.options.at("method").get<std::string>();
        if (m == "dykstra") {
            s.method = SolverMethod::dykstra;
        } else if (m != "accelerated") {
            throw ParameterError("unknown solver method '" + m + "'");
        }
    }
    return s;
}

struct Context {
    GlobalFlags& g;
    std::ostream& out;
    std::ostream& err;

    void emit(const Json& j) const { out << json_io::dump(j, g.json_indent) << '\n'; }
    void note(const std::string& msg) const {
        if (!g.quiet) err << msg << '\n';
    }
};

// -- commands --------------------------------------------------------------------

int cmd_certify(const Context& ctx, const std::string& path, std::optional<double> strict_eps) {
    const ProblemFile pf = load_problem(path);
    const InterpolationProblem base(pf.domain, pf.points, resolve_targets(pf));
    const double level = option_double(pf, "level", 1.0);
    const InterpolationProblem prob = level == 1.0 ? base : base.scaled(level);
    const double eps = strict_eps ? *strict_eps : option_double(pf, "strict_eps", 0.0);
    SolverOptions opts = solver_options(ctx.g, pf);
    if (*ctx.g.tol_opt) opts.tol_feas = ctx.g.tol;
    const std::uint64_t seed = resolve_seed(ctx.g, pf.options);

    const LmiDescriptor lmi = build_lmi(prob, eps);
    Json report;
    report["command"] = "certify";
    report["seed"] = seed;
    try {
        SolveOutcome outcome = solve_feasibility(lmi, opts);
        if (auto* f = std::get_if<Feasible>(&outcome)) {
            f->certificate.level = level;
            report["status"] = "feasible";
            report["iterations"] = f->iterations;
            report["certificate"] = json_io::certificate_to_json(f->certificate);
            ctx.emit(report);
            return kOk;
        }
        const auto& s = std::get<Stalled>(outcome);
        std::ostringstream msg;
        msg.precision(17);
        msg << "infeasible (numerical, gap=" << s.gap << ")";
        ctx.note(msg.str());
        report["status"] = "infeasible";
        report["gap"] = s.gap;
        report["iterations"] = s.iterations;
        ctx.emit(report);
        return kInfeasible;
    } catch (const InconclusiveError& e) {
        ctx.note(std::string("inconclusive: ") + e.what());
        report["status"] = "inconclusive";
        report["best_residual"] = e.best().residual;
        report["iterations"] = e.iterations();
        ctx.emit(report);
        return kInconclusive;
    }
}

BisectionOptions bisection_options(const Context& ctx, const ProblemFile& pf) {
    BisectionOptions b;
    b.tol = *ctx.g.tol_opt ? ctx.g.tol : option_double(pf, "tol", b.tol);
    b.strict_eps = option_double(pf, "strict_eps", 0.0);
    b.solver = solver_options(ctx.g, pf);
    return b;
}

int cmd_norm(const Context& ctx, const std::string& path) {
    const ProblemFile pf = load_problem(path);
    const std::uint64_t seed = resolve_seed(ctx.g, pf.options);
    try {
        const NormResult r = quotient_norm(pf.domain, pf.points, resolve_targets(pf), bisection_options(ctx, pf));
        Json report;
        report["command"] = "norm";
        report["seed"] = seed;
        const Json body = json_io::norm_result_to_json(r);
        for (const auto& [k, v] : body.items()) report[k] = v;
        ctx.emit(report);
        return kOk;
    } catch (const InconclusiveNormError& e) {
        ctx.note(std::string("inconclusive: ") + e.what());
        Json report;
        report["command"] = "norm";
        report["seed"] = seed;
        report["status"] = "inconclusive";
        ctx.emit(report);
        return kInconclusive;
    }
}

SamplerOptions sampler_options(const ProblemFile& pf, std::uint64_t seed) {
    SamplerOptions s;
    s.seed = seed;
    const Json sj = pf.options.contains("sampler") ? pf.options.at("sampler") : Json::object();
    if (sj.contains("kind")) {
        const std::string kind = sj.at("kind").get<std::string>();
        if (kind == "grid") {
            s.kind = SamplerKind::grid;
        } else if (kind == "random") {
            s.kind = SamplerKind::random;
        } else if (kind == "explicit") {
            s.kind = SamplerKind::explicit_points;
        } else {
            throw ParameterError("unknown sampler kind '" + kind + "' (grid|random|explicit)");
        }
    } else if (!pf.points.empty()) {
        s.kind = SamplerKind::explicit_points;
    }
    if (s.kind == SamplerKind::explicit_points) s.points = pf.points;
    s.count = option_count(sj, "count", s.count);
    s.max_subset = option_count(sj, "max_subset", s.max_subset);
    s.candidate_cap = option_count(sj, "candidate_cap", s.candidate_cap);
    if (sj.contains("margin_floor")) s.margin_floor = sj.at("margin_floor").get<double>();
    return s;
}

int cmd_estimate(const Context& ctx, const std::string& path) {
    const ProblemFile pf = load_problem(path);
    const FnMatrix& f = require_function(pf);
    const Json sj = pf.options.contains("sampler") ? pf.options.at("sampler") : Json::object();
    const std::uint64_t seed = resolve_seed(ctx.g, sj.contains("seed") ? sj : pf.options);
    const SamplerOptions sampler = sampler_options(pf, seed);
    try {
        const NormResult r = schur_agler_norm_estimate(f, pf.domain, sampler, bisection_options(ctx, pf));
        const auto samples = sample_points(pf.domain, sampler);
        Json report;
        report["command"] = "estimate";
        report["seed"] = seed;
        report["kind"] = "lower estimate of the Schur-Agler norm";
        report["samples"] = samples.size();
        report["sup_norm_lower"] = sup_norm_lower(f, pf.domain, samples);
        const Json body = json_io::norm_result_to_json(r);
        for (const auto& [k, v] : body.items()) report[k] = v;
        ctx.emit(report);
        return kOk;
    } catch (const InconclusiveNormError& e) {
        ctx.note(std::string("inconclusive: ") + e.what());
        return kInconclusive;
    }
}

int cmd_pick(const Context& ctx, const std::string& path, std::optional<double> level_flag) {
    const ProblemFile pf = load_problem(path, false);
    const Json& j = pf.raw;
    if (!j.contains("points") || !j.contains("targets")) throw json_io::SchemaError("pick needs 'points' and 'targets'");
    std::vector<Complex> z;
    std::vector<Complex> w;
    for (const auto& p : j.at("points")) {
        const Point pt = p.is_array() && !(p.size() == 2 && p[0].is_number()) ? json_io::parse_point(p)
                                                                             : Point{json_io::parse_complex(p)};
        if (pt.size() != 1) throw json_io::SchemaError("pick points must be scalars");
        z.push_back(pt[0]);
    }
    for (const auto& t : j.at("targets")) {
        const CMatrix m = json_io::parse_matrix_or_scalar(t);
        if (m.size() != 1) throw json_io::SchemaError("pick targets must be scalars");
        w.push_back(m(0, 0));
    }
    const double level = level_flag ? *level_flag : option_double(pf, "level", 1.0);
    if (!(level > 0.0)) throw ParameterError("level must be positive");
    const bool psd = classical_pick_test(z, w, level);
    Json report;
    report["command"] = "pick";
    report["seed"] = resolve_seed(ctx.g, pf.options);
    report["level"] = level;
    report["psd"] = psd;
    report["min_eig"] = linalg::min_eigenvalue(pick_matrix(z, w, level));
    ctx.emit(report);
    return psd ? kOk : kInfeasible;
}

struct IdemFlags {
    bool random = false;
    std::size_t count = 100;
    std::size_t k_max = 4;
    std::size_t d_max = 6;
    double cond = 20.0;
    std::size_t p = 1;
    double bisection_tol = 1e-7;
    std::string file;
};

int cmd_idem_check(const Context& ctx, const IdemFlags& flags) {
    constexpr double kRelTol = 1e-5;
    Json report;
    report["command"] = "idem-check";
    const double tol = *ctx.g.tol_opt ? ctx.g.tol : flags.bisection_tol;
    if (flags.random) {
        const std::uint64_t seed = *ctx.g.seed_opt ? ctx.g.seed : 0;
        double max_dev = 0.0;
        double max_rel = 0.0;
        std::size_t failures = 0;
        for (std::size_t t = 0; t < flags.count; ++t) {
            const NormAgreementTrial trial =
                norm_agreement_trial(seed, t, flags.k_max, flags.d_max, flags.cond, flags.p, tol);
            max_dev = std::max(max_dev, trial.deviation());
            max_rel = std::max(max_rel, trial.relative_deviation());
            if (trial.relative_deviation() >= kRelTol) ++failures;
        }
        report["seed"] = seed;
        report["count"] = flags.count;
        report["p"] = flags.p;
        report["max_deviation"] = max_dev;
        report["max_relative_deviation"] = max_rel;
        report["failures"] = failures;
        report["passed"] = failures == 0;
        ctx.emit(report);
        return failures == 0 ? kOk : kInfeasible;
    }
    if (flags.file.empty()) throw CLI::ValidationError("idem-check needs --random or a file");
    const Json j = json_io::parse_text(read_file(flags.file));
    if (!j.is_object() || !j.contains("algebra") || !j.contains("coeffs")) {
        throw json_io::SchemaError("idem-check file needs 'algebra' and 'coeffs'");
    }
    const KIdempotentAlgebra alg = json_io::parse_algebra(j.at("algebra"));
    alg.validate();
    std::vector<CMatrix> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(json_io::parse_matrix_or_scalar(c));
    const double a = algebra_norm(alg, coeffs);
    const double m = multiplier_norm_via_kernel(alg, coeffs, tol);
    const double rel = std::abs(a - m) / (1.0 + a);
    report["seed"] = *ctx.g.seed_opt ? ctx.g.seed : 0;
    report["algebra_norm"] = a;
    report["multiplier_norm"] = m;
    report["relation_defect"] = alg.relation_defect();
    report["relative_deviation"] = rel;
    report["passed"] = rel < kRelTol;
    ctx.emit(report);
    return rel < kRelTol ? kOk : kInfeasible;
}

int cmd_lower_bound(const Context& ctx, const std::string& path) {
    const ProblemFile pf = load_problem(path);
    const FnMatrix& f = require_function(pf);
    const Json sj = pf.options.contains("search") ? pf.options.at("search") : Json::object();
    SearchOptions opts;
    opts.seed = resolve_seed(ctx.g, sj.contains("seed") ? sj : pf.options);
    opts.restarts = option_count(sj, "restarts", opts.restarts);
    opts.steps = option_count(sj, "steps", opts.steps);
    opts.dim = option_count(sj, "dim", opts.dim);
    if (sj.contains("step_decay")) opts.step_decay = sj.at("step_decay").get<double>();
    const LowerBound lb = lower_bound(f, pf.domain, pf.points, opts);
    Json report;
    report["command"] = "lower-bound";
    report["seed"] = opts.seed;
    report["value"] = lb.value;
    report["margins"] = lb.best.margins;
    Json tuple = Json::array();
    for (const auto& t : lb.best.matrices) tuple.push_back(json_io::matrix_to_json(t));
    report["tuple"] = std::move(tuple);
    report["restart"] = *lb.best.provenance.restart;
    ctx.emit(report);
    return kOk;
}

int cmd_verify(const Context& ctx, const std::string& problem_path, const std::string& cert_path) {
    const ProblemFile pf = load_problem(problem_path);
    const InterpolationProblem prob(pf.domain, pf.points, resolve_targets(pf));
    const Certificate cert = json_io::parse_certificate(json_io::parse_text(read_file(cert_path)));
    const VerificationReport rep = verify_certificate(prob, cert);
    Json report;
    report["command"] = "verify";
    report["seed"] = resolve_seed(ctx.g, pf.options);
    report["verdict"] = rep.verdict;
    report["residual"] = rep.residual;
    report["min_eig_per_block"] = rep.min_eig_per_block;
    ctx.emit(report);
    if (!rep.verdict) ctx.note("certificate rejected");
    return rep.verdict ? kOk : kInfeasible;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"agpk: interpolation feasibility, quotient norms and Schur-Agler estimates on presented domains"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    g.tol_opt = app.add_option("--tol", g.tol, "Primary tolerance of the command (solver residual / bisection width)");
    g.seed_opt = app.add_option("--seed", g.seed, "Seed for randomized commands; echoed in the output");
    g.max_iter_opt = app.add_option("--max-iter", g.max_iter, "Solver iteration cap");
    app.add_option("--json-indent", g.json_indent, "Indent for JSON output (negative: compact)");
    app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");

    std::string problem;
    std::string certificate;
    double strict_eps = 0.0;
    double level = 1.0;
    IdemFlags idem;

    auto* certify = app.add_subcommand("certify", "Decide feasibility at level 1 and emit a certificate");
    certify->add_option("problem", problem, "Problem JSON")->required();
    auto* strict_opt = certify->add_option("--strict-eps", strict_eps, "Require R >= strict_eps*I");

    auto* norm = app.add_subcommand("norm", "Quotient norm over the given points by bisection");
    norm->add_option("problem", problem, "Problem JSON")->required();

    auto* estimate = app.add_subcommand("estimate", "Lower estimate of the Schur-Agler norm of 'function'");
    estimate->add_option("problem", problem, "Problem JSON")->required();

    auto* pick = app.add_subcommand("pick", "Classical Pick matrix test on the disk");
    pick->add_option("problem", problem, "Problem JSON with scalar points and targets")->required();
    auto* level_opt = pick->add_option("--level", level, "Norm level t");

    auto* idem_cmd = app.add_subcommand("idem-check", "Compare algebra and kernel multiplier norms");
    idem_cmd->add_option("file", idem.file, "JSON with 'algebra' and 'coeffs'");
    idem_cmd->add_flag("--random", idem.random, "Run randomized trials");
    idem_cmd->add_option("--count", idem.count, "Number of random trials");
    idem_cmd->add_option("--k-max", idem.k_max, "Largest k");
    idem_cmd->add_option("--d-max", idem.d_max, "Largest dimension d");
    idem_cmd->add_option("--cond", idem.cond, "Condition number cap of the similarity");
    idem_cmd->add_option("--matrix-p", idem.p, "Coefficient size p (1 = scalar)");

    auto* lower = app.add_subcommand("lower-bound", "Admissible-tuple lower bound for 'function' at the points");
    lower->add_option("problem", problem, "Problem JSON")->required();

    auto* verify = app.add_subcommand("verify", "Independently re-check a certificate");
    verify->add_option("problem", problem, "Problem JSON")->required();
    verify->add_option("certificate", certificate, "Certificate JSON (bare or certify output)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kUsage;
    }

    std::ostringstream buffer;
    Context ctx{g, buffer, err};
    int code = kOk;
    try {
        if (*certify) {
            code = cmd_certify(ctx, problem, *strict_opt ? std::optional(strict_eps) : std::nullopt);
        } else if (*norm) {
            code = cmd_norm(ctx, problem);
        } else if (*estimate) {
            code = cmd_estimate(ctx, problem);
        } else if (*pick) {
            code = cmd_pick(ctx, problem, *level_opt ? std::optional(level) : std::nullopt);
        } else if (*idem_cmd) {
            code = cmd_idem_check(ctx, idem);
        } else if (*lower) {
            code = cmd_lower_bound(ctx, problem);
        } else if (*verify) {
            code = cmd_verify(ctx, problem, certificate);
        }
    } catch (const json_io::MalformedJsonError& e) {
        err << e.what() << '\n';
        return kMalformedJson;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const DuplicatePointError& e) {
        err << "duplicate points: " << e.what() << '\n';
        return kDomain;
    } catch (const json_io::SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kSchema;
    } catch (const DimensionError& e) {
        err << "dimension error: " << e.what() << '\n';
        return kSchema;
    } catch (const ShapeError& e) {
        err << "shape error: " << e.what() << '\n';
        return kSchema;
    } catch (const nlohmann::json::exception& e) {
        err << "schema error: " << e.what() << '\n';
        return kSchema;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kParameter;
    } catch (const CLI::ValidationError& e) {
        err << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        // EvaluationError, SpectrumError, CommutativityError, AdmissibilityError
        err << "evaluation error: " << e.what() << '\n';
        return kEvaluation;
    }
    out << buffer.str();
    out.flush();
    return code;
}

}  // namespace agpk::cli

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cutplane/analysis.hpp"
#include "cutplane/convexify.hpp"
#include "cutplane/engine.hpp"
#include "cutplane/errors.hpp"
#include "cutplane/instance_io.hpp"
#include "cutplane/qkp.hpp"

namespace {

using namespace cutplane;

NonlinearFunction negate_function(const NonlinearFunction& f) {
    if (f.kind() == FunctionKind::Quadratic) {
        Matrix q = f.quad();
        for (double& v : q.data()) v = -v;
        std::vector<double> lin = f.linear();
        for (double& v : lin) v = -v;
        return NonlinearFunction::quadratic(std::move(q), std::move(lin), -f.constant());
    }
    return NonlinearFunction::expression(ast::neg(f.root()), f.dimension());
}

struct LoadedInstance {
    InstanceFile file;
    bool is_qkp = false;
    QkpInstance qkp;
};

LoadedInstance load_any(const std::string& path, QkpForm form) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    LoadedInstance out;
    std::istringstream probe(text);
    std::string first;
    probe >> first;
    if (first == "QKP") {
        out.is_qkp = true;
        out.qkp = parse_qkp(text);
        out.file.problem = qkp_to_problem(out.qkp, form);
        out.file.start = greedy_start(out.qkp);
    } else {
        out.file = parse_instance(text);
    }
    return out;
}

BinaryVector pick_start(const Problem& p, const std::optional<BinaryVector>& from_file) {
    if (from_file) return *from_file;
    if (p.n > kEnumerationLimit)
        throw Error("no START point in the instance and the dimension is too large to search");
    for (const BinaryVector& x : enumerate_binary_points(p.polyhedron))
        if (classify_point(p, x).status == FeasStatus::FeasibleC) return x;
    throw Error("the instance has no feasible binary point");
}

PenaltyConfig parse_convexify(const std::string& text, const Problem& p) {
    PenaltyConfig cfg;
    cfg.lambdas.assign(p.num_constraints(), 0.0);
    cfg.lambda_provenance.assign(p.num_constraints(), PenaltyProvenance::User);
    std::stringstream in(text);
    std::string field;
    std::vector<double>* sink = nullptr;
    while (std::getline(in, field, ',')) {
        if (field.rfind("mu=", 0) == 0) {
            cfg.mu = std::stod(field.substr(3));
            sink = nullptr;
        } else if (field.rfind("lambda=", 0) == 0) {
            cfg.lambdas.clear();
            cfg.lambdas.push_back(std::stod(field.substr(7)));
            sink = &cfg.lambdas;
        } else if (sink) {
            sink->push_back(std::stod(field));
        } else {
            throw Error("cannot parse --convexify field '" + field + "'");
        }
    }
    if (cfg.lambdas.size() != static_cast<std::size_t>(p.num_constraints()))
        throw Error("--convexify needs one lambda per constraint");
    return cfg;
}

void print_certificate(const Certificate& c) {
    std::cout << "certificate: KKT_LP " << (c.passed ? "passed" : "failed")
              << " (slack " << format_double(c.slack) << ", lambda =";
    if (c.multipliers.empty()) std::cout << " none";
    for (double l : c.multipliers) std::cout << ' ' << format_double(l);
    std::cout << ")\n";
}

int run_solve(const std::string& path, std::string algorithm, std::string convexify,
              double epsilon, const std::string& master, long max_iter, bool fixing,
              const std::string& trace_path, bool certify, const std::string& qkp_form) {
    LoadedInstance inst =
        load_any(path, qkp_form == "eq" ? QkpForm::Equality : QkpForm::Inequality);
    Problem problem = inst.file.problem;

    if (algorithm == "auto") {
        if (problem.objective.is_linear()) {
            algorithm = "cp-linear";
        } else {
            algorithm = "cp";
            if (convexify.empty()) convexify = "auto";
        }
    }
    if (convexify.empty()) convexify = "none";

    SolveOptions opt;
    opt.max_iterations = max_iter;
    opt.variable_fixing = fixing;
    opt.certify = certify;
    opt.backend = master == "bnb" ? MasterBackend::BranchAndBound : MasterBackend::Enumerative;

    Problem solved = problem;
    if (!convexify.empty() && convexify != "none" && algorithm != "cp-linear" &&
        algorithm != "cp-lipschitz") {
        const PenaltyConfig cfg =
            convexify == "auto" ? auto_penalties(problem) : parse_convexify(convexify, problem);
        solved = penalty_transform(problem, cfg);
        std::cout << "convexify: mu=" << format_double(cfg.mu);
        for (double l : cfg.lambdas) std::cout << " lambda=" << format_double(l);
        std::cout << "\n";
    }

    SolveResult res;
    if (algorithm == "cp") {
        res = solve_algorithm1(solved, pick_start(solved, inst.file.start), opt);
    } else if (algorithm == "cp-linear") {
        res = solve_algorithm2(solved, opt);
    } else if (algorithm == "cp-lipschitz") {
        // descent-lemma cuts on the untransformed problem; constants come from
        // the instance file, with row-sum bounds as the fallback
        double lf = inst.file.lipschitz_f ? *inst.file.lipschitz_f
                                          : hessian_row_sum_bound(problem.objective);
        std::vector<double> lg(problem.num_constraints(), 0.0);
        for (int j = 0; j < problem.num_constraints(); ++j)
            lg[j] = hessian_row_sum_bound(problem.constraints[j]);
        for (auto [j, v] : inst.file.lipschitz_g) {
            if (j < 0 || j >= problem.num_constraints())
                throw Error("LIPSCHITZ G index out of range");
            lg[j] = v;
        }
        if (!(lf > 0.0))
            throw Error("cp-lipschitz needs a positive objective constant; "
                        "linear objectives are better served by cp-linear");
        opt.cut_plan = CutPlan::Lipschitz;
        opt.lipschitz = lipschitz_linearization(problem, lf, std::move(lg));
        res = solve_algorithm1(problem, pick_start(problem, inst.file.start), opt);
    } else if (algorithm == "shifted") {
        if (!(epsilon > 0.0)) throw Error("--algorithm shifted requires --epsilon > 0");
        res = solve_algorithm3(solved, pick_start(solved, inst.file.start), epsilon, opt);
    } else {
        throw Error("unknown --algorithm " + algorithm);
    }

    std::cout << "status: " << to_string(res.status) << "\n";
    std::cout << "x: " << to_bitstring(res.best_x) << "\n";
    std::cout << "value: " << format_double(eval(problem.objective, res.best_x)) << "\n";
    std::cout << "iterations: " << res.iterations << "\n";
    std::cout << "LB: " << format_double(res.state.lb) << "\n";
    std::cout << "UB: " << format_double(res.state.ub) << "\n";
    std::cout << "master_nodes: " << res.state.master_nodes << "\n";
    if (!res.state.diagnostic.empty()) std::cout << "note: " << res.state.diagnostic << "\n";
    if (res.certificate) print_certificate(*res.certificate);

    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) throw Error("cannot write trace to " + trace_path);
        tf << trace_to_csv(res.state.trace);
    }

    if (res.status == SolveStatus::OptimalGapClosed) return 0;
    if (res.status == SolveStatus::RepeatedPoint && res.certificate && res.certificate->passed)
        return 0;
    return 2;
}

int run_generate(int n, std::uint64_t seed, const std::string& out_path) {
    const QkpInstance inst = generate_instance(n, seed);
    std::ofstream f(out_path);
    if (!f) throw Error("cannot write " + out_path);
    f << serialize_qkp(inst);
    if (!f) throw Error("write failed for " + out_path);
    std::cout << "wrote n=" << n << " seed=" << seed << " capacity m=" << inst.capacity
              << " to " << out_path << "\n";
    std::cout << "Q conditionally negative definite: " << (cnd_check(inst.q_matrix) ? "yes" : "no")
              << "\n";
    return 0;
}

void write_check_csv(const std::string& path, const std::string& mode, bool positive,
                     double lp_value, double true_optimum,
                     const std::optional<std::pair<BinaryVector, BinaryVector>>& witness,
                     const std::string& note) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    f << "mode,holds,lp_value,true_optimum,witness_x,witness_y,note\n";
    f << mode << ',' << (positive ? 1 : 0) << ',' << format_double(lp_value) << ','
      << format_double(true_optimum) << ',' << (witness ? to_bitstring(witness->first) : "")
      << ',' << (witness ? to_bitstring(witness->second) : "") << ',' << note << "\n";
}

int run_check(const std::string& path, const std::string& mode, double tau,
              const std::string& qkp_form, const std::string& csv_path) {
    LoadedInstance inst =
        load_any(path, qkp_form == "eq" ? QkpForm::Equality : QkpForm::Inequality);
    const Problem& p = inst.file.problem;

    if (mode == "condition1") {
        const ConditionReport rep = check_condition1(p);
        std::cout << "condition1: " << (rep.holds ? "holds" : "FAILS") << "\n";
        std::cout << "lp_value: " << format_double(rep.lp_value) << "\n";
        std::cout << "true_optimum: " << format_double(rep.true_optimum) << "\n";
        if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
        write_check_csv(csv_path, mode, rep.holds, rep.lp_value, rep.true_optimum, rep.witness,
                        rep.note);
        return rep.holds ? 0 : 2;
    }
    if (mode == "tangent-domination") {
        const ConditionReport rep = check_tangent_domination(p);
        std::cout << "tangent domination: " << (rep.holds ? "holds" : "FAILS") << "\n";
        if (rep.witness)
            std::cout << "witness: x=" << to_bitstring(rep.witness->first)
                      << " y=" << to_bitstring(rep.witness->second) << "\n";
        if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
        write_check_csv(csv_path, mode, rep.holds, 0.0, 0.0, rep.witness, rep.note);
        return rep.holds ? 0 : 2;
    }
    if (mode == "epsilon-bar") {
        const EpsilonBar eb = compute_epsilon_bar(p);
        std::cout << "epsilon_bar: " << format_double(eb.value) << "\n";
        if (eb.degenerate)
            std::cout << "note: nonpositive bound, the pseudoconvexity premise fails here\n";
        write_check_csv(csv_path, mode, !eb.degenerate, eb.value, 0.0, std::nullopt,
                        eb.degenerate ? "nonpositive epsilon bound" : "");
        return eb.degenerate ? 2 : 0;
    }
    if (mode == "robust-qc") {
        std::vector<BinaryVector> pts = enumerate_binary_points(p.polyhedron);
        bool ok = true;
        auto report = [&](const std::string& name, const NonlinearFunction& fn) {
            const auto witness = check_robust_quasiconvex_binary(fn, tau, pts);
            std::cout << name << ": " << (witness ? "FAILS" : "passes");
            if (witness)
                std::cout << " at x=" << to_bitstring(witness->first)
                          << " y=" << to_bitstring(witness->second);
            std::cout << "\n";
            ok &= !witness;
        };
        report("-f robustly quasiconvex (tau=" + format_double(tau) + ")",
               negate_function(p.objective));
        for (int j = 0; j < p.num_constraints(); ++j)
            report("g" + std::to_string(j + 1) + " robustly quasiconvex", p.constraints[j]);
        write_check_csv(csv_path, mode, ok, 0.0, 0.0, std::nullopt, "");
        return ok ? 0 : 2;
    }
    throw Error("unknown --mode " + mode);
}

struct BenchSpec {
    std::vector<int> sizes;
    int seeds = 1;
    std::string algorithm = "cp";
    QkpForm form = QkpForm::Equality;
    MasterBackend master = MasterBackend::Enumerative;
    long max_iter = 0;
    double epsilon = 0.01;
};

BenchSpec parse_bench_spec(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open bench spec " + path);
    BenchSpec spec;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        std::istringstream in(line);
        std::string key;
        if (!(in >> key) || key[0] == '#') continue;
        if (key == "SIZES") {
            int v;
            while (in >> v) spec.sizes.push_back(v);
        } else if (key == "SEEDS") {
            in >> spec.seeds;
        } else if (key == "ALGORITHM") {
            in >> spec.algorithm;
        } else if (key == "FORM") {
            std::string v;
            in >> v;
            spec.form = v == "inequality" ? QkpForm::Inequality : QkpForm::Equality;
        } else if (key == "MASTER") {
            std::string v;
            in >> v;
            spec.master = v == "bnb" ? MasterBackend::BranchAndBound : MasterBackend::Enumerative;
        } else if (key == "MAXITER") {
            in >> spec.max_iter;
        } else if (key == "EPSILON") {
            in >> spec.epsilon;
        } else {
            throw Error("bench spec line " + std::to_string(line_no) + ": unknown key " + key);
        }
    }
    if (spec.sizes.empty()) throw Error("bench spec needs a nonempty SIZES list");
    if (spec.seeds < 1) throw Error("bench spec needs SEEDS >= 1");
    return spec;
}

int run_bench(const std::string& spec_path, const std::string& out_path) {
    const BenchSpec spec = parse_bench_spec(spec_path);
    std::ostringstream csv;
    csv << "n,seed,algorithm,status,iterations,gap_pct,value,nodes,ms\n";

    for (int n : spec.sizes) {
        double sum_gap = 0.0, sum_iters = 0.0, sum_ms = 0.0;
        for (int seed = 1; seed <= spec.seeds; ++seed) {
            const QkpInstance inst = generate_instance(n, static_cast<std::uint64_t>(seed));
            const Problem problem = qkp_to_problem(inst, spec.form);
            SolveOptions opt;
            opt.backend = spec.master;
            opt.max_iterations = spec.max_iter;

            const auto t0 = std::chrono::steady_clock::now();
            SolveResult res;
            if (spec.algorithm == "shifted")
                res = solve_algorithm3(problem, greedy_start(inst), spec.epsilon, opt);
            else
                res = solve_algorithm1(problem, greedy_start(inst), opt);
            const auto t1 = std::chrono::steady_clock::now();
            const double ms =
                std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;

            const double gap = std::isfinite(res.state.ub)
                                   ? optimality_gap(res.state.ub, res.state.lb)
                                   : 0.0;
            csv << n << ',' << seed << ',' << spec.algorithm << ',' << to_string(res.status)
                << ',' << res.iterations << ',' << format_double(gap) << ','
                << format_double(res.best_value) << ',' << res.state.master_nodes << ','
                << format_double(ms) << "\n";
            sum_gap += gap;
            sum_iters += res.iterations;
            sum_ms += ms;
        }
        std::cout << "n=" << n << ": mean_gap_pct=" << format_double(sum_gap / spec.seeds)
                  << " mean_iterations=" << format_double(sum_iters / spec.seeds)
                  << " mean_ms=" << format_double(sum_ms / spec.seeds) << "\n";
    }

    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw Error("cannot write " + out_path);
        f << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cutting-plane solver for nonlinear binary optimization"};
    app.require_subcommand(1);

    std::string path, trace_path, mode = "condition1", out_path;
    std::string algorithm = "auto", convexify, master = "enum", qkp_form = "ineq";
    std::string fixing = "off";
    double epsilon = 0.0, tau = 0.0;
    long max_iter = 0;
    int n = 0;
    std::uint64_t seed = 1;
    bool certify = false;

    CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("path", path, "instance file")->required();
    solve->add_option("--algorithm", algorithm, "auto|cp|cp-linear|cp-lipschitz|shifted");
    solve->add_option("--convexify", convexify, "none|auto|mu=V[,lambda=V1,...]");
    solve->add_option("--epsilon", epsilon, "shift for the shifted cuts");
    solve->add_option("--master", master, "enum|bnb");
    solve->add_option("--max-iter", max_iter, "iteration cap (0 = default)");
    solve->add_option("--fixing", fixing, "on|off variable fixing");
    solve->add_option("--trace", trace_path, "write the iteration trace CSV here");
    solve->add_flag("--certify", certify, "run the KKT certificate on the result");
    solve->add_option("--qkp-form", qkp_form, "ineq|eq (QKP files only)");

    CLI::App* gen = app.add_subcommand("generate-qkp", "generate a QKP instance file");
    gen->add_option("-n,--size", n, "number of items")->required();
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("-o,--output", out_path, "output path")->required();

    CLI::App* check = app.add_subcommand("check", "run a desk-scale condition check");
    check->add_option("path", path, "instance file")->required();
    check->add_option("--mode", mode, "condition1|tangent-domination|epsilon-bar|robust-qc");
    check->add_option("--tau", tau, "robust quasiconvexity modulus");
    check->add_option("--qkp-form", qkp_form, "ineq|eq (QKP files only)");
    check->add_option("--csv", out_path, "also write the report as CSV");

    CLI::App* bench = app.add_subcommand("bench", "run a QKP benchmark sweep");
    bench->add_option("spec", path, "bench spec file")->required();
    bench->add_option("-o,--output", out_path, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return run_solve(path, algorithm, convexify, epsilon, master, max_iter,
                             fixing == "on", trace_path, certify, qkp_form);
        if (gen->parsed()) return run_generate(n, seed, out_path);
        if (check->parsed()) return run_check(path, mode, tau, qkp_form, out_path);
        if (bench->parsed()) return run_bench(path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

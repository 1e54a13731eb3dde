// Batch driver: fit -> phases -> circuits -> simulation -> price, plus
// resource reports. Every subcommand reads a JSON config; flags override it.
//
// Exit codes: 0 ok, 2 budget missed, 3 fit or phase search infeasible,
// 4 capacity exceeded, 64 usage or malformed input.

#include "qspp/builders.hpp"
#include "qspp/errors.hpp"
#include "qspp/estimator.hpp"
#include "qspp/io.hpp"
#include "qspp/polyapprox.hpp"
#include "qspp/pricing.hpp"
#include "qspp/qspphase.hpp"
#include "qspp/resources.hpp"
#include "qspp/simulator.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace qspp;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kBudgetMiss = 2;
constexpr int kInfeasible = 3;
constexpr int kCapacity = 4;
constexpr int kUsage = 64;

struct Options {
    std::string config;
    std::string out_dir = ".";
    std::optional<int> degree;
    std::optional<double> budget;
    std::optional<double> epsilon;
    std::optional<double> alpha;
    std::optional<int> width_cap;
    std::optional<std::uint64_t> seed;
};

template <class T>
T pick(const std::optional<T> &flag, const json &cfg, const char *key, T fallback) {
    if (flag) return *flag;
    if (cfg.contains(key)) {
        try {
            return cfg.at(key).get<T>();
        } catch (const json::exception &e) {
            throw InvalidArgument(std::string("config field '") + key + "': " + e.what());
        }
    }
    return fallback;
}

json load_config(const Options &o, bool required) {
    if (o.config.empty()) {
        if (required) throw InvalidArgument("--config is required");
        return json::object();
    }
    json cfg = io::read_json_file(o.config);
    if (!cfg.is_object()) throw InvalidArgument("config must be a JSON object");
    return cfg;
}

std::string out_path(const Options &o, const std::string &name) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / name).string();
}

sim::RunOptions run_options(const Options &o, const json &cfg) {
    sim::RunOptions r;
    r.width_cap = pick<int>(o.width_cap, cfg, "width_cap", sim::kDefaultWidthCap);
    r.seed = pick<std::uint64_t>(o.seed, cfg, "seed", 0);
    r.rotation_noise = pick<double>(std::nullopt, cfg, "rotation_noise", 0.0);
    if (r.width_cap < 1) throw InvalidArgument("width cap must be positive");
    return r;
}

struct FitSpec {
    poly::TargetFunction target;
    int degree;
    poly::Parity parity;
    double cap;
    int grid_points;
};

FitSpec fit_spec(const Options &o, const json &cfg, const poly::TargetFunction &target,
                 int default_degree) {
    const int degree = pick<int>(o.degree, cfg, "degree", default_degree);
    if (degree < 1) throw InvalidArgument("degree must be positive");
    return {target, degree, io::parity_from_string(pick<std::string>(std::nullopt, cfg, "parity", "even")),
            pick<double>(std::nullopt, cfg, "cap", poly::kDefaultCap),
            pick<int>(std::nullopt, cfg, "grid_points", 0)};
}

poly::ChebyshevPolynomial run_fit(const FitSpec &s) {
    return poly::fit_minimax(s.target, s.degree, s.parity, s.cap, s.grid_points);
}

double budget_of(const Options &o, const json &cfg) {
    const double b = pick<double>(o.budget, cfg, "budget", 1e-3);
    if (!(b > 0.0)) throw InvalidArgument("budget must be positive");
    return b;
}

int cmd_fit(const Options &o) {
    const json cfg = load_config(o, true);
    const auto spec = fit_spec(o, cfg, io::target_from_json(cfg.at("target")), 20);
    const double budget = budget_of(o, cfg);
    const auto p = run_fit(spec);
    const double err = poly::max_error(p, spec.target, 10000);

    json out = io::to_json(p);
    out["target"] = spec.target.describe();
    out["budget"] = budget;
    out["max_err_grid_1e4"] = err;
    io::write_json_file(out_path(o, "poly.json"), out);
    std::ofstream csv(out_path(o, "fit.csv"));
    poly::write_fit_csv(csv, p, spec.target, pick<int>(std::nullopt, cfg, "csv_samples", 1001));

    const bool ok = p.max_err <= budget && err <= budget;
    std::cout << "fit degree " << p.degree << " max_err " << std::max(p.max_err, err) << " budget "
              << budget << (ok ? " ok" : " MISSED") << '\n';
    return ok ? kOk : kBudgetMiss;
}

/// Polynomial from config["poly"] (inline object) or by fitting config["target"].
poly::ChebyshevPolynomial poly_from_config(const Options &o, const json &cfg) {
    if (cfg.contains("poly")) return io::poly_from_json(cfg.at("poly"));
    if (!cfg.contains("target")) throw InvalidArgument("config needs 'poly' or 'target'");
    return run_fit(fit_spec(o, cfg, io::target_from_json(cfg.at("target")), 20));
}

int cmd_phases(const Options &o) {
    const json cfg = load_config(o, true);
    const auto p = poly_from_config(o, cfg);
    const auto ph = qsp::find_phases(p, pick<double>(std::nullopt, cfg, "tolerance", qsp::kDefaultTolerance));
    json out = io::to_json(ph);
    out["poly"] = io::to_json(p);
    io::write_json_file(out_path(o, "phases.json"), out);
    std::cout << "phases degree " << ph.degree() << " residual " << ph.residual << '\n';
    return kOk;
}

int cmd_verify(const Options &o) {
    const json cfg = load_config(o, true);
    const auto p = poly_from_config(o, cfg);
    const auto ph = cfg.contains("phases") ? io::phases_from_json(cfg.at("phases")) : qsp::find_phases(p);
    const double tol = pick<double>(std::nullopt, cfg, "tolerance", 1e-8);
    const auto rep = qsp::verify_phases(ph, p, pick<int>(std::nullopt, cfg, "samples", 1000), tol);

    json out = {{"su2_max_dev", rep.max_dev}, {"su2_pass", rep.pass}, {"tolerance", tol}};
    bool ok = rep.pass;
    // Circuit check on the U_sqrt encoder: sqrt(P(success)) against |P(sqrt(x / 2^p))|.
    if (cfg.contains("circuit")) {
        const auto fmt = io::format_from_json(cfg.at("circuit"));
        const double ctol = pick<double>(std::nullopt, cfg.at("circuit"), "tolerance", 1e-6);
        const auto q = circ::build_qsp(circ::build_u_sqrt(fmt), ph);
        const auto opts = run_options(o, cfg);
        double worst = 0.0;
        for (std::uint64_t x = 0; x < fmt.levels(); ++x) {
            const auto st = sim::run(q.circuit, sim::StateVector::basis(q.circuit.width(), x, opts.width_cap), opts);
            const double amp = std::sqrt(sim::probability(st, q.success));
            const double a = std::sqrt(fmt.decode(x) / std::ldexp(1.0, fmt.p));
            worst = std::max(worst, std::abs(amp - std::abs(poly::eval(p, a))));
        }
        out["circuit_max_dev"] = worst;
        out["circuit_width"] = q.circuit.width();
        out["circuit_pass"] = worst <= ctol;
        ok = ok && worst <= ctol;
    }
    io::write_json_file(out_path(o, "verify.json"), out);
    std::cout << "verify su2 " << rep.max_dev << (ok ? " ok" : " FAILED") << '\n';
    return ok ? kOk : kBudgetMiss;
}

struct Encoded {
    circ::Circuit circuit;
    std::vector<int> inputs;
    std::optional<circ::ProjectorSpec> success;
};

Encoded simulate_circuit(const json &c) {
    const auto kind = c.at("kind").get<std::string>();
    if (kind == "file") return {io::circuit_from_json(io::read_json_file(c.at("path").get<std::string>())), {}, {}};
    if (kind == "comparator") {
        const auto circuit = circ::build_comparator(c.at("n").get<int>());
        auto in = circuit.reg("a").qubits();
        const auto b = circuit.reg("b").qubits();
        in.insert(in.end(), b.begin(), b.end());
        return {circuit, in, circ::ProjectorSpec{{circuit.reg("result").offset}, {1}}};
    }
    const auto fmt = io::format_from_json(c.at("format"));
    circ::BlockEncoding u;
    if (kind == "u_sqrt")
        u = circ::build_u_sqrt(fmt);
    else if (kind == "u_sin")
        u = circ::build_u_sin(fmt, c.value("eps_r", 0.0));
    else
        throw InvalidArgument("unknown circuit kind '" + kind + "'");
    return {u.circuit, u.circuit.reg(u.data).qubits(), circ::ProjectorSpec::zeros(u.out_zeros)};
}

int cmd_simulate(const Options &o) {
    const json cfg = load_config(o, true);
    if (!cfg.contains("circuit")) throw InvalidArgument("config needs 'circuit'");
    Encoded e;
    try {
        e = simulate_circuit(cfg.at("circuit"));
    } catch (const json::exception &ex) {
        throw InvalidArgument(std::string("circuit: ") + ex.what());
    }
    const auto opts = run_options(o, cfg);
    const int width = e.circuit.width();
    if (width > opts.width_cap) throw CapacityError("circuit width exceeds the width cap");

    sim::StateVector init = cfg.contains("probs")
                                ? sim::inject_distribution(width, cfg.at("probs").get<std::vector<double>>(),
                                                           e.inputs, opts.width_cap)
                                : sim::StateVector::basis(width, pick<std::uint64_t>(std::nullopt, cfg, "basis", 0),
                                                          opts.width_cap);
    const auto st = sim::run(e.circuit, std::move(init), opts);

    json out = {{"width", width}, {"gates", e.circuit.gates().size()}, {"norm", st.norm()},
                {"seed", opts.seed}, {"rotation_noise", opts.rotation_noise}};
    if (e.success) out["success_probability"] = sim::probability(st, *e.success);
    io::write_json_file(out_path(o, "simulate.json"), out);
    io::write_json_file(out_path(o, "circuit.json"), io::to_json(e.circuit));
    std::ofstream csv(out_path(o, "state.csv"));
    sim::write_state_csv(csv, st, pick<double>(std::nullopt, cfg, "min_prob", 1e-15));
    std::cout << "simulate width " << width << " norm " << st.norm() << '\n';
    return kOk;
}

int report_price(const Options &o, const pricing::PricePair &pair, const poly::ChebyshevPolynomial &p,
                 const pricing::Pipeline &pipe, const std::string &file) {
    json out = io::to_json(pair);
    out["max_err"] = p.max_err;
    out["degree"] = p.degree;
    out["width"] = pipe.circuit.width();
    io::write_json_file(out_path(o, file), out);
    std::cout << "classical " << pair.classical << " quantum " << pair.quantum << " abs_err "
              << pair.abs_err << " budget " << pair.budget << (pair.within_budget() ? " ok" : " MISSED")
              << '\n';
    return pair.within_budget() ? kOk : kBudgetMiss;
}

void check_width(const pricing::Pipeline &pipe, const sim::RunOptions &opts) {
    if (pipe.circuit.width() > opts.width_cap)
        throw CapacityError("pipeline needs " + std::to_string(pipe.circuit.width()) +
                            " qubits, above the width cap " + std::to_string(opts.width_cap));
}

int cmd_price_call(const Options &o) {
    const json cfg = load_config(o, true);
    if (!cfg.contains("contract")) throw InvalidArgument("config needs 'contract'");
    const auto c = io::call_from_json(cfg.at("contract"));
    const auto opts = run_options(o, cfg);
    const auto p = run_fit(fit_spec(o, cfg, poly::TargetFunction(pricing::call_clause(c)), 16));
    // The layout does not depend on the phases, so capacity is checked before the phase search.
    check_width(pricing::build_call_pipeline(c, qsp::PhaseFactors{{0.0, 0.0}}), opts);
    const auto pipe = pricing::build_call_pipeline(c, qsp::find_phases(p));
    const auto pair = pricing::make_price_pair(pricing::classical_price_call(c),
                                               pricing::quantum_price(pipe, c.probs, opts), p.max_err);
    return report_price(o, pair, p, pipe, "price.json");
}

int cmd_price_autocall(const Options &o) {
    const json cfg = load_config(o, true);
    if (!cfg.contains("contract")) throw InvalidArgument("config needs 'contract'");
    const auto a = io::autocall_from_json(cfg.at("contract"));
    const auto opts = run_options(o, cfg);
    const auto p = run_fit(fit_spec(o, cfg, poly::TargetFunction(pricing::autocall_clause(a)), 20));
    check_width(pricing::build_autocallable_pipeline(a, qsp::PhaseFactors{{0.0, 0.0}}), opts);
    const auto pipe = pricing::build_autocallable_pipeline(a, qsp::find_phases(p));
    const auto pair =
        pricing::make_price_pair(pricing::classical_price_autocallable(a),
                                 pricing::quantum_price(pipe, a.joint_probs, opts), p.max_err,
                                 a.normalization());
    return report_price(o, pair, p, pipe, "price.json");
}

int cmd_resources(const Options &o) {
    const json cfg = load_config(o, false);
    const auto rows = cfg.contains("rows") ? io::method_rows_from_json(cfg.at("rows")) : est::published_rows();
    if (rows.empty()) throw InvalidArgument("no method rows");
    const double eps = pick<double>(o.epsilon, cfg, "epsilon", 1e-3);
    const double alpha = pick<double>(o.alpha, cfg, "alpha", 0.32);
    const double seconds = pick<double>(std::nullopt, cfg, "classical_time_s", 1.0);
    const auto baseline = pick<std::string>(std::nullopt, cfg, "baseline", rows.front().label);

    std::vector<est::AdvantageReport> reports;
    json jr = json::array();
    for (const auto &r : rows) {
        reports.push_back(est::advantage_report(r, eps, alpha, seconds));
        jr.push_back(io::to_json(reports.back()));
    }
    std::vector<est::Improvement> imps;
    json ji = json::array();
    if (rows.size() >= 2) {
        imps = est::compare_methods(rows, baseline);
        for (const auto &i : imps) ji.push_back(io::to_json(i));
    }
    json out = {{"n_queries", est::iqae_query_count(eps, alpha)}, {"reports", jr}, {"improvements", ji}};

    // Payoff-stage blocks from this library's own circuits.
    if (cfg.contains("blocks")) {
        const auto &b = cfg.at("blocks");
        const int n = pick<int>(std::nullopt, b, "n", 15);
        const int d = pick<int>(o.degree, b, "degree", 20);
        const double eps_r = est::rotation_budget(pick<double>(std::nullopt, b, "epsilon_total", eps), d, n);
        const auto rules = b.contains("rules") ? io::rules_from_json(b.at("rules")) : circ::ResourceRules{};
        const circ::FixedPointFormat fmt{n, pick<int>(std::nullopt, b, "p", 3), false, 0.0};
        out["blocks"] = {{"epsilon_rotation", eps_r},
                         {"rotation_cost", rules.rotation_cost(eps_r)},
                         {"comparator", io::to_json(circ::count_resources(circ::build_comparator(n), rules))},
                         {"u_sqrt", io::to_json(circ::count_resources(circ::build_u_sqrt(fmt).circuit, rules))},
                         {"u_sin", io::to_json(circ::count_resources(circ::build_u_sin(fmt, eps_r).circuit, rules))}};
    }
    io::write_json_file(out_path(o, "resources.json"), out);
    std::ofstream md(out_path(o, "resources.md"));
    md << est::markdown_report(reports, imps);
    std::cout << est::markdown_report(reports, imps);
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"QSP payoff circuits: fits, phases, simulation, pricing and resource reports"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "JSON config file");
        sub->add_option("--out-dir", o.out_dir, "Output directory");
        sub->add_option("--degree", o.degree, "Polynomial degree");
        sub->add_option("--budget", o.budget, "Approximation error budget");
        sub->add_option("--epsilon", o.epsilon, "Amplitude-estimation target error");
        sub->add_option("--alpha", o.alpha, "Amplitude-estimation failure probability");
        sub->add_option("--width-cap", o.width_cap, "Simulator qubit limit");
        sub->add_option("--seed", o.seed, "Seed for rotation noise");
    };

    std::function<int(const Options &)> action;
    const auto sub = [&](const char *name, const char *help, int (*fn)(const Options &)) {
        auto *s = app.add_subcommand(name, help);
        add_common(s);
        s->callback([&action, fn] { action = fn; });
    };
    sub("fit", "Minimax polynomial fit; writes poly.json and fit.csv", cmd_fit);
    sub("phases", "QSP phase factors; writes phases.json", cmd_phases);
    sub("verify", "Check phases against the polynomial and the U_sqrt circuit", cmd_verify);
    sub("simulate", "Run an encoder circuit; writes state.csv and simulate.json", cmd_simulate);
    sub("price-call", "European call: classical vs quantum price", cmd_price_call);
    sub("price-autocall", "Autocallable: classical vs quantum price", cmd_price_autocall);
    sub("resources", "Query counts, totals, T rates and method comparison", cmd_resources);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        (void)app.exit(e);
        return kUsage;
    }

    try {
        return action(o);
    } catch (const CapacityError &e) {
        std::cerr << "capacity: " << e.what() << '\n';
        return kCapacity;
    } catch (const FitInfeasible &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const ConvergenceFailure &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NormViolation &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const json::exception &e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::logic_error &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

#include "qspp/pricing.hpp"

#include "qspp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qspp::pricing {
namespace {

using circ::Circuit;
using circ::Control;

enum class Rel { Less, LessEq, Greater };

/// target ^= [r rel theta] for a register holding grid values of `format`.
void append_threshold(Circuit &c, const std::vector<int> &r, const FixedPointFormat &format,
                      double theta, int target, Rel rel) {
    // grid values increase with the offset-binary code
    std::uint64_t k = 0;
    const double lo = format.min_value(), h = format.resolution();
    for (std::uint64_t u = 0; u < format.levels(); ++u) {
        const double v = lo + static_cast<double>(u) * h;
        if (rel == Rel::Less ? v < theta : v <= theta) k = u + 1;
    }
    if (format.is_signed) c.x(r.back());
    c.compare_const(r, k, target);
    if (format.is_signed) c.x(r.back());
    if (rel == Rel::Greater) c.x(target);
}

bool holds(double v, double theta, Rel rel) {
    switch (rel) {
    case Rel::Less: return v < theta;
    case Rel::LessEq: return v <= theta;
    case Rel::Greater: return v > theta;
    }
    return false;
}

/// Appends `guest` onto `host`: bound registers map onto the given qubits,
/// the rest are added to the host under the same names.
std::vector<int> embed(Circuit &host, const Circuit &guest,
                       const std::map<std::string, std::vector<int>> &bound) {
    std::vector<int> map(static_cast<std::size_t>(guest.width()), -1);
    for (const auto &reg : guest.registers()) {
        std::vector<int> qs;
        if (auto it = bound.find(reg.name); it != bound.end()) {
            qs = it->second;
            if (static_cast<int>(qs.size()) != reg.width)
                throw InvalidArgument("embed: register '" + reg.name + "' width mismatch");
        } else {
            qs = host.add_register(reg.name, reg.width, reg.format, reg.ancilla).qubits();
        }
        for (int i = 0; i < reg.width; ++i) map[static_cast<std::size_t>(reg.offset + i)] = qs[static_cast<std::size_t>(i)];
    }
    host.append(guest, map);
    return map;
}

ProjectorSpec remap(const ProjectorSpec &p, const std::vector<int> &map) {
    ProjectorSpec out = p;
    for (auto &q : out.qubits) q = map[static_cast<std::size_t>(q)];
    return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void require_probs(const std::vector<double> &probs, std::size_t size, const char *what) {
    if (probs.size() != size)
        throw InvalidArgument(std::string(what) + ": expected " + std::to_string(size) +
                              " probabilities, got " + std::to_string(probs.size()));
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw InvalidArgument(std::string(what) + ": negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidArgument(std::string(what) + ": probabilities sum to " + std::to_string(total));
}

std::vector<int> ancilla_qubits(const Circuit &c) { return c.ancillas(); }

} // namespace

std::vector<double> grid_values(const FixedPointFormat &format) {
    format.validate();
    std::vector<double> v(format.levels());
    for (std::uint64_t b = 0; b < format.levels(); ++b) v[b] = format.decode(b);
    return v;
}

std::vector<double> discretize_normal(const FixedPointFormat &format, double mu, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("discretize_normal: sigma must be positive");
    const auto xs = grid_values(format);
    const double h = format.resolution();
    std::vector<double> p(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        p[i] = normal_cdf((xs[i] + h / 2 - mu) / sigma) - normal_cdf((xs[i] - h / 2 - mu) / sigma);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(total > 0.0)) throw InvalidArgument("discretize_normal: no mass on the grid");
    for (auto &v : p) v /= total;
    return p;
}

std::vector<double> product_distribution(const std::vector<std::vector<double>> &marginals) {
    if (marginals.empty()) throw InvalidArgument("product_distribution: no marginals");
    std::vector<double> out{1.0};
    std::size_t stride = 1;
    for (const auto &m : marginals) {
        if (m.size() != marginals[0].size())
            throw InvalidArgument("product_distribution: marginal sizes differ");
        std::vector<double> next(out.size() * m.size());
        for (std::size_t j = 0; j < m.size(); ++j)
            for (std::size_t i = 0; i < out.size(); ++i) next[j * stride + i] = out[i] * m[j];
        stride *= m.size();
        out = std::move(next);
    }
    return out;
}

double grid_shift(const FixedPointFormat &format) {
    return format.is_signed ? std::ldexp(1.0, format.p - 1) : 0.0;
}

FixedPointFormat shifted_format(const FixedPointFormat &format) {
    return {format.n, format.p, false, grid_shift(format)};
}

// ---------------------------------------------------------------------------
// European call

void EuropeanCall::validate() const {
    format.validate();
    if (!(spot > 0.0 && strike > 0.0)) throw InvalidArgument("call: S0 and K must be positive");
    require_probs(probs, format.levels(), "call");
    const double fm = payoff_max();
    if (!(fm > 0.0)) throw InvalidArgument("call: strike is never reached on the grid (f_max <= 0)");
    if (f_max && *f_max < spot * std::exp(format.max_value() - format.resolution()) - strike)
        throw InvalidArgument("call: f_max below the largest payoff on the grid");
}

double EuropeanCall::payoff_max() const {
    if (f_max) return *f_max;
    return spot * std::exp(format.max_value() - format.resolution()) - strike;
}

double classical_price_call(const EuropeanCall &c) {
    c.validate();
    const auto xs = grid_values(c.format);
    const double fm = c.payoff_max();
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        acc += c.probs[i] * std::max(0.0, c.spot * std::exp(xs[i]) - c.strike) / fm;
    return acc;
}

poly::CallClause call_clause(const EuropeanCall &c) {
    c.validate();
    return {c.spot, c.strike, c.payoff_max(), c.format.p, grid_shift(c.format)};
}

Pipeline build_call_pipeline(const EuropeanCall &c, const qsp::PhaseFactors &phases,
                             double precision) {
    c.validate();
    const FixedPointFormat yf = shifted_format(c.format);
    Pipeline out;
    Circuit &q = out.circuit;
    const auto r = q.add_register("r", c.format.n, c.format).qubits();
    const int flag = q.add_register("flag", 1, std::nullopt, true).offset;
    const auto y = q.add_register("y", yf.n, yf, true).qubits();

    append_threshold(q, r, c.format, std::log(c.strike / c.spot), flag, Rel::LessEq);
    circ::append_const_adder(q, r, c.format, y, yf, grid_shift(c.format));
    const auto qsp = circ::build_qsp(circ::build_u_sqrt(yf), phases, precision);
    const auto map = embed(q, qsp.circuit, {{"x", y}});

    out.success = ProjectorSpec::zeros({flag}).and_also(remap(qsp.success, map));
    out.return_qubits = r;
    out.ancillas = ancilla_qubits(q);
    return out;
}

// ---------------------------------------------------------------------------
// Autocallable

void Autocallable::validate() const {
    format.validate();
    if (timesteps < 1) throw InvalidArgument("autocallable: need at least one timestep");
    if (!(strike_return > 0.0 && strike_return <= 1.0))
        throw InvalidArgument("autocallable: K_T must lie in (0, 1]");
    if (!(barrier > 0.0)) throw InvalidArgument("autocallable: barrier must be positive");
    int last = 0;
    for (const auto &b : schedule) {
        if (b.timestep < 1 || b.timestep > timesteps)
            throw InvalidArgument("autocallable: binary payoff timestep out of range");
        if (b.timestep <= last)
            throw InvalidArgument("autocallable: payoff timesteps must increase strictly");
        last = b.timestep;
        if (!(b.threshold > 0.0) || !(b.payoff >= 0.0))
            throw InvalidArgument("autocallable: thresholds must be positive, payoffs non-negative");
    }
    const double paths = std::ldexp(1.0, format.n * timesteps);
    if (paths > std::ldexp(1.0, 62)) throw CapacityError("autocallable: path space too large");
    require_probs(joint_probs, static_cast<std::size_t>(paths), "autocallable");
}

double Autocallable::normalization() const {
    double m = 1.0;
    for (const auto &b : schedule) m = std::max(m, b.payoff);
    return m;
}

Indicators evaluate_indicators(const Autocallable &c, const std::vector<std::uint64_t> &path) {
    if (static_cast<int>(path.size()) != c.timesteps)
        throw InvalidArgument("evaluate_indicators: path length differs from T");
    Indicators out;
    bool fired = false;
    for (const auto &b : c.schedule) {
        const double r = c.format.decode(path[static_cast<std::size_t>(b.timestep - 1)]);
        const bool s = holds(r, std::log(b.threshold), Rel::Greater) && !fired;
        out.binary.push_back(s);
        fired = fired || s;
    }
    bool crossed = false;
    for (auto code : path) crossed = crossed || holds(c.format.decode(code), std::log(c.barrier), Rel::Greater);
    out.barrier = crossed && !fired;
    return out;
}

double autocall_payoff(const Autocallable &c, const std::vector<std::uint64_t> &path) {
    const auto ind = evaluate_indicators(c, path);
    const double norm = c.normalization();
    for (std::size_t i = 0; i < ind.binary.size(); ++i)
        if (ind.binary[i]) return c.schedule[i].payoff / norm;
    if (!ind.barrier) return 0.0;
    const double rT = c.format.decode(path.back());
    return (1.0 - std::max(0.0, c.strike_return - std::exp(rT))) / norm;
}

double classical_price_autocallable(const Autocallable &c) {
    if (c.format.n * c.timesteps > 20)
        throw CapacityError("classical_price_autocallable: more than 2^20 paths");
    c.validate();
    const std::uint64_t mask = c.format.levels() - 1;
    std::vector<std::uint64_t> path(static_cast<std::size_t>(c.timesteps));
    double acc = 0.0;
    for (std::uint64_t idx = 0; idx < c.joint_probs.size(); ++idx) {
        if (c.joint_probs[idx] == 0.0) continue;
        for (int t = 0; t < c.timesteps; ++t)
            path[static_cast<std::size_t>(t)] = (idx >> (t * c.format.n)) & mask;
        acc += c.joint_probs[idx] * autocall_payoff(c, path);
    }
    return acc;
}

poly::AutocallClause autocall_clause(const Autocallable &c) {
    return {c.strike_return, c.format.p, grid_shift(c.format), c.normalization()};
}

Circuit build_autocallable_indicators(const Autocallable &c) {
    c.format.validate();
    Circuit q;
    std::vector<std::vector<int>> r;
    for (int t = 1; t <= c.timesteps; ++t)
        r.push_back(q.add_register("r" + std::to_string(t), c.format.n, c.format).qubits());
    std::vector<int> s;
    for (std::size_t i = 1; i <= c.schedule.size(); ++i)
        s.push_back(q.add_register("s" + std::to_string(i), 1, std::nullopt, true).offset);
    const int b = q.add_register("b", 1, std::nullopt, true).offset;
    // work[0] holds each binary condition in turn, then work[t] the
    // below-barrier flag of timestep t
    const auto work = q.add_register("work", c.timesteps, std::nullopt, true).qubits();
    const int fired = q.add_register("fired", 1, std::nullopt, true).offset;
    const int cond = work[0];

    // s_i = [r_{t_i} > ln K_i] and not fired; fired holds the parity of the
    // earlier s_j, which is their OR because at most one is set
    for (std::size_t i = 0; i < c.schedule.size(); ++i) {
        const auto &bp = c.schedule[i];
        const auto &reg = r[static_cast<std::size_t>(bp.timestep - 1)];
        const double theta = std::log(bp.threshold);
        append_threshold(q, reg, c.format, theta, cond, Rel::Greater);
        q.x(s[i], {{cond, true}, {fired, false}});
        append_threshold(q, reg, c.format, theta, cond, Rel::Greater);
        q.x(fired, {{s[i], true}});
    }

    // b = not fired and not (every r_t <= ln B)
    const double ln_b = std::log(c.barrier);
    std::vector<Control> all_below{{fired, false}};
    for (int t = 0; t < c.timesteps; ++t) {
        append_threshold(q, r[static_cast<std::size_t>(t)], c.format, ln_b,
                         work[static_cast<std::size_t>(t)], Rel::LessEq);
        all_below.push_back({work[static_cast<std::size_t>(t)], true});
    }
    q.x(b, {{fired, false}});
    q.x(b, all_below);
    for (int t = c.timesteps - 1; t >= 0; --t)
        append_threshold(q, r[static_cast<std::size_t>(t)], c.format, ln_b,
                         work[static_cast<std::size_t>(t)], Rel::LessEq);
    for (std::size_t i = c.schedule.size(); i-- > 0;) q.x(fired, {{s[i], true}});
    return q;
}

Pipeline build_autocallable_pipeline(const Autocallable &c, const qsp::PhaseFactors &phases,
                                     double precision) {
    c.validate();
    Pipeline out;
    Circuit &q = out.circuit;
    q = build_autocallable_indicators(c);
    const FixedPointFormat yf = shifted_format(c.format);
    const auto rT = q.reg("r" + std::to_string(c.timesteps)).qubits();
    const int b = q.reg("b").offset;
    std::vector<int> s;
    for (std::size_t i = 1; i <= c.schedule.size(); ++i) s.push_back(q.reg("s" + std::to_string(i)).offset);

    // the indicator work qubits are back at |0> and are reused here
    const int lt = q.reg("work").offset;
    const int sel = q.reg("fired").offset;
    const auto y = q.add_register("y", yf.n, yf, true).qubits();
    const int pay = q.add_register("pay", 1, std::nullopt, true).offset;

    append_threshold(q, rT, c.format, std::log(c.strike_return), lt, Rel::Less);
    q.x(sel, {{b, true}, {lt, true}});
    circ::append_const_adder(q, rT, c.format, y, yf, grid_shift(c.format));
    const auto qsp = circ::build_qsp(circ::build_u_sqrt(yf), phases, precision);
    Circuit guarded = qsp.circuit.empty_copy();
    const int guard = guarded.add_register("sel", 1).offset;
    guarded.append(qsp.circuit);
    const auto map = embed(q, guarded.controlled({guard, true}), {{"x", y}, {"sel", {sel}}});

    const double norm = c.normalization();
    for (std::size_t i = 0; i < s.size(); ++i)
        q.ry(pay, 2.0 * std::acos(std::sqrt(c.schedule[i].payoff / norm)), {{s[i], true}}, precision);
    if (norm > 1.0)
        q.ry(pay, 2.0 * std::acos(std::sqrt(1.0 / norm)), {{b, true}, {lt, false}}, precision);
    std::vector<Control> none_applies{{b, false}};
    for (int si : s) none_applies.push_back({si, false});
    q.x(pay, none_applies);

    out.success = ProjectorSpec::zeros({pay}).and_also(remap(qsp.success, map));
    for (int t = 1; t <= c.timesteps; ++t) {
        const auto rt = q.reg("r" + std::to_string(t)).qubits();
        out.return_qubits.insert(out.return_qubits.end(), rt.begin(), rt.end());
    }
    out.ancillas = ancilla_qubits(q);
    return out;
}

double quantum_price(const Pipeline &p, const std::vector<double> &probs,
                     const sim::RunOptions &options) {
    const auto init = sim::inject_distribution(p.circuit.width(), probs, p.return_qubits,
                                               options.width_cap);
    const auto final_state = sim::run(p.circuit, init, options);
    return sim::probability(final_state, p.success);
}

PricePair make_price_pair(double classical, double quantum, double max_err, double normalization) {
    PricePair out;
    out.classical = classical;
    out.quantum = quantum;
    out.abs_err = std::abs(classical - quantum);
    out.budget = 2.0 * max_err + 1e-8;
    out.normalization = normalization;
    return out;
}

} // namespace qspp::pricing

#include "qspp/io.hpp"

#include "qspp/errors.hpp"

#include <fstream>
#include <sstream>

namespace qspp::io {

namespace {

template <class T>
T field(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T field_or(const json &j, const char *key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return field<T>(j, key);
}

std::vector<double> normal_marginal(const circ::FixedPointFormat &f, const json &j) {
    return pricing::discretize_normal(f, field_or<double>(j, "mu", 0.0), field<double>(j, "sigma"));
}

} // namespace

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

std::string to_string(poly::Parity p) { return p == poly::Parity::Even ? "even" : "odd"; }

poly::Parity parity_from_string(const std::string &s) {
    if (s == "even") return poly::Parity::Even;
    if (s == "odd") return poly::Parity::Odd;
    throw InvalidArgument("parity must be 'even' or 'odd', got '" + s + "'");
}

json to_json(const poly::ChebyshevPolynomial &p) {
    return {{"parity", to_string(p.parity)},
            {"degree", p.degree},
            {"coeffs", p.coeffs},
            {"cap", p.cap},
            {"max_err", p.max_err},
            {"grid_err", p.grid_err},
            {"fit_domain", {p.fit_domain.lo, p.fit_domain.hi}}};
}

poly::ChebyshevPolynomial poly_from_json(const json &j) {
    poly::ChebyshevPolynomial p;
    p.parity = parity_from_string(field<std::string>(j, "parity"));
    p.degree = field<int>(j, "degree");
    p.coeffs = field<std::vector<double>>(j, "coeffs");
    p.cap = field_or<double>(j, "cap", poly::kDefaultCap);
    p.max_err = field_or<double>(j, "max_err", 0.0);
    p.grid_err = field_or<double>(j, "grid_err", 0.0);
    const auto dom = field_or<std::vector<double>>(j, "fit_domain", {0.0, 1.0});
    if (dom.size() != 2) throw InvalidArgument("field 'fit_domain' needs two entries");
    p.fit_domain = {dom[0], dom[1]};
    if (p.degree < 0 || p.coeffs.size() != poly::ChebyshevPolynomial::basis_size(p.degree, p.parity))
        throw InvalidArgument("coefficient count does not match degree and parity");
    return p;
}

json to_json(const qsp::PhaseFactors &p) {
    return {{"convention", qsp::to_string(p.convention)},
            {"degree", p.degree()},
            {"phases", p.phases},
            {"residual", p.residual}};
}

qsp::PhaseFactors phases_from_json(const json &j) {
    qsp::PhaseFactors p;
    p.phases = field<std::vector<double>>(j, "phases");
    try {
        p.convention = qsp::convention_from_string(field_or<std::string>(j, "convention", "wx-real"));
    } catch (const std::exception &e) {
        throw InvalidArgument(e.what());
    }
    p.residual = field_or<double>(j, "residual", 0.0);
    if (p.phases.empty()) throw InvalidArgument("field 'phases' is empty");
    return p;
}

json to_json(const circ::FixedPointFormat &f) {
    return {{"n", f.n}, {"p", f.p}, {"signed", f.is_signed}, {"shift", f.shift}};
}

circ::FixedPointFormat format_from_json(const json &j) {
    circ::FixedPointFormat f;
    f.n = field<int>(j, "n");
    f.p = field<int>(j, "p");
    f.is_signed = field_or<bool>(j, "signed", false);
    f.shift = field_or<double>(j, "shift", 0.0);
    f.validate();
    return f;
}

json to_json(const circ::Circuit &c) {
    json regs = json::array();
    for (const auto &r : c.registers()) {
        json jr = {{"name", r.name}, {"offset", r.offset}, {"width", r.width}, {"ancilla", r.ancilla}};
        if (r.format) jr["format"] = to_json(*r.format);
        regs.push_back(jr);
    }
    json gates = json::array();
    for (const auto &g : c.gates()) {
        json jg = {{"kind", circ::to_string(g.kind)}, {"target", g.target}};
        if (!g.controls.empty()) {
            json ctrls = json::array();
            for (const auto &k : g.controls) ctrls.push_back({{"qubit", k.qubit}, {"on_one", k.on_one}});
            jg["controls"] = ctrls;
        }
        if (g.kind == circ::GateKind::Ry || g.kind == circ::GateKind::ZPhase ||
            g.kind == circ::GateKind::Phase)
            jg["angle"] = g.angle;
        if (g.precision != 0.0) jg["precision"] = g.precision;
        if (g.compare) {
            jg["lhs"] = g.compare->lhs.qubits;
            if (g.compare->rhs.is_constant())
                jg["rhs_constant"] = *g.compare->rhs.constant;
            else
                jg["rhs"] = g.compare->rhs.qubits;
        }
        gates.push_back(jg);
    }
    return {{"width", c.width()}, {"registers", regs}, {"gates", gates}};
}

circ::Circuit circuit_from_json(const json &j) {
    circ::Circuit c;
    const auto regs = field<json>(j, "registers");
    if (!regs.is_array()) throw InvalidArgument("field 'registers' must be an array");
    for (const auto &jr : regs) {
        std::optional<circ::FixedPointFormat> fmt;
        if (jr.contains("format")) fmt = format_from_json(jr.at("format"));
        const auto &r = c.add_register(field<std::string>(jr, "name"), field<int>(jr, "width"), fmt,
                                       field_or<bool>(jr, "ancilla", false));
        if (jr.contains("offset") && field<int>(jr, "offset") != r.offset)
            throw InvalidArgument("register '" + r.name + "' offset does not match its position");
    }
    const auto gates = field<json>(j, "gates");
    if (!gates.is_array()) throw InvalidArgument("field 'gates' must be an array");
    for (const auto &jg : gates) {
        circ::Gate g;
        g.kind = circ::gate_kind_from_string(field<std::string>(jg, "kind"));
        g.target = field<int>(jg, "target");
        if (jg.contains("controls"))
            for (const auto &k : jg.at("controls"))
                g.controls.push_back({field<int>(k, "qubit"), field_or<bool>(k, "on_one", true)});
        g.angle = field_or<double>(jg, "angle", 0.0);
        g.precision = field_or<double>(jg, "precision", 0.0);
        if (g.kind == circ::GateKind::Compare) {
            auto spec = std::make_shared<circ::CompareSpec>();
            spec->lhs.qubits = field<std::vector<int>>(jg, "lhs");
            if (jg.contains("rhs_constant"))
                spec->rhs.constant = field<std::uint64_t>(jg, "rhs_constant");
            else
                spec->rhs.qubits = field<std::vector<int>>(jg, "rhs");
            g.compare = spec;
        }
        c.add(std::move(g));
    }
    if (j.contains("width") && field<int>(j, "width") != c.width())
        throw InvalidArgument("field 'width' does not match the registers");
    return c;
}

json to_json(const circ::ResourceCount &r) {
    return {{"t_count", r.t_count}, {"t_depth", r.t_depth}, {"logical_qubits", r.logical_qubits}};
}

circ::ResourceRules rules_from_json(const json &j) {
    circ::ResourceRules r;
    r.toffoli_t_count = field_or<int>(j, "toffoli_t_count", r.toffoli_t_count);
    r.toffoli_t_depth = field_or<int>(j, "toffoli_t_depth", r.toffoli_t_depth);
    r.toffoli_ancillas = field_or<int>(j, "toffoli_ancillas", r.toffoli_ancillas);
    r.controlled_h_t_count = field_or<int>(j, "controlled_h_t_count", r.controlled_h_t_count);
    r.controlled_h_t_depth = field_or<int>(j, "controlled_h_t_depth", r.controlled_h_t_depth);
    r.rotation_coefficient = field_or<double>(j, "rotation_coefficient", r.rotation_coefficient);
    r.default_precision = field_or<double>(j, "default_precision", r.default_precision);
    if (r.toffoli_t_count < 0 || r.toffoli_t_depth < 0 || r.toffoli_ancillas < 0 ||
        r.controlled_h_t_count < 0 || r.controlled_h_t_depth < 0 || !(r.rotation_coefficient > 0.0) ||
        r.default_precision < 0.0)
        throw InvalidArgument("resource rules must be non-negative");
    return r;
}

json to_json(const pricing::PricePair &p) {
    return {{"classical", p.classical},
            {"quantum", p.quantum},
            {"abs_err", p.abs_err},
            {"budget", p.budget},
            {"normalization", p.normalization},
            {"within_budget", p.within_budget()}};
}

json to_json(const est::AdvantageReport &r) {
    return {{"label", r.label},
            {"source", r.source},
            {"epsilon", r.epsilon},
            {"alpha", r.alpha},
            {"n_queries", r.n_queries},
            {"per_q", to_json(r.per_q)},
            {"total_t_depth", r.total_t_depth},
            {"total_t_count", r.total_t_count},
            {"logical_qubits", r.logical_qubits},
            {"classical_time_s", r.classical_time_s},
            {"clock_rate_hz", r.clock_rate_hz}};
}

json to_json(const est::Improvement &i) {
    return {{"baseline", i.baseline},
            {"candidate", i.candidate},
            {"t_depth", i.t_depth},
            {"t_count", i.t_count},
            {"logical_qubits", i.logical_qubits}};
}

std::vector<est::MethodRow> method_rows_from_json(const json &j) {
    if (!j.is_array()) throw InvalidArgument("method rows must be an array");
    std::vector<est::MethodRow> rows;
    for (const auto &jr : j) {
        est::MethodRow r;
        r.label = field<std::string>(jr, "label");
        r.per_q.t_count = field<std::int64_t>(jr, "t_count");
        r.per_q.t_depth = field<std::int64_t>(jr, "t_depth");
        r.per_q.logical_qubits = field<int>(jr, "logical_qubits");
        r.source = field_or<std::string>(jr, "source", "published");
        if (r.per_q.t_count < 0 || r.per_q.t_depth < 0 || r.per_q.logical_qubits < 0)
            throw InvalidArgument("row '" + r.label + "' has a negative entry");
        rows.push_back(r);
    }
    return rows;
}

poly::TargetFunction target_from_json(const json &j) {
    const auto kind = field<std::string>(j, "kind");
    try {
        if (kind == "autocall")
            return poly::TargetFunction(poly::AutocallClause{field<double>(j, "strike_return"),
                                                             field<int>(j, "p"), field<double>(j, "s"),
                                                             field_or<double>(j, "norm", 1.0)});
        if (kind == "call")
            return poly::TargetFunction(poly::CallClause{field<double>(j, "spot"), field<double>(j, "strike"),
                                                         field<double>(j, "f_max"), field<int>(j, "p"),
                                                         field<double>(j, "s")});
        if (kind == "general")
            return poly::TargetFunction(poly::GeneralExp{field<double>(j, "A"), field<double>(j, "B"),
                                                         field<double>(j, "C"), field<int>(j, "p"),
                                                         field<double>(j, "s")});
    } catch (const InvalidTarget &e) {
        throw InvalidArgument(std::string("target: ") + e.what());
    }
    throw InvalidArgument("unknown target kind '" + kind + "'");
}

pricing::EuropeanCall call_from_json(const json &j) {
    pricing::EuropeanCall c;
    c.spot = field<double>(j, "spot");
    c.strike = field<double>(j, "strike");
    c.format = format_from_json(field<json>(j, "format"));
    if (j.contains("probs"))
        c.probs = field<std::vector<double>>(j, "probs");
    else
        c.probs = normal_marginal(c.format, field<json>(j, "distribution"));
    if (j.contains("f_max")) c.f_max = field<double>(j, "f_max");
    c.validate();
    return c;
}

pricing::Autocallable autocall_from_json(const json &j) {
    pricing::Autocallable a;
    a.format = format_from_json(field<json>(j, "format"));
    a.timesteps = field<int>(j, "timesteps");
    for (const auto &js : field_or<json>(j, "schedule", json::array()))
        a.schedule.push_back({field<double>(js, "threshold"), field<int>(js, "timestep"),
                              field<double>(js, "payoff")});
    a.barrier = field<double>(j, "barrier");
    a.strike_return = field<double>(j, "strike_return");
    a.notional = field_or<double>(j, "notional", 1.0);
    if (j.contains("joint_probs")) {
        a.joint_probs = field<std::vector<double>>(j, "joint_probs");
    } else {
        const auto ms = field<json>(j, "marginals");
        if (!ms.is_array() || static_cast<int>(ms.size()) != a.timesteps)
            throw InvalidArgument("field 'marginals' needs one entry per timestep");
        std::vector<std::vector<double>> marginals;
        for (const auto &m : ms) marginals.push_back(normal_marginal(a.format, m));
        a.joint_probs = pricing::product_distribution(marginals);
    }
    a.validate();
    return a;
}

} // namespace qspp::io

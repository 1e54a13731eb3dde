#include "qspp/circuit.hpp"

#include "qspp/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace qspp::circ {

std::string to_string(GateKind kind) {
    switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Ry: return "ry";
    case GateKind::ZPhase: return "zphase";
    case GateKind::Phase: return "phase";
    case GateKind::Compare: return "compare";
    }
    throw InvalidArgument("unknown gate kind");
}

GateKind gate_kind_from_string(const std::string &s) {
    for (GateKind k : {GateKind::H, GateKind::X, GateKind::Ry, GateKind::ZPhase,
                       GateKind::Phase, GateKind::Compare})
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown gate kind '" + s + "'");
}

std::vector<int> Gate::qubits() const {
    std::vector<int> qs{target};
    for (const auto &c : controls) qs.push_back(c.qubit);
    if (compare) {
        qs.insert(qs.end(), compare->lhs.qubits.begin(), compare->lhs.qubits.end());
        qs.insert(qs.end(), compare->rhs.qubits.begin(), compare->rhs.qubits.end());
    }
    return qs;
}

std::string Gate::name() const {
    const auto k = controls.size();
    switch (kind) {
    case GateKind::X:
        return k == 0 ? "x" : k == 1 ? "cnot" : k == 2 ? "toffoli" : "mcx";
    case GateKind::Compare:
        return "compare";
    default:
        break;
    }
    const std::string base = to_string(kind);
    return (k == 0 ? "" : k == 1 ? "c" : "mc") + base;
}

ProjectorSpec ProjectorSpec::zeros(const std::vector<int> &qubits) {
    return {qubits, std::vector<int>(qubits.size(), 0)};
}

ProjectorSpec ProjectorSpec::and_also(const ProjectorSpec &other) const {
    ProjectorSpec out = *this;
    for (std::size_t k = 0; k < other.qubits.size(); ++k) {
        const auto it = std::find(out.qubits.begin(), out.qubits.end(), other.qubits[k]);
        if (it == out.qubits.end()) {
            out.qubits.push_back(other.qubits[k]);
            out.values.push_back(other.values[k]);
        } else if (out.values[static_cast<std::size_t>(it - out.qubits.begin())] != other.values[k]) {
            throw InvalidArgument("projector: conflicting requirements on qubit " +
                                  std::to_string(other.qubits[k]));
        }
    }
    return out;
}

void ProjectorSpec::validate(int width) const {
    if (qubits.size() != values.size())
        throw InvalidArgument("projector: qubit and value lists differ in length");
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        if (qubits[k] < 0 || qubits[k] >= width)
            throw InvalidArgument("projector: qubit out of range");
        if (values[k] != 0 && values[k] != 1)
            throw InvalidArgument("projector: values must be 0 or 1");
    }
}

bool ProjectorSpec::matches(std::uint64_t index) const {
    for (std::size_t k = 0; k < qubits.size(); ++k)
        if (static_cast<int>((index >> qubits[k]) & 1U) != values[k]) return false;
    return true;
}

int Register::qubit(int i) const {
    if (i < 0 || i >= width)
        throw InvalidArgument("register '" + name + "': bit index out of range");
    return offset + i;
}

std::vector<int> Register::qubits() const {
    std::vector<int> qs(static_cast<std::size_t>(width));
    std::iota(qs.begin(), qs.end(), offset);
    return qs;
}

const Register &Circuit::add_register(const std::string &name, int width,
                                      std::optional<FixedPointFormat> format,
                                      bool ancilla) {
    if (width < 1) throw InvalidArgument("register '" + name + "' must be non-empty");
    if (has_register(name)) throw InvalidArgument("duplicate register '" + name + "'");
    if (format) {
        format->validate();
        if (format->n != width)
            throw InvalidArgument("register '" + name + "': format width mismatch");
    }
    registers_.push_back({name, width_, width, format, ancilla});
    width_ += width;
    return registers_.back();
}

const Register &Circuit::reg(const std::string &name) const {
    for (const auto &r : registers_)
        if (r.name == name) return r;
    throw InvalidArgument("no register named '" + name + "'");
}

bool Circuit::has_register(const std::string &name) const {
    return std::any_of(registers_.begin(), registers_.end(),
                       [&](const Register &r) { return r.name == name; });
}

std::vector<int> Circuit::ancillas() const {
    std::vector<int> qs;
    for (const auto &r : registers_)
        if (r.ancilla)
            for (int q : r.qubits()) qs.push_back(q);
    return qs;
}

void Circuit::add(Gate gate) {
    const auto qs = gate.qubits();
    std::set<int> seen;
    for (int q : qs) {
        if (q < 0 || q >= width_)
            throw InvalidArgument("gate " + gate.name() + ": qubit " + std::to_string(q) +
                                  " out of range");
        if (!seen.insert(q).second)
            throw InvalidArgument("gate " + gate.name() + ": repeated operand qubit " +
                                  std::to_string(q));
    }
    if (gate.kind == GateKind::Compare) {
        if (!gate.compare || gate.compare->lhs.qubits.empty() || gate.compare->lhs.is_constant())
            throw InvalidArgument("compare: left operand must be a register");
        const auto &rhs = gate.compare->rhs;
        if (!rhs.is_constant() && rhs.qubits.size() != gate.compare->lhs.qubits.size())
            throw InvalidArgument("compare: operand widths differ");
        if (gate.compare->lhs.qubits.size() > 62)
            throw InvalidArgument("compare: operands wider than 62 bits");
    } else if (gate.compare) {
        throw InvalidArgument("gate " + gate.name() + ": unexpected comparison operands");
    }
    gates_.push_back(std::move(gate));
}

void Circuit::h(int q, std::vector<Control> ctrls) {
    add({GateKind::H, q, std::move(ctrls), 0.0, 0.0, nullptr});
}

void Circuit::x(int q, std::vector<Control> ctrls) {
    add({GateKind::X, q, std::move(ctrls), 0.0, 0.0, nullptr});
}

void Circuit::ry(int q, double angle, std::vector<Control> ctrls, double precision) {
    add({GateKind::Ry, q, std::move(ctrls), angle, precision, nullptr});
}

void Circuit::zphase(int q, double angle, std::vector<Control> ctrls, double precision) {
    add({GateKind::ZPhase, q, std::move(ctrls), angle, precision, nullptr});
}

void Circuit::phase(int q, double angle, std::vector<Control> ctrls, double precision) {
    add({GateKind::Phase, q, std::move(ctrls), angle, precision, nullptr});
}

void Circuit::compare(const std::vector<int> &lhs, const std::vector<int> &rhs, int result,
                      std::vector<Control> ctrls) {
    auto spec = std::make_shared<CompareSpec>();
    spec->lhs.qubits = lhs;
    spec->rhs.qubits = rhs;
    add({GateKind::Compare, result, std::move(ctrls), 0.0, 0.0, std::move(spec)});
}

void Circuit::compare_const(const std::vector<int> &lhs, std::uint64_t rhs, int result,
                            std::vector<Control> ctrls) {
    auto spec = std::make_shared<CompareSpec>();
    spec->lhs.qubits = lhs;
    spec->rhs.constant = rhs;
    add({GateKind::Compare, result, std::move(ctrls), 0.0, 0.0, std::move(spec)});
}

namespace {

Gate remap(const Gate &g, const std::function<int(int)> &f) {
    Gate out = g;
    out.target = f(g.target);
    for (auto &c : out.controls) c.qubit = f(c.qubit);
    if (g.compare) {
        auto spec = std::make_shared<CompareSpec>(*g.compare);
        for (int &q : spec->lhs.qubits) q = f(q);
        for (int &q : spec->rhs.qubits) q = f(q);
        out.compare = std::move(spec);
    }
    return out;
}

} // namespace

void Circuit::append(const Circuit &other, const std::vector<int> &qubit_map) {
    if (static_cast<int>(qubit_map.size()) != other.width())
        throw InvalidArgument("append: qubit map size does not match circuit width");
    const auto f = [&](int q) { return qubit_map[static_cast<std::size_t>(q)]; };
    for (const auto &g : other.gates()) add(remap(g, f));
}

void Circuit::append(const Circuit &other) {
    if (other.width() > width_) throw InvalidArgument("append: circuit is wider");
    for (const auto &g : other.gates()) add(g);
}

Gate inverse(const Gate &g) {
    Gate out = g;
    switch (g.kind) {
    case GateKind::Ry:
    case GateKind::ZPhase:
    case GateKind::Phase:
        out.angle = -g.angle;
        break;
    default:
        break;
    }
    return out;
}

Circuit Circuit::inverse() const {
    Circuit out = empty_copy();
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(circ::inverse(*it));
    return out;
}

Circuit Circuit::controlled(Control c) const {
    if (c.qubit < 0 || c.qubit >= width_) throw InvalidArgument("controlled: qubit out of range");
    Circuit out = empty_copy();
    for (const auto &g : gates_) {
        Gate cg = g;
        cg.controls.push_back(c);
        out.add(std::move(cg));
    }
    return out;
}

Circuit Circuit::empty_copy() const {
    Circuit out;
    out.registers_ = registers_;
    out.width_ = width_;
    return out;
}

// ---------------------------------------------------------------------------
// Comparator expansion
//
// Leaves hold eq_i = [a_i == b_i] (in place on a_i) and g_i = [a_i < b_i]
// (scratch). A balanced tree merges adjacent nodes, most significant first:
//   g = g_hi xor (eq_hi and g_lo),  eq = eq_hi and eq_lo.
// The two Toffolis of a merge read eq_hi; at the first level eq_hi is the
// register qubit itself and the pair runs in sequence, above it eq_hi is
// fanned out to a fresh copy so both run in the same layer. The root writes
// the result, then the forward network is undone.

namespace {

struct Node {
    int eq = -1; ///< qubit holding eq
    int g = -1;  ///< qubit holding g, -1 when g is identically zero
    bool register_eq = false;
};

Gate toffoli(int a, int b, int t, bool a_on = true, bool b_on = true) {
    return {GateKind::X, t, {{a, a_on}, {b, b_on}}, 0.0, 0.0, nullptr};
}
Gate cnot(int c, int t) { return {GateKind::X, t, {{c, true}}, 0.0, 0.0, nullptr}; }
Gate xgate(int t) { return {GateKind::X, t, {}, 0.0, 0.0, nullptr}; }

void expand_impl(const Gate &g, const std::function<int()> &alloc, std::vector<Gate> &out) {
    const auto &spec = *g.compare;
    const auto &a = spec.lhs.qubits;
    const int n = static_cast<int>(a.size());
    const int r = g.target;
    const auto with_outer = [&](Gate w) {
        w.controls.insert(w.controls.end(), g.controls.begin(), g.controls.end());
        return w;
    };

    std::optional<std::uint64_t> c = spec.rhs.constant;
    if (c) {
        if (*c == 0) return; // a < 0 never holds
        if (n < 64 && *c >= (std::uint64_t{1} << n)) {
            out.push_back(with_outer(xgate(r)));
            return;
        }
    }
    const auto cbit = [&](int i) { return (*c >> i) & 1U; };

    if (n == 1) {
        if (c) {
            out.push_back(with_outer({GateKind::X, r, {{a[0], false}}, 0.0, 0.0, nullptr}));
        } else {
            out.push_back(with_outer(toffoli(a[0], spec.rhs.qubits[0], r, false, true)));
        }
        return;
    }

    std::vector<Gate> fwd;
    std::vector<Node> nodes; // most significant first
    for (int i = n - 1; i >= 0; --i) {
        Node leaf;
        leaf.eq = a[static_cast<std::size_t>(i)];
        leaf.register_eq = true;
        if (c) {
            if (cbit(i)) {
                leaf.g = alloc();
                fwd.push_back(cnot(a[static_cast<std::size_t>(i)], leaf.g));
                fwd.push_back(xgate(leaf.g));
            } else {
                fwd.push_back(xgate(a[static_cast<std::size_t>(i)]));
            }
        } else {
            const int b = spec.rhs.qubits[static_cast<std::size_t>(i)];
            leaf.g = alloc();
            fwd.push_back(cnot(b, a[static_cast<std::size_t>(i)]));
            fwd.push_back(toffoli(a[static_cast<std::size_t>(i)], b, leaf.g));
            fwd.push_back(xgate(a[static_cast<std::size_t>(i)]));
        }
        nodes.push_back(leaf);
    }

    while (nodes.size() > 2) {
        std::vector<Node> next;
        for (std::size_t k = 0; k + 1 < nodes.size(); k += 2) {
            const Node &hi = nodes[k];
            const Node &lo = nodes[k + 1];
            Node m;
            int eq_src = hi.eq;
            if (lo.g >= 0 && !hi.register_eq) {
                eq_src = alloc();
                fwd.push_back(cnot(hi.eq, eq_src));
            }
            if (lo.g < 0) {
                m.g = hi.g;
            } else if (hi.g >= 0) {
                fwd.push_back(toffoli(hi.eq, lo.g, hi.g));
                m.g = hi.g;
            } else {
                m.g = alloc();
                fwd.push_back(toffoli(hi.eq, lo.g, m.g));
            }
            m.eq = alloc();
            fwd.push_back(toffoli(eq_src, lo.eq, m.eq));
            next.push_back(m);
        }
        if (nodes.size() % 2 == 1) next.push_back(nodes.back());
        nodes = std::move(next);
    }

    out.insert(out.end(), fwd.begin(), fwd.end());
    const Node &hi = nodes[0];
    const Node &lo = nodes[1];
    if (hi.g >= 0) out.push_back(with_outer(cnot(hi.g, r)));
    if (lo.g >= 0) out.push_back(with_outer(toffoli(hi.eq, lo.g, r)));
    out.insert(out.end(), fwd.rbegin(), fwd.rend());
}

} // namespace

int comparator_scratch_size(const CompareSpec &spec) {
    int used = 0;
    std::vector<Gate> sink;
    Gate g{GateKind::Compare, -1, {}, 0.0, 0.0, std::make_shared<CompareSpec>(spec)};
    expand_impl(g, [&] { return 1 << 30 | used++; }, sink);
    return used;
}

void expand_compare(const Gate &g, const std::vector<int> &scratch, std::vector<Gate> &out) {
    if (g.kind != GateKind::Compare || !g.compare)
        throw InvalidArgument("expand_compare: not a comparison gate");
    std::size_t used = 0;
    expand_impl(
        g,
        [&] {
            if (used >= scratch.size())
                throw InvalidArgument("expand_compare: scratch register too small");
            return scratch[used++];
        },
        out);
}

Circuit expand_composites(const Circuit &c) {
    int need = 0;
    for (const auto &g : c.gates())
        if (g.kind == GateKind::Compare) need = std::max(need, comparator_scratch_size(*g.compare));
    Circuit out = c.empty_copy();
    std::vector<int> scratch;
    if (need > 0) scratch = out.add_register("scratch", need, std::nullopt, true).qubits();
    std::vector<Gate> buf;
    for (const auto &g : c.gates()) {
        if (g.kind != GateKind::Compare) {
            out.add(g);
            continue;
        }
        buf.clear();
        expand_compare(g, scratch, buf);
        for (auto &e : buf) out.add(std::move(e));
    }
    return out;
}

} // namespace qspp::circ

#include "qspp/resources.hpp"

#include "qspp/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace qspp::circ {
namespace {

constexpr double kAngleTol = 1e-12;

bool multiple_of(double angle, double unit) {
    const double r = angle / unit;
    return std::abs(r - std::nearbyint(r)) < kAngleTol;
}

/// Z- or Y-rotation angle equivalent to the gate, up to global phase.
double rotation_angle(const Gate &g) {
    return g.kind == GateKind::ZPhase ? 2.0 * g.angle : g.angle;
}

double precision_of(const Gate &g, const ResourceRules &rules) {
    const double eps = g.precision > 0.0 ? g.precision : rules.default_precision;
    if (!(eps > 0.0))
        throw AccountingError("gate " + g.name() + " needs a synthesis precision");
    return eps;
}

GateCost rotation(const Gate &g, const ResourceRules &rules) {
    const std::int64_t c = rules.rotation_cost(precision_of(g, rules));
    return {c, c, 0};
}

GateCost mcx(int k, const ResourceRules &rules) {
    if (k <= 1) return {};
    if (k == 2) return {rules.toffoli_t_count, rules.toffoli_t_depth, rules.toffoli_ancillas};
    const int levels = std::bit_width(static_cast<unsigned>(k - 1)); // ceil(log2 k)
    return {static_cast<std::int64_t>(rules.toffoli_t_count) * (2 * k - 3),
            static_cast<std::int64_t>(rules.toffoli_t_depth) * (2 * levels - 1),
            (k - 2) + rules.toffoli_ancillas * (k / 2)};
}

/// Single-qubit or singly controlled non-X gate.
GateCost one_control(const Gate &g, bool controlled, const ResourceRules &rules) {
    const double pi = std::numbers::pi;
    switch (g.kind) {
    case GateKind::H:
        return controlled ? GateCost{rules.controlled_h_t_count, rules.controlled_h_t_depth, 0}
                          : GateCost{};
    case GateKind::X:
        return {};
    case GateKind::Ry:
    case GateKind::ZPhase:
    case GateKind::Phase: {
        const double a = rotation_angle(g);
        if (!controlled) {
            if (multiple_of(a, pi / 2)) return {};
            if (multiple_of(a, pi / 4)) return {1, 1, 0};
            return rotation(g, rules);
        }
        // identities and Clifford controlled phases
        if (g.kind == GateKind::Ry && multiple_of(a, 4 * pi)) return {};
        if (g.kind == GateKind::ZPhase && multiple_of(g.angle, pi)) return {};
        if (g.kind == GateKind::Phase && multiple_of(g.angle, pi)) return {};
        return rotation(g, rules);
    }
    case GateKind::Compare:
        break;
    }
    throw AccountingError("composite gate reached the cost model");
}

} // namespace

std::int64_t ResourceRules::rotation_cost(double eps) const {
    if (!(eps > 0.0 && eps < 1.0))
        throw AccountingError("rotation precision must lie in (0, 1)");
    return static_cast<std::int64_t>(std::ceil(rotation_coefficient * std::log2(1.0 / eps) - 1e-9));
}

GateCost gate_cost(const Gate &g, const ResourceRules &rules) {
    const int k = static_cast<int>(g.controls.size());
    if (g.kind == GateKind::Compare)
        throw AccountingError("comparison gates must be expanded before costing");
    if (g.kind == GateKind::X) return mcx(k, rules);
    if (g.kind == GateKind::Phase && k >= 1 && multiple_of(g.angle, 2 * std::numbers::pi))
        return {};
    if (g.kind == GateKind::Phase && k >= 2 && multiple_of(g.angle, std::numbers::pi))
        return mcx(k, rules); // multi-controlled Z
    if (k <= 1) return one_control(g, k == 1, rules);
    const GateCost and_tree = mcx(k, rules);
    const GateCost core = one_control(g, true, rules);
    return {2 * and_tree.t_count + core.t_count, 2 * and_tree.t_depth + core.t_depth,
            and_tree.ancillas + 1};
}

ResourceCount count_resources(const Circuit &circuit, const ResourceRules &rules) {
    const Circuit expanded = expand_composites(circuit);
    std::vector<std::int64_t> ready(static_cast<std::size_t>(expanded.width()), 0);
    struct Event {
        std::int64_t time;
        int delta;
    };
    std::vector<Event> events;
    ResourceCount out;
    for (const auto &g : expanded.gates()) {
        const GateCost cost = gate_cost(g, rules);
        const auto qs = g.qubits();
        std::int64_t start = 0;
        for (int q : qs) start = std::max(start, ready[static_cast<std::size_t>(q)]);
        const std::int64_t end = start + cost.t_depth;
        for (int q : qs) ready[static_cast<std::size_t>(q)] = end;
        out.t_count += cost.t_count;
        if (cost.ancillas > 0 && cost.t_depth > 0) {
            events.push_back({start, cost.ancillas});
            events.push_back({end, -cost.ancillas});
        }
    }
    for (auto t : ready) out.t_depth = std::max(out.t_depth, t);
    std::sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
        return a.time != b.time ? a.time < b.time : a.delta < b.delta;
    });
    int live = 0, peak = 0;
    for (const auto &e : events) {
        live += e.delta;
        peak = std::max(peak, live);
    }
    out.logical_qubits = expanded.width() + peak;
    return out;
}

} // namespace qspp::circ

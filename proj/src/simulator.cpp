#include "qspp/simulator.hpp"

#include "qspp/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace qspp::sim {
namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

using circ::Gate;
using circ::GateKind;

struct ControlMask {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
};

ControlMask control_mask(const Gate &g) {
    ControlMask m;
    for (const auto &c : g.controls) {
        const std::uint64_t bit = std::uint64_t{1} << c.qubit;
        m.mask |= bit;
        if (c.on_one) m.value |= bit;
    }
    return m;
}

/// Inserts a zero bit at position `pos`.
inline std::uint64_t insert_zero(std::uint64_t idx, int pos) {
    const std::uint64_t low = idx & ((std::uint64_t{1} << pos) - 1);
    return ((idx >> pos) << (pos + 1)) | low;
}

inline std::uint64_t gather(std::uint64_t idx, const std::vector<int> &qubits) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k)
        v |= ((idx >> qubits[k]) & 1U) << k;
    return v;
}

/// Runs body(begin, end) over [0, n) in contiguous chunks.
template <class F>
void parallel_for(std::uint64_t n, int threads, F &&body) {
    constexpr std::uint64_t kMinChunk = std::uint64_t{1} << 14;
    if (threads <= 1 || n < 2 * kMinChunk) {
        body(std::uint64_t{0}, n);
        return;
    }
    const auto t = static_cast<std::uint64_t>(threads);
    const std::uint64_t chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    for (std::uint64_t b = 0; b < n; b += chunk)
        pool.emplace_back([&body, b, e = std::min(n, b + chunk)] { body(b, e); });
    for (auto &th : pool) th.join();
}

struct Mat2 {
    amp_t a, b, c, d; // [[a, b], [c, d]]
};

Mat2 gate_matrix(const Gate &g, double angle) {
    using namespace std::complex_literals;
    switch (g.kind) {
    case GateKind::H: {
        const double s = (std::numbers::sqrt2 / 2.0);
        return {s, s, s, -s};
    }
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Ry: {
        const double c = std::cos(angle / 2), s = std::sin(angle / 2);
        return {c, -s, s, c};
    }
    case GateKind::ZPhase:
        return {std::polar(1.0, -angle), 0.0, 0.0, std::polar(1.0, angle)};
    case GateKind::Phase:
        return {1.0, 0.0, 0.0, std::polar(1.0, angle)};
    case GateKind::Compare:
        break;
    }
    throw InvalidArgument("gate has no 2x2 matrix");
}

void apply_compare(std::vector<amp_t> &amps, int width, const Gate &g, int threads) {
    const auto cm = control_mask(g);
    const auto &spec = *g.compare;
    const std::uint64_t tbit = std::uint64_t{1} << g.target;
    const std::uint64_t half = std::uint64_t{1} << (width - 1);
    parallel_for(half, threads, [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t k = b; k < e; ++k) {
            const std::uint64_t i0 = insert_zero(k, g.target);
            if ((i0 & cm.mask) != cm.value) continue;
            const std::uint64_t lhs = gather(i0, spec.lhs.qubits);
            const std::uint64_t rhs =
                spec.rhs.is_constant() ? *spec.rhs.constant : gather(i0, spec.rhs.qubits);
            if (lhs < rhs) std::swap(amps[i0], amps[i0 | tbit]);
        }
    });
}

void apply_with_angle(StateVector &state, const Gate &g, double angle, int threads) {
    auto &amps = state.amplitudes();
    if (g.kind == GateKind::Compare) {
        apply_compare(amps, state.width(), g, threads);
        return;
    }
    const auto cm = control_mask(g);
    const std::uint64_t tbit = std::uint64_t{1} << g.target;
    const std::uint64_t half = std::uint64_t{1} << (state.width() - 1);
    const Mat2 m = gate_matrix(g, angle);
    const bool diagonal = g.kind == GateKind::ZPhase || g.kind == GateKind::Phase;
    const bool swap_only = g.kind == GateKind::X;
    parallel_for(half, threads, [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t k = b; k < e; ++k) {
            const std::uint64_t i0 = insert_zero(k, g.target);
            if ((i0 & cm.mask) != cm.value) continue;
            const std::uint64_t i1 = i0 | tbit;
            if (swap_only) {
                std::swap(amps[i0], amps[i1]);
            } else if (diagonal) {
                amps[i0] *= m.a;
                amps[i1] *= m.d;
            } else {
                const amp_t x = amps[i0], y = amps[i1];
                amps[i0] = m.a * x + m.b * y;
                amps[i1] = m.c * x + m.d * y;
            }
        }
    });
}

void check_width(int width, int cap) {
    if (width < 1) throw InvalidArgument("state width must be positive");
    if (width > cap || width > 40)
        throw CapacityError("state width " + std::to_string(width) + " exceeds cap " +
                            std::to_string(cap));
}

} // namespace

StateVector::StateVector(int width, int width_cap) : width_(width) {
    check_width(width, width_cap);
    amps_.assign(std::size_t{1} << width, amp_t{});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(int width, std::uint64_t index, int width_cap) {
    StateVector s(width, width_cap);
    if (index >= s.size()) throw InvalidArgument("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto &a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
}

int default_threads() {
    const char *env = std::getenv("QSPP_THREADS");
    if (!env) return 1;
    const int hw = std::max(1U, std::thread::hardware_concurrency());
    return std::clamp(std::atoi(env), 1, hw);
}

void apply(StateVector &state, const Gate &gate, int threads) {
    apply_with_angle(state, gate, gate.angle, threads);
}

StateVector run(const circ::Circuit &circuit, StateVector initial, const RunOptions &options) {
    check_width(circuit.width(), options.width_cap);
    if (initial.width() != circuit.width())
        throw InvalidArgument("run: state width " + std::to_string(initial.width()) +
                              " differs from circuit width " + std::to_string(circuit.width()));
    const int threads = options.threads > 0 ? options.threads : default_threads();
    std::mt19937_64 rng(options.seed);
    for (const auto &g : circuit.gates()) {
        double angle = g.angle;
        if (options.rotation_noise > 0.0 &&
            (g.kind == GateKind::Ry || g.kind == GateKind::ZPhase || g.kind == GateKind::Phase)) {
            const double eps = g.precision > 0.0 ? g.precision : options.rotation_noise;
            angle += std::uniform_real_distribution<double>(-eps, eps)(rng);
        }
        apply_with_angle(initial, g, angle, threads);
    }
    return initial;
}

double probability(const StateVector &state, const ProjectorSpec &projector) {
    projector.validate(state.width());
    std::uint64_t mask = 0, value = 0;
    for (std::size_t k = 0; k < projector.qubits.size(); ++k) {
        mask |= std::uint64_t{1} << projector.qubits[k];
        if (projector.values[k]) value |= std::uint64_t{1} << projector.qubits[k];
    }
    const auto &amps = state.amplitudes();
    double acc = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i)
        if ((i & mask) == value) acc += std::norm(amps[i]);
    return acc;
}

double zero_probability(const StateVector &state, const std::vector<int> &qubits) {
    return probability(state, ProjectorSpec::zeros(qubits));
}

StateVector inject_distribution(int width, const std::vector<double> &probs,
                                const std::vector<int> &qubits, int width_cap) {
    if (qubits.size() >= 63 || probs.size() != (std::size_t{1} << qubits.size()))
        throw InvalidArgument("inject_distribution: need 2^n probabilities for n qubits");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw InvalidArgument("inject_distribution: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidArgument("inject_distribution: probabilities sum to " + std::to_string(total));
    StateVector s(width, width_cap);
    for (int q : qubits)
        if (q < 0 || q >= width) throw InvalidArgument("inject_distribution: qubit out of range");
    auto &amps = s.amplitudes();
    amps[0] = 0.0;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k)
            idx |= ((i >> k) & 1U) << qubits[k];
        amps[idx] = std::sqrt(probs[i]);
    }
    return s;
}

std::vector<std::vector<amp_t>> unitary(const circ::Circuit &circuit) {
    const int w = circuit.width();
    if (w > 12) throw CapacityError("unitary extraction limited to 12 qubits");
    std::vector<std::vector<amp_t>> cols;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << w); ++c)
        cols.push_back(run(circuit, StateVector::basis(w, c), {.threads = 1}).amplitudes());
    return cols;
}

std::uint64_t run_basis(const circ::Circuit &circuit, std::uint64_t input) {
    if (circuit.width() > 63) throw CapacityError("basis simulation limited to 63 qubits");
    std::uint64_t s = input;
    for (const auto &g : circuit.gates()) {
        const auto cm = control_mask(g);
        if ((s & cm.mask) != cm.value) continue;
        switch (g.kind) {
        case GateKind::X:
            s ^= std::uint64_t{1} << g.target;
            break;
        case GateKind::Compare: {
            const auto &spec = *g.compare;
            const std::uint64_t rhs =
                spec.rhs.is_constant() ? *spec.rhs.constant : gather(s, spec.rhs.qubits);
            if (gather(s, spec.lhs.qubits) < rhs) s ^= std::uint64_t{1} << g.target;
            break;
        }
        case GateKind::ZPhase:
        case GateKind::Phase:
            break;
        default:
            throw InvalidArgument("run_basis: gate '" + g.name() + "' is not a permutation");
        }
    }
    return s;
}

double Dyadic::value() const { return std::ldexp(static_cast<double>(num), -log2_den); }

bool Dyadic::equals(std::uint64_t n, int log2_d) const {
    auto reduce = [](std::uint64_t v, int e) {
        while (v != 0 && e > 0 && (v & 1U) == 0) {
            v >>= 1;
            --e;
        }
        return std::pair{v, v == 0 ? 0 : e};
    };
    return reduce(num, log2_den) == reduce(n, log2_d);
}

Dyadic exact_probability(const circ::Circuit &circuit, std::uint64_t input,
                         const ProjectorSpec &projector, int width_cap) {
    const int w = circuit.width();
    check_width(w, width_cap);
    projector.validate(w);
    std::vector<std::int64_t> amps(std::size_t{1} << w, 0);
    if (input >= amps.size()) throw InvalidArgument("exact_probability: input out of range");
    amps[input] = 1;
    int h = 0;
    for (const auto &g : circuit.gates()) {
        const auto cm = control_mask(g);
        const std::uint64_t tbit = std::uint64_t{1} << g.target;
        switch (g.kind) {
        case GateKind::H: {
            if (!g.controls.empty())
                throw InvalidArgument("exact_probability: controlled Hadamard is not dyadic");
            if (++h > 62) throw CapacityError("exact_probability: too many Hadamards");
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if (i & tbit) continue;
                const auto x = amps[i], y = amps[i | tbit];
                amps[i] = x + y;
                amps[i | tbit] = x - y;
            }
            break;
        }
        case GateKind::Phase:
            if (std::abs(std::remainder(g.angle, 2 * std::numbers::pi)) < 1e-15) break;
            if (std::abs(std::abs(std::remainder(g.angle, 2 * std::numbers::pi)) - std::numbers::pi) > 1e-15)
                throw InvalidArgument("exact_probability: only pi phases are supported");
            for (std::uint64_t i = 0; i < amps.size(); ++i)
                if ((i & tbit) && (i & cm.mask) == cm.value) amps[i] = -amps[i];
            break;
        case GateKind::X:
            for (std::uint64_t i = 0; i < amps.size(); ++i)
                if (!(i & tbit) && (i & cm.mask) == cm.value) std::swap(amps[i], amps[i | tbit]);
            break;
        case GateKind::Compare: {
            const auto &spec = *g.compare;
            for (std::uint64_t i = 0; i < amps.size(); ++i) {
                if ((i & tbit) || (i & cm.mask) != cm.value) continue;
                const std::uint64_t rhs =
                    spec.rhs.is_constant() ? *spec.rhs.constant : gather(i, spec.rhs.qubits);
                if (gather(i, spec.lhs.qubits) < rhs) std::swap(amps[i], amps[i | tbit]);
            }
            break;
        }
        default:
            throw InvalidArgument("exact_probability: gate '" + g.name() + "' is not supported");
        }
    }
    // amplitudes are num / 2^{h/2}; probabilities num^2 / 2^h
    u128 acc = 0;
    for (std::uint64_t i = 0; i < amps.size(); ++i)
        if (projector.matches(i))
            acc += static_cast<u128>(static_cast<i128>(amps[i]) * amps[i]);
    return {static_cast<std::uint64_t>(acc), h};
}

void write_state_csv(std::ostream &out, const StateVector &state, double min_prob) {
    out << "index,bits,re,im,prob\n" << std::setprecision(17);
    const auto &amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p < min_prob || (min_prob == 0.0 && p == 0.0)) continue;
        std::string bits(static_cast<std::size_t>(state.width()), '0');
        for (int q = 0; q < state.width(); ++q)
            if ((i >> q) & 1U) bits[static_cast<std::size_t>(state.width() - 1 - q)] = '1';
        out << i << ',' << bits << ',' << amps[i].real() << ',' << amps[i].imag() << ',' << p << '\n';
    }
}

} // namespace qspp::sim

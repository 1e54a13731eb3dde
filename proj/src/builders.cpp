#include "qspp/builders.hpp"

#include "qspp/errors.hpp"

#include <cmath>
#include <numbers>

namespace qspp::circ {
namespace {

std::vector<Control> zero_controls(const std::vector<int> &qs) {
    std::vector<Control> cs;
    for (int q : qs) cs.push_back({q, false});
    return cs;
}

/// out[k..] += 1 (mod 2^{m-k}) by a ladder of multi-controlled X gates.
void increment(Circuit &c, const std::vector<int> &out, std::size_t k) {
    for (std::size_t j = out.size(); j-- > k;) {
        std::vector<Control> cs;
        for (std::size_t i = k; i < j; ++i) cs.push_back({out[i], true});
        c.x(out[j], std::move(cs));
    }
}

} // namespace

Circuit build_comparator(int n) {
    if (n < 1) throw InvalidArgument("build_comparator: n must be at least 1");
    Circuit c;
    const auto a = c.add_register("a", n).qubits();
    const auto b = c.add_register("b", n).qubits();
    const int r = c.add_register("result", 1).offset;
    c.compare(a, b, r);
    return c;
}

void append_const_adder(Circuit &c, const std::vector<int> &in, const FixedPointFormat &fin,
                        const std::vector<int> &out, const FixedPointFormat &fout, double s) {
    fin.validate();
    fout.validate();
    if (static_cast<int>(in.size()) != fin.n || static_cast<int>(out.size()) != fout.n)
        throw InvalidArgument("const adder: register widths do not match formats");
    const int shift = fout.frac_bits() - fin.frac_bits();
    if (shift < 0)
        throw RangeError("const adder: output has fewer fractional bits than input");
    const double scaled = std::ldexp(s, fout.frac_bits());
    if (!std::isfinite(scaled) || scaled != std::nearbyint(scaled) || std::abs(scaled) >= 0x1p62)
        throw RangeError("const adder: constant is not on the output grid");
    const double lo = fin.min_value() + s;
    const double hi = fin.max_value() - fin.resolution() + s;
    if (lo < fout.min_value() || hi >= fout.max_value())
        throw RangeError("const adder: x + s leaves the output range [" +
                         std::to_string(fout.min_value()) + ", " + std::to_string(fout.max_value()) +
                         ")");

    const int m = fout.n;
    for (int i = 0; i < fin.n && i + shift < m; ++i)
        c.x(out[static_cast<std::size_t>(i + shift)], {{in[static_cast<std::size_t>(i)], true}});
    if (fin.is_signed)
        for (int j = fin.n + shift; j < m; ++j)
            c.x(out[static_cast<std::size_t>(j)], {{in.back(), true}});

    const auto S = static_cast<std::int64_t>(scaled);
    const std::uint64_t mask = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    const std::uint64_t add = static_cast<std::uint64_t>(S) & mask;
    for (int k = m - 1; k >= 0; --k)
        if ((add >> k) & 1U) increment(c, out, static_cast<std::size_t>(k));
}

Circuit build_const_adder(const FixedPointFormat &fin, double s, const FixedPointFormat &fout) {
    Circuit c;
    const auto in = c.add_register("x", fin.n, fin).qubits();
    const auto out = c.add_register("y", fout.n, fout).qubits();
    append_const_adder(c, in, fin, out, fout, s);
    return c;
}

BlockEncoding build_u_sqrt(const FixedPointFormat &format) {
    format.validate();
    if (format.is_signed) throw InvalidArgument("build_u_sqrt: input must be unsigned");
    BlockEncoding be;
    auto &c = be.circuit;
    const auto x = c.add_register("x", format.n, format).qubits();
    const auto j = c.add_register("j", format.n, std::nullopt, true).qubits();
    const int res = c.add_register("res", 1, std::nullopt, true).offset;
    for (int q : j) c.h(q);
    c.compare(j, x, res);
    c.x(res);
    be.in_zeros = j;
    be.in_zeros.push_back(res);
    be.out_zeros = {res};
    be.data = "x";
    return be;
}

BlockEncoding build_u_sin(const FixedPointFormat &format, double eps_r) {
    format.validate();
    if (!(eps_r > 0.0)) throw InvalidArgument("build_u_sin: eps_r must be positive");
    BlockEncoding be;
    auto &c = be.circuit;
    const auto x = c.add_register("x", format.n, format).qubits();
    const int anc = c.add_register("anc", 1, std::nullopt, true).offset;
    c.ry(anc, std::numbers::pi, {}, eps_r);
    for (int i = 0; i < format.n; ++i) {
        double w = std::ldexp(1.0, i - format.frac_bits());
        if (format.is_signed && i == format.n - 1) w = -w;
        c.ry(anc, -2.0 * w, {{x[static_cast<std::size_t>(i)], true}}, eps_r);
    }
    be.in_zeros = {anc};
    be.out_zeros = {anc};
    be.data = "x";
    return be;
}

void append_projector_rotation(Circuit &c, const std::vector<int> &zeros, double phi,
                               std::optional<int> flag, std::optional<int> sign,
                               double precision) {
    if (zeros.empty()) throw InvalidArgument("projector rotation: empty qubit subset");
    if (zeros.size() == 1) {
        // e^{i phi (2|0><0| - I)} = e^{i phi Z}
        const int q = zeros[0];
        if (sign) c.x(q, {{*sign, true}});
        c.zphase(q, -phi, {}, precision);
        if (sign) c.x(q, {{*sign, true}});
        return;
    }
    if (!flag) throw InvalidArgument("projector rotation: flag qubit required");
    c.x(*flag, zero_controls(zeros));
    if (sign) c.x(*flag, {{*sign, true}});
    c.zphase(*flag, phi, {}, precision); // flag = 1 on the projector: e^{+i phi}
    if (sign) c.x(*flag, {{*sign, true}});
    c.x(*flag, zero_controls(zeros));
}

Circuit build_projector_rotation(int k, double phi, double precision) {
    if (k < 1) throw InvalidArgument("projector rotation: empty qubit subset");
    Circuit c;
    const auto q = c.add_register("q", k).qubits();
    std::optional<int> flag;
    if (k > 1) flag = c.add_register("flag", 1, std::nullopt, true).offset;
    append_projector_rotation(c, q, phi, flag, std::nullopt, precision);
    return c;
}

QspCircuit build_qsp(const BlockEncoding &u, const qsp::PhaseFactors &phases, double precision) {
    if (phases.convention != qsp::Convention::WxReal)
        throw InvalidArgument("build_qsp: unsupported phase convention");
    const int d = phases.degree();
    if (d < 1) throw InvalidArgument("build_qsp: need at least one phase");
    const auto chi = qsp::circuit_angles(phases);

    QspCircuit out;
    Circuit &c = out.circuit;
    c = u.circuit.empty_copy();
    out.control = c.add_register("qsp_ctrl", 1, std::nullopt, true).offset;
    const bool need_flag = u.out_zeros.size() > 1 || (d >= 2 && u.in_zeros.size() > 1);
    std::optional<int> flag;
    if (need_flag) flag = c.add_register("qsp_flag", 1, std::nullopt, true).offset;

    std::vector<int> map(static_cast<std::size_t>(u.circuit.width()));
    for (std::size_t q = 0; q < map.size(); ++q) map[q] = static_cast<int>(q);
    const Circuit u_dag = u.circuit.inverse();

    c.h(out.control);
    for (int t = 1; t <= d; ++t) {
        const bool forward = t % 2 == 1;
        c.append(forward ? u.circuit : u_dag, map);
        append_projector_rotation(c, forward ? u.out_zeros : u.in_zeros,
                                  chi[static_cast<std::size_t>(d - t)], flag, out.control,
                                  precision);
    }
    c.h(out.control);

    out.success = ProjectorSpec::zeros({out.control})
                      .and_also(ProjectorSpec::zeros(d % 2 == 1 ? u.out_zeros : u.in_zeros));
    return out;
}

void append_phase_flip(Circuit &c, const ProjectorSpec &pattern) {
    pattern.validate(c.width());
    if (pattern.qubits.empty()) throw InvalidArgument("phase flip: empty pattern");
    const int t = pattern.qubits[0];
    std::vector<Control> cs;
    for (std::size_t k = 1; k < pattern.qubits.size(); ++k)
        cs.push_back({pattern.qubits[k], pattern.values[k] == 1});
    const bool flip = pattern.values[0] == 0;
    if (flip) c.x(t);
    c.phase(t, std::numbers::pi, std::move(cs));
    if (flip) c.x(t);
}

Circuit build_grover_q(const Circuit &a, const ProjectorSpec &good) {
    Circuit q = a.empty_copy();
    std::vector<int> all(static_cast<std::size_t>(a.width()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    append_phase_flip(q, good);
    q.append(a.inverse());
    append_phase_flip(q, ProjectorSpec::zeros(all));
    q.append(a);
    return q;
}

} // namespace qspp::circ

#pragma once

// Quantum pigeonhole experiment: three system qubits pre-selected in |+++>,
// post-selected in the |+i>/|-i> basis, with pairwise parity read out
// through ancillas by one of three wirings.
//
// Conventions
//   * Pigeons 1, 2, 3 are system qubits 0, 1, 2 and classical bits 0, 1, 2.
//   * After the phase gate S and a Hadamard, measuring 1 post-selects |+i>
//     and measuring 0 post-selects |-i>.
//   * Parity bit 0 = the pair was found in the same state, 1 = different.
//   * Pairs are listed in (12, 23, 13) order everywhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pigeonsim/circuit.hpp"
#include "pigeonsim/error.hpp"
#include "pigeonsim/simcore.hpp"

namespace pigeonsim::qphe {

inline constexpr std::size_t kSystemQubits = 3;
/// Largest contrary-branch probability (conditional on the row) still read as deterministic.
inline constexpr double kDeterminismTolerance = 1e-9;

enum class PostState { PlusI, MinusI };

/// Post-selected product state; qubits[0] is pigeon 1.
struct PostLabel {
    std::array<PostState, kSystemQubits> qubits;

    bool operator==(const PostLabel &) const = default;

    /// Bit k of `bits` is the measured value of system qubit k.
    static PostLabel from_system_bits(std::uint64_t bits) {
        PostLabel l{};
        for (std::size_t k = 0; k < kSystemQubits; ++k)
            l.qubits[k] = ((bits >> k) & 1U) ? PostState::PlusI : PostState::MinusI;
        return l;
    }

    std::uint64_t system_bits() const {
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < kSystemQubits; ++k)
            if (qubits[k] == PostState::PlusI)
                bits |= std::uint64_t{1} << k;
        return bits;
    }

    /// Position in the printed table: rows run +i+i+i, +i+i-i, ..., -i-i-i.
    std::size_t row_index() const {
        std::size_t r = 0;
        for (std::size_t k = 0; k < kSystemQubits; ++k)
            r = (r << 1) | (qubits[k] == PostState::MinusI ? 1U : 0U);
        return r;
    }

    static PostLabel from_row_index(std::size_t r) {
        PostLabel l{};
        for (std::size_t k = 0; k < kSystemQubits; ++k)
            l.qubits[k] = ((r >> (kSystemQubits - 1 - k)) & 1U) ? PostState::MinusI : PostState::PlusI;
        return l;
    }

    PostLabel flipped() const {
        PostLabel l = *this;
        for (auto &q : l.qubits)
            q = q == PostState::PlusI ? PostState::MinusI : PostState::PlusI;
        return l;
    }

    std::string str() const {
        std::string s;
        for (PostState q : qubits)
            s += q == PostState::PlusI ? "+i" : "-i";
        return s;
    }

    /// The bra-side product state as a 3-qubit ket.
    Statevector state() const {
        std::array<BasisLabel, kSystemQubits> b{};
        for (std::size_t k = 0; k < kSystemQubits; ++k)
            b[k] = qubits[k] == PostState::PlusI ? BasisLabel::PlusI : BasisLabel::MinusI;
        return build_product_state(b);
    }
};

inline std::array<PostLabel, 8> all_labels() {
    std::array<PostLabel, 8> out{};
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r] = PostLabel::from_row_index(r);
    return out;
}

/// Same-state projector on pigeons (first, second), 1-based.
struct PairProjector {
    int first;
    int second;

    bool operator==(const PairProjector &) const = default;

    std::size_t qubit_a() const { return static_cast<std::size_t>(first - 1); }
    std::size_t qubit_b() const { return static_cast<std::size_t>(second - 1); }
    std::string name() const { return std::to_string(first) + std::to_string(second); }

    static PairProjector make(int first, int second) {
        if (first < 1 || first > 3 || second < 1 || second > 3 || first == second)
            throw ArgumentError("pair (" + std::to_string(first) + "," + std::to_string(second) +
                                ") is not two distinct pigeons in 1..3");
        return {first, second};
    }

    static PairProjector parse(std::string_view s) {
        if (s.size() != 2 || s[0] < '1' || s[0] > '3' || s[1] < '1' || s[1] > '3')
            throw ArgumentError("pair must be one of 12, 23, 13; got '" + std::string(s) + "'");
        return make(s[0] - '0', s[1] - '0');
    }
};

inline constexpr std::array<PairProjector, 3> kPairs = {PairProjector{1, 2}, PairProjector{2, 3},
                                                        PairProjector{1, 3}};

inline std::size_t pair_column(PairProjector pp) {
    for (std::size_t k = 0; k < kPairs.size(); ++k)
        if ((kPairs[k].first == pp.first && kPairs[k].second == pp.second) ||
            (kPairs[k].first == pp.second && kPairs[k].second == pp.first))
            return k;
    throw ArgumentError("unknown pair " + pp.name());
}

/// |+>|+>|+>
inline Statevector build_preselection() {
    Statevector s(kSystemQubits);
    for (std::size_t q = 0; q < kSystemQubits; ++q)
        apply_1q(s, GateKind::H, q);
    return s;
}

/// Pi_lm |state> on a 3-qubit state and its squared norm.
inline std::pair<Statevector, double> apply_pair_projector(Statevector state, PairProjector pp) {
    if (state.num_qubits() != kSystemQubits)
        throw ShapeError("pair projector acts on 3 qubits, got " + std::to_string(state.num_qubits()));
    const std::size_t a = pp.qubit_a(), b = pp.qubit_b();
    for (std::size_t j = 0; j < state.size(); ++j)
        if (((j >> a) & 1U) != ((j >> b) & 1U))
            state[j] = 0.0;
    const double w = state.norm_squared();
    return {std::move(state), w};
}

/// Pi_lm as a dense row-major 8x8 matrix.
inline std::vector<Complex> pair_projector_matrix(PairProjector pp) {
    const std::size_t dim = std::size_t{1} << kSystemQubits;
    std::vector<Complex> m(dim * dim);
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<Complex> e(dim);
        e[col] = 1.0;
        auto [img, w] = apply_pair_projector(Statevector(std::move(e)), pp);
        (void)w;
        for (std::size_t row = 0; row < dim; ++row)
            m[row * dim + col] = img[row];
    }
    return m;
}

/// <label| Pi_lm |+++>
inline Complex qphe_overlap(PairProjector pp, const PostLabel &label) {
    auto [same, w] = apply_pair_projector(build_preselection(), pp);
    (void)w;
    return inner_product(label.state(), same);
}

/// <label| (1 - Pi_lm) |+++>
inline Complex qphe_complement_overlap(PairProjector pp, const PostLabel &label) {
    const Statevector pre = build_preselection();
    auto [same, w] = apply_pair_projector(pre, pp);
    (void)w;
    return inner_product(label.state(), pre) - inner_product(label.state(), same);
}

enum class SchemeId { DirectParity, Distillation, CommonTarget };

inline constexpr std::array<SchemeId, 3> kSchemes = {SchemeId::DirectParity, SchemeId::Distillation,
                                                     SchemeId::CommonTarget};

inline std::string_view scheme_name(SchemeId s) {
    switch (s) {
    case SchemeId::DirectParity: return "direct";
    case SchemeId::Distillation: return "distillation";
    case SchemeId::CommonTarget: return "common_target";
    }
    return "?";
}

inline SchemeId parse_scheme(std::string_view s) {
    for (SchemeId id : kSchemes)
        if (scheme_name(id) == s)
            return id;
    throw ArgumentError("unknown scheme '" + std::string(s) +
                        "' (expected direct, distillation or common_target)");
}

struct SchemeOptions {
    /// Gate applied to each system qubit before the final Hadamard.
    GateKind phase_gate = GateKind::S;
    /// CommonTarget only: route each system qubit to the common target through
    /// its own Bell pair with measured X/Z corrections instead of direct CXs
    /// onto the Bell halves.
    bool feed_forward = false;
};

/// Where a scheme's results live in the classical register.
struct Readout {
    std::array<std::size_t, kSystemQubits> system_clbits{0, 1, 2};
    /// The parity bit is the XOR of these classical bits.
    std::vector<std::size_t> parity_clbits;

    std::uint64_t system_bits(std::uint64_t clbits) const {
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < kSystemQubits; ++k)
            bits |= ((clbits >> system_clbits[k]) & 1U) << k;
        return bits;
    }

    int parity(std::uint64_t clbits) const {
        int p = 0;
        for (std::size_t c : parity_clbits)
            p ^= static_cast<int>((clbits >> c) & 1U);
        return p;
    }
};

/// Readout layout for a scheme; identical for every pair.
inline Readout scheme_readout(SchemeId scheme, const SchemeOptions & = {}) {
    Readout r;
    r.parity_clbits = scheme == SchemeId::Distillation ? std::vector<std::size_t>{3, 4}
                                                       : std::vector<std::size_t>{3};
    return r;
}

struct SchemeCircuit {
    SchemeId scheme;
    PairProjector pair;
    Circuit circuit;
    Readout readout;
};

namespace detail {

inline void preselect(Circuit &c) {
    for (std::size_t q = 0; q < kSystemQubits; ++q)
        c.h(q);
}

inline void postselect(Circuit &c, GateKind phase) {
    for (std::size_t q = 0; q < kSystemQubits; ++q)
        c.gate(phase, {q});
    for (std::size_t q = 0; q < kSystemQubits; ++q)
        c.h(q);
    for (std::size_t q = 0; q < kSystemQubits; ++q)
        c.measure(q, q);
}

inline void bell_pair(Circuit &c, std::size_t a, std::size_t b) {
    c.h(a);
    c.cx(a, b);
}

inline std::vector<std::size_t> iota(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t k = 0; k < n; ++k)
        v[k] = k;
    return v;
}

} // namespace detail

/// Circuit for one scheme and pair. Qubits 0-2 are the pigeons; ancillas follow.
///
///   direct         ancilla 3 is the common target of CX(l), CX(m); c3 = parity
///   distillation   Bell pair (3,4); CX(l->3), CX(m->4); parity = c3 xor c4
///   common_target  Bell pair (3,4); CX(l->3), CX(m->4); CX(3->5), CX(4->5); c3 = parity
///
/// With `feed_forward` the common-target circuit uses Bell pairs (3,4) and
/// (6,7): qubit l entangles only with 3, m only with 6, and target 5 only with
/// 4 and 7. Measured corrections (c4..c7) turn each pair into a remote CX.
inline SchemeCircuit build_scheme_circuit(SchemeId scheme, PairProjector pair,
                                          const SchemeOptions &options = {}) {
    const std::size_t l = pair.qubit_a();
    const std::size_t m = pair.qubit_b();
    const std::string suffix = "_" + pair.name();

    switch (scheme) {
    case SchemeId::DirectParity: {
        Circuit c(4, 4, "direct" + suffix);
        detail::preselect(c);
        c.barrier(detail::iota(4));
        c.cx(l, 3);
        c.cx(m, 3);
        c.measure(3, 3);
        c.barrier(detail::iota(4));
        detail::postselect(c, options.phase_gate);
        return {scheme, pair, std::move(c), scheme_readout(scheme, options)};
    }
    case SchemeId::Distillation: {
        Circuit c(5, 5, "distillation" + suffix);
        detail::preselect(c);
        detail::bell_pair(c, 3, 4);
        c.barrier(detail::iota(5));
        c.cx(l, 3);
        c.cx(m, 4);
        c.measure(3, 3);
        c.measure(4, 4);
        c.barrier(detail::iota(5));
        detail::postselect(c, options.phase_gate);
        return {scheme, pair, std::move(c), scheme_readout(scheme, options)};
    }
    case SchemeId::CommonTarget: {
        if (!options.feed_forward) {
            Circuit c(6, 4, "common_target" + suffix);
            detail::preselect(c);
            detail::bell_pair(c, 3, 4);
            c.barrier(detail::iota(6));
            c.cx(l, 3);
            c.cx(m, 4);
            c.cx(3, 5);
            c.cx(4, 5);
            c.measure(5, 3);
            c.barrier(detail::iota(6));
            detail::postselect(c, options.phase_gate);
            return {scheme, pair, std::move(c), scheme_readout(scheme, options)};
        }
        Circuit c(8, 8, "common_target_ff" + suffix);
        detail::preselect(c);
        detail::bell_pair(c, 3, 4);
        detail::bell_pair(c, 6, 7);
        c.barrier(detail::iota(8));
        // copy z_l onto 4 and z_m onto 7
        c.cx(l, 3);
        c.measure(3, 4);
        c.c_if(GateKind::X, {4}, 4, 1);
        c.cx(m, 6);
        c.measure(6, 6);
        c.c_if(GateKind::X, {7}, 6, 1);
        c.cx(4, 5);
        c.cx(7, 5);
        // disentangle the copies; X-basis outcome 1 leaves a Z on the source
        c.h(4);
        c.measure(4, 5);
        c.c_if(GateKind::Z, {l}, 5, 1);
        c.h(7);
        c.measure(7, 7);
        c.c_if(GateKind::Z, {m}, 7, 1);
        c.measure(5, 3);
        c.barrier(detail::iota(8));
        detail::postselect(c, options.phase_gate);
        return {scheme, pair, std::move(c), scheme_readout(scheme, options)};
    }
    }
    throw ArgumentError("unknown scheme");
}

struct ParityRow {
    PostLabel label;
    /// Parity bit per pair column; empty when not determined (pair not run, or non-deterministic).
    std::array<std::optional<int>, 3> parity{};
    /// Joint probability of (label, parity bit) per pair column.
    std::array<std::array<double, 2>, 3> joint{};
    /// Probability of the contrary parity value conditional on the label.
    std::array<double, 3> leakage{};
    /// Post-selection probability of the label.
    double probability = 0.0;
};

struct ParityTable {
    SchemeId scheme = SchemeId::DirectParity;
    std::array<ParityRow, 8> rows{};
    std::array<bool, 3> measured{};

    ParityTable() {
        for (std::size_t r = 0; r < rows.size(); ++r)
            rows[r].label = PostLabel::from_row_index(r);
    }
    explicit ParityTable(SchemeId s) : ParityTable() { scheme = s; }

    const ParityRow &row(const PostLabel &label) const { return rows[label.row_index()]; }
};

/// Folds one pair's exact branches into `table`. With `strict`, a parity bit
/// that is not a deterministic function of the label raises ModelViolationError;
/// otherwise it is left undetermined.
inline void accumulate_pair(ParityTable &table, PairProjector pair, const Readout &readout,
                            const std::vector<BranchOutcome> &branches, bool strict = true) {
    const std::size_t col = pair_column(pair);
    std::array<std::array<double, 2>, 8> joint{};
    for (const auto &b : branches) {
        const PostLabel label = PostLabel::from_system_bits(readout.system_bits(b.clbits));
        joint[label.row_index()][readout.parity(b.clbits)] += b.probability;
    }
    table.measured[col] = true;
    for (std::size_t r = 0; r < 8; ++r) {
        ParityRow &row = table.rows[r];
        row.joint[col] = joint[r];
        const double total = joint[r][0] + joint[r][1];
        row.probability = total;
        if (total <= 0.0) {
            row.parity[col].reset();
            row.leakage[col] = 0.0;
            continue;
        }
        const int bit = joint[r][1] > joint[r][0] ? 1 : 0;
        row.leakage[col] = joint[r][1 - bit] / total;
        if (row.leakage[col] < kDeterminismTolerance) {
            row.parity[col] = bit;
        } else {
            row.parity[col].reset();
            if (strict) {
                std::ostringstream os;
                os << "parity W" << pair.name() << " for post-selected " << row.label.str()
                   << " is not deterministic: P(contrary | label) = " << row.leakage[col];
                throw ModelViolationError(os.str());
            }
        }
    }
}

/// Runs the given per-pair circuits exactly and tabulates them.
inline ParityTable tabulate(SchemeId scheme, std::span<const SchemeCircuit> circuits,
                            bool strict = true) {
    ParityTable table(scheme);
    for (const auto &sc : circuits)
        accumulate_pair(table, sc.pair, sc.readout, run_exact(sc.circuit), strict);
    return table;
}

inline ParityTable parity_table(SchemeId scheme, const SchemeOptions &options = {}) {
    std::vector<SchemeCircuit> circuits;
    for (PairProjector pp : kPairs)
        circuits.push_back(build_scheme_circuit(scheme, pp, options));
    return tabulate(scheme, circuits);
}

/// Parity bits (W12, W23, W13) per row as printed in the reference tables;
/// the same for all three schemes.
inline constexpr std::array<std::array<int, 3>, 8> kExpectedParity = {{
    {1, 1, 1}, // +i +i +i
    {1, 0, 0}, // +i +i -i
    {0, 0, 1}, // +i -i +i
    {0, 1, 0}, // +i -i -i
    {0, 1, 0}, // -i +i +i
    {0, 0, 1}, // -i +i -i
    {1, 0, 0}, // -i -i +i
    {1, 1, 1}, // -i -i -i
}};

struct EquivalenceReport {
    bool equal = true;
    std::vector<std::string> discrepancies;
};

/// Element-wise comparison of parity bits and of the joint (label, parity)
/// probabilities against the first table.
inline EquivalenceReport scheme_equivalence_report(std::span<const ParityTable> tables,
                                                   double tolerance = 1e-9) {
    EquivalenceReport rep;
    if (tables.empty())
        return rep;
    const ParityTable &ref = tables.front();
    for (std::size_t t = 1; t < tables.size(); ++t) {
        const ParityTable &other = tables[t];
        for (std::size_t r = 0; r < 8; ++r) {
            const ParityRow &a = ref.rows[r];
            const ParityRow &b = other.rows[r];
            for (std::size_t col = 0; col < 3; ++col) {
                if (!ref.measured[col] || !other.measured[col])
                    continue;
                std::ostringstream os;
                if (a.parity[col] != b.parity[col]) {
                    auto show = [](const std::optional<int> &v) {
                        return v ? std::to_string(*v) : std::string("?");
                    };
                    os << scheme_name(other.scheme) << " row " << a.label.str() << " W"
                       << kPairs[col].name() << ": " << show(b.parity[col]) << " vs "
                       << scheme_name(ref.scheme) << " " << show(a.parity[col]);
                    rep.discrepancies.push_back(os.str());
                    continue;
                }
                for (int bit = 0; bit < 2; ++bit) {
                    const double d = std::abs(a.joint[col][bit] - b.joint[col][bit]);
                    if (d > tolerance) {
                        std::ostringstream ps;
                        ps << scheme_name(other.scheme) << " row " << a.label.str() << " W"
                           << kPairs[col].name() << "=" << bit << ": joint probability "
                           << b.joint[col][bit] << " vs " << a.joint[col][bit];
                        rep.discrepancies.push_back(ps.str());
                    }
                }
            }
        }
    }
    rep.equal = rep.discrepancies.empty();
    return rep;
}

inline EquivalenceReport scheme_equivalence_report(const SchemeOptions &options = {}) {
    std::vector<ParityTable> tables;
    for (SchemeId s : kSchemes)
        tables.push_back(parity_table(s, options));
    return scheme_equivalence_report(tables);
}

/// Single-qubit state that outcome `outcome` of `qubit` post-selects, found by
/// undoing the unconditional single-qubit gates between its measurement and
/// the nearest earlier barrier on it or multi-qubit interaction. Empty if the
/// qubit is never measured.
inline std::optional<std::array<Complex, 2>> effective_postselection(const Circuit &circuit,
                                                                     std::size_t qubit, int outcome) {
    const auto &insts = circuit.instructions();
    std::optional<std::size_t> measured_at;
    for (std::size_t p = insts.size(); p-- > 0;) {
        if (const auto *m = std::get_if<Measure>(&insts[p]); m && m->qubit == qubit) {
            measured_at = p;
            break;
        }
    }
    if (!measured_at)
        return std::nullopt;
    std::size_t pos = *measured_at;

    Statevector v(1);
    if (outcome)
        apply_1q(v, GateKind::X, 0);
    while (pos > 0) {
        --pos;
        const Instruction &inst = insts[pos];
        const auto support = qubit_support(inst);
        if (std::find(support.begin(), support.end(), qubit) == support.end())
            continue;
        if (std::holds_alternative<Barrier>(inst))
            break;
        const auto *g = std::get_if<Gate>(&inst);
        if (!g || g->kind == GateKind::CX)
            break;
        // apply the adjoint
        const Matrix2 u = gate_matrix(g->kind);
        const Matrix2 adj = {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
        apply_matrix_1q(v, adj, 0);
    }
    return std::array<Complex, 2>{v[0], v[1]};
}

/// Which of |+i>, |-i> a single-qubit state is (up to phase), if either.
inline std::optional<PostState> identify_post_state(const std::array<Complex, 2> &amps,
                                                    double tolerance = 1e-12) {
    for (PostState s : {PostState::PlusI, PostState::MinusI}) {
        const auto ref = basis_amplitudes(s == PostState::PlusI ? BasisLabel::PlusI : BasisLabel::MinusI);
        const Complex ov = std::conj(ref[0]) * amps[0] + std::conj(ref[1]) * amps[1];
        if (std::abs(std::norm(ov) - 1.0) < tolerance)
            return s;
    }
    return std::nullopt;
}

/// Rows whose measured system bits do not post-select the state the
/// convention assigns them, described as "row -> actual".
inline std::vector<std::string> postselection_mismatches(const SchemeCircuit &sc) {
    std::vector<std::string> out;
    for (const PostLabel &label : all_labels()) {
        const std::uint64_t bits = label.system_bits();
        std::string actual;
        bool ok = true;
        for (std::size_t k = 0; k < kSystemQubits; ++k) {
            const int outcome = static_cast<int>((bits >> k) & 1U);
            const auto amps = effective_postselection(sc.circuit, k, outcome);
            const auto state = amps ? identify_post_state(*amps) : std::nullopt;
            if (!state) {
                actual += "??";
                ok = false;
                continue;
            }
            actual += *state == PostState::PlusI ? "+i" : "-i";
            ok = ok && *state == label.qubits[k];
        }
        if (!ok)
            out.push_back("system bits " + to_bitstring(bits, kSystemQubits) + " labelled " +
                          label.str() + " post-select " + actual);
    }
    return out;
}

struct FinalStateReport {
    bool pass = true;
    /// Amplitudes of each qubit run through H, phase, H alone.
    std::array<std::array<Complex, 2>, kSystemQubits> qubit_amplitudes{};
    std::array<double, 8> joint_probabilities{};
    double norm = 0.0;
    double max_amplitude_error = 0.0;
    double max_probability_error = 0.0;
};

/// H, phase, H on |000> with no parity measurement. Each qubit must end in
/// ((1+i)/2, (1-i)/2) and the 8 joint outcomes must be uniform.
inline FinalStateReport final_state_check(GateKind phase_gate = GateKind::S, double tolerance = 1e-12) {
    FinalStateReport rep;
    const Complex expected0{0.5, 0.5}, expected1{0.5, -0.5};
    for (std::size_t q = 0; q < kSystemQubits; ++q) {
        Statevector single(1);
        apply_1q(single, GateKind::H, 0);
        apply_1q(single, phase_gate, 0);
        apply_1q(single, GateKind::H, 0);
        rep.qubit_amplitudes[q] = {single[0], single[1]};
        rep.max_amplitude_error = std::max({rep.max_amplitude_error, std::abs(single[0] - expected0),
                                            std::abs(single[1] - expected1)});
    }

    Statevector joint(kSystemQubits);
    for (GateKind g : {GateKind::H, phase_gate, GateKind::H})
        for (std::size_t q = 0; q < kSystemQubits; ++q)
            apply_1q(joint, g, q);
    for (std::size_t j = 0; j < joint.size(); ++j) {
        Complex product{1.0, 0.0};
        for (std::size_t q = 0; q < kSystemQubits; ++q)
            product *= ((j >> q) & 1U) ? expected1 : expected0;
        rep.max_amplitude_error = std::max(rep.max_amplitude_error, std::abs(joint[j] - product));
        rep.joint_probabilities[j] = std::norm(joint[j]);
        rep.max_probability_error =
            std::max(rep.max_probability_error, std::abs(rep.joint_probabilities[j] - 0.125));
    }
    rep.norm = joint.norm_squared();
    rep.pass = rep.max_amplitude_error < tolerance && rep.max_probability_error < tolerance &&
               std::abs(rep.norm - 1.0) < tolerance;
    return rep;
}

struct DecompositionReport {
    Complex plus_i_overlap;  // <+i|+>
    Complex minus_i_overlap; // <-i|+>
    double recomposition_error = 0.0;
    bool pass = true;
};

/// |+> resolved in the |+i>, |-i> basis.
inline DecompositionReport plus_decomposition_check(double tolerance = 1e-12) {
    DecompositionReport rep;
    const Statevector plus = build_product_state({BasisLabel::Plus});
    const Statevector pi = build_product_state({BasisLabel::PlusI});
    const Statevector mi = build_product_state({BasisLabel::MinusI});
    rep.plus_i_overlap = inner_product(pi, plus);
    rep.minus_i_overlap = inner_product(mi, plus);
    for (std::size_t j = 0; j < 2; ++j) {
        const Complex recomposed = rep.plus_i_overlap * pi[j] + rep.minus_i_overlap * mi[j];
        rep.recomposition_error = std::max(rep.recomposition_error, std::abs(recomposed - plus[j]));
    }
    rep.pass = std::abs(rep.plus_i_overlap - Complex{0.5, -0.5}) < tolerance &&
               std::abs(rep.minus_i_overlap - Complex{0.5, 0.5}) < tolerance &&
               rep.recomposition_error < tolerance;
    return rep;
}

} // namespace pigeonsim::qphe

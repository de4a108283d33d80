#pragma once

// Circuit IR with classical bits, mid-circuit measurement and single-bit
// classically conditioned gates, plus the two executors: exact branch
// enumeration and seeded shot sampling.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pigeonsim/error.hpp"
#include "pigeonsim/rng.hpp"
#include "pigeonsim/simcore.hpp"

namespace pigeonsim {

inline constexpr std::size_t kMaxClbits = 64;
inline constexpr std::size_t kMaxExactMeasurements = 20;
/// Branches whose conditional probability falls below this are dropped as rounding dust.
inline constexpr double kBranchPruneThreshold = 1e-12;

struct Gate {
    GateKind kind;
    std::vector<std::size_t> qubits;
    bool operator==(const Gate &) const = default;
};

struct Measure {
    std::size_t qubit;
    std::size_t clbit;
    bool operator==(const Measure &) const = default;
};

/// Single-bit equality test on a classical bit.
struct Condition {
    std::size_t clbit;
    int value;
    bool operator==(const Condition &) const = default;
};

struct ConditionalGate {
    GateKind kind;
    std::vector<std::size_t> qubits;
    Condition condition;
    bool operator==(const ConditionalGate &) const = default;
};

/// Annotation only; has no effect on execution.
struct Barrier {
    std::vector<std::size_t> qubits;
    bool operator==(const Barrier &) const = default;
};

using Instruction = std::variant<Gate, Measure, ConditionalGate, Barrier>;

/// Qubits an instruction touches.
inline std::vector<std::size_t> qubit_support(const Instruction &inst) {
    return std::visit(
        [](const auto &op) -> std::vector<std::size_t> {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, Measure>)
                return {op.qubit};
            else
                return op.qubits;
        },
        inst);
}

/// Classical bits an instruction reads or writes.
inline std::vector<std::size_t> clbit_support(const Instruction &inst) {
    if (const auto *m = std::get_if<Measure>(&inst))
        return {m->clbit};
    if (const auto *c = std::get_if<ConditionalGate>(&inst))
        return {c->condition.clbit};
    return {};
}

class Circuit {
  public:
    Circuit(std::size_t num_qubits, std::size_t num_clbits, std::string name = {})
        : num_qubits_(num_qubits), num_clbits_(num_clbits), name_(std::move(name)) {}

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t num_clbits() const noexcept { return num_clbits_; }
    const std::string &name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    const std::vector<Instruction> &instructions() const noexcept { return instructions_; }

    Circuit &append(Instruction inst) {
        instructions_.push_back(std::move(inst));
        return *this;
    }

    Circuit &gate(GateKind kind, std::vector<std::size_t> qubits) {
        return append(Gate{kind, std::move(qubits)});
    }
    Circuit &h(std::size_t q) { return gate(GateKind::H, {q}); }
    Circuit &s(std::size_t q) { return gate(GateKind::S, {q}); }
    Circuit &sdg(std::size_t q) { return gate(GateKind::SDG, {q}); }
    Circuit &x(std::size_t q) { return gate(GateKind::X, {q}); }
    Circuit &z(std::size_t q) { return gate(GateKind::Z, {q}); }
    Circuit &cx(std::size_t control, std::size_t target) {
        return gate(GateKind::CX, {control, target});
    }
    Circuit &measure(std::size_t qubit, std::size_t clbit) { return append(Measure{qubit, clbit}); }
    Circuit &c_if(GateKind kind, std::vector<std::size_t> qubits, std::size_t clbit, int value) {
        return append(ConditionalGate{kind, std::move(qubits), Condition{clbit, value}});
    }
    Circuit &barrier(std::vector<std::size_t> qubits) { return append(Barrier{std::move(qubits)}); }

    /// Same registers and instruction list; the name is metadata and ignored.
    bool same_structure(const Circuit &other) const {
        return num_qubits_ == other.num_qubits_ && num_clbits_ == other.num_clbits_ &&
               instructions_ == other.instructions_;
    }

    bool operator==(const Circuit &) const = default;

  private:
    std::size_t num_qubits_;
    std::size_t num_clbits_;
    std::string name_;
    std::vector<Instruction> instructions_;
};

struct Diagnostic {
    /// Instruction index, or kWholeCircuit for register-level problems.
    std::size_t position;
    std::string message;

    static constexpr std::size_t kWholeCircuit = static_cast<std::size_t>(-1);
};

inline std::vector<Diagnostic> validate(const Circuit &circuit) {
    std::vector<Diagnostic> out;
    const auto whole = Diagnostic::kWholeCircuit;
    if (circuit.num_qubits() < 1 || circuit.num_qubits() > kMaxQubits)
        out.push_back({whole, "qubit register size " + std::to_string(circuit.num_qubits()) +
                                  " outside [1, " + std::to_string(kMaxQubits) + "]"});
    if (circuit.num_clbits() > kMaxClbits)
        out.push_back({whole, "classical register size " + std::to_string(circuit.num_clbits()) +
                                  " exceeds " + std::to_string(kMaxClbits)});

    std::vector<bool> measured(circuit.num_qubits(), false);
    const auto &insts = circuit.instructions();
    for (std::size_t pos = 0; pos < insts.size(); ++pos) {
        const Instruction &inst = insts[pos];
        auto report = [&](std::string msg) { out.push_back({pos, std::move(msg)}); };

        auto check_gate = [&](GateKind kind, const std::vector<std::size_t> &qubits) {
            if (qubits.size() != arity(kind)) {
                report(std::string(gate_name(kind)) + " expects " + std::to_string(arity(kind)) +
                       " qubit(s), got " + std::to_string(qubits.size()));
                return;
            }
            if (qubits.size() == 2 && qubits[0] == qubits[1])
                report(std::string(gate_name(kind)) + " control and target are both qubit " +
                       std::to_string(qubits[0]));
        };

        if (const auto *g = std::get_if<Gate>(&inst))
            check_gate(g->kind, g->qubits);
        if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
            check_gate(c->kind, c->qubits);
            if (c->condition.clbit >= circuit.num_clbits())
                report("condition reads clbit " + std::to_string(c->condition.clbit) +
                       " beyond register of size " + std::to_string(circuit.num_clbits()));
            if (c->condition.value != 0 && c->condition.value != 1)
                report("condition value " + std::to_string(c->condition.value) + " is not a bit");
        }
        if (const auto *m = std::get_if<Measure>(&inst)) {
            if (m->clbit >= circuit.num_clbits())
                report("measure writes clbit " + std::to_string(m->clbit) +
                       " beyond register of size " + std::to_string(circuit.num_clbits()));
        }

        const bool is_barrier = std::holds_alternative<Barrier>(inst);
        if (is_barrier && std::get<Barrier>(inst).qubits.empty())
            report("barrier names no qubits");
        for (std::size_t q : qubit_support(inst)) {
            if (q >= circuit.num_qubits()) {
                report("qubit " + std::to_string(q) + " beyond register of size " +
                       std::to_string(circuit.num_qubits()));
                continue;
            }
            if (measured[q] && !is_barrier)
                report("qubit " + std::to_string(q) + " used after its measurement");
        }
        if (const auto *m = std::get_if<Measure>(&inst); m && m->qubit < measured.size())
            measured[m->qubit] = true;
    }
    return out;
}

inline std::string format_diagnostics(const std::vector<Diagnostic> &diags) {
    std::ostringstream os;
    for (const auto &d : diags) {
        if (d.position == Diagnostic::kWholeCircuit)
            os << "circuit: ";
        else
            os << "instruction " << d.position << ": ";
        os << d.message << '\n';
    }
    return os.str();
}

namespace detail {

inline void require_valid(const Circuit &circuit) {
    const auto diags = validate(circuit);
    if (!diags.empty())
        throw InvalidInstructionError("invalid circuit '" + circuit.name() + "':\n" +
                                      format_diagnostics(diags));
}

inline void apply_gate(Statevector &state, GateKind kind, const std::vector<std::size_t> &qubits) {
    if (kind == GateKind::CX)
        apply_cx(state, qubits[0], qubits[1]);
    else
        apply_1q(state, kind, qubits[0]);
}

inline bool condition_holds(const Condition &c, std::uint64_t clbits) {
    return static_cast<int>((clbits >> c.clbit) & 1U) == c.value;
}

/// Runs every instruction in [pc, end) that is not a measurement, stopping at
/// the first Measure. Returns its index (or end).
inline std::size_t run_until_measure(const std::vector<Instruction> &insts, std::size_t pc,
                                     Statevector &state, std::uint64_t clbits) {
    for (; pc < insts.size(); ++pc) {
        const Instruction &inst = insts[pc];
        if (std::holds_alternative<Measure>(inst))
            return pc;
        if (const auto *g = std::get_if<Gate>(&inst))
            apply_gate(state, g->kind, g->qubits);
        else if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
            if (condition_holds(c->condition, clbits))
                apply_gate(state, c->kind, c->qubits);
        }
    }
    return pc;
}

inline std::uint64_t write_bit(std::uint64_t clbits, std::size_t clbit, int value) {
    const std::uint64_t mask = std::uint64_t{1} << clbit;
    return value ? (clbits | mask) : (clbits & ~mask);
}

} // namespace detail

struct BranchOutcome {
    std::uint64_t clbits;
    std::size_t num_clbits;
    double probability;
    Statevector final_state;

    std::string bitstring() const { return to_bitstring(clbits, num_clbits); }
    int bit(std::size_t clbit) const { return static_cast<int>((clbits >> clbit) & 1U); }
};

/// Follows every measurement outcome depth-first (outcome 0 before 1) and
/// returns one record per surviving branch, carrying its exact probability and
/// normalized final state.
inline std::vector<BranchOutcome> run_exact(const Circuit &circuit,
                                            std::optional<Statevector> initial = std::nullopt) {
    detail::require_valid(circuit);
    const auto &insts = circuit.instructions();
    const auto num_measures = static_cast<std::size_t>(std::count_if(
        insts.begin(), insts.end(), [](const Instruction &i) { return std::holds_alternative<Measure>(i); }));
    if (num_measures > kMaxExactMeasurements)
        throw CapacityError("exact execution of " + std::to_string(num_measures) +
                            " measurements exceeds 2^" + std::to_string(kMaxExactMeasurements) +
                            " branches");
    Statevector start = initial ? std::move(*initial) : Statevector(circuit.num_qubits());
    if (start.num_qubits() != circuit.num_qubits())
        throw ShapeError("initial state has " + std::to_string(start.num_qubits()) +
                         " qubits, circuit has " + std::to_string(circuit.num_qubits()));

    struct Frame {
        std::size_t pc;
        Statevector state;
        std::uint64_t clbits;
        double probability;
    };
    std::vector<BranchOutcome> out;
    std::vector<Frame> stack;
    stack.push_back({0, std::move(start), 0, 1.0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        f.pc = detail::run_until_measure(insts, f.pc, f.state, f.clbits);
        if (f.pc == insts.size()) {
            out.push_back({f.clbits, circuit.num_clbits(), f.probability, std::move(f.state)});
            continue;
        }
        const auto &m = std::get<Measure>(insts[f.pc]);
        const double p1 = probability_of(f.state, m.qubit, 1);
        const double p0 = 1.0 - p1;
        // push 1 first so that the 0 branch is explored first
        for (int outcome : {1, 0}) {
            const double p = outcome ? p1 : p0;
            if (p < kBranchPruneThreshold)
                continue;
            Frame child{f.pc + 1, f.state, detail::write_bit(f.clbits, m.clbit, outcome),
                        f.probability * p};
            project(child.state, m.qubit, outcome);
            renormalize(child.state);
            stack.push_back(std::move(child));
        }
    }
    return out;
}

/// Probability per classical bitstring, merging branches that share one.
inline std::map<std::string, double> exact_distribution(const std::vector<BranchOutcome> &branches) {
    std::map<std::string, double> dist;
    for (const auto &b : branches)
        dist[b.bitstring()] += b.probability;
    return dist;
}

struct ShotCounts {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total_shots = 0;
    std::uint64_t seed = 0;

    bool operator==(const ShotCounts &) const = default;
};

/// Samples `shots` independent executions. Shot k draws from
/// SplitMix64::for_shot(seed, k), so the result does not depend on `threads`.
inline ShotCounts run_shots(const Circuit &circuit, std::uint64_t shots, std::uint64_t seed,
                            unsigned threads = 1) {
    if (shots == 0)
        throw ArgumentError("shots must be positive");
    detail::require_valid(circuit);
    const auto &insts = circuit.instructions();

    // The unitary prefix before the first measurement is shared by every shot.
    Statevector prefix(circuit.num_qubits());
    const std::size_t first_measure = detail::run_until_measure(insts, 0, prefix, 0);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        std::map<std::uint64_t, std::uint64_t> local;
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            SplitMix64 rng = SplitMix64::for_shot(seed, shot);
            Statevector state = prefix;
            std::uint64_t clbits = 0;
            std::size_t pc = first_measure;
            while (pc < insts.size()) {
                const auto &m = std::get<Measure>(insts[pc]);
                double p1 = probability_of(state, m.qubit, 1);
                if (p1 < kBranchPruneThreshold)
                    p1 = 0.0;
                else if (p1 > 1.0 - kBranchPruneThreshold)
                    p1 = 1.0;
                const int outcome = rng.uniform() < p1 ? 1 : 0;
                project(state, m.qubit, outcome);
                renormalize(state);
                clbits = detail::write_bit(clbits, m.clbit, outcome);
                pc = detail::run_until_measure(insts, pc + 1, state, clbits);
            }
            ++local[clbits];
        }
        return local;
    };

    threads = std::max(1U, threads);
    std::vector<std::map<std::uint64_t, std::uint64_t>> partial(threads);
    if (threads == 1) {
        partial[0] = run_range(0, shots);
    } else {
        std::vector<std::thread> workers;
        const std::uint64_t chunk = (shots + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t b = std::min<std::uint64_t>(shots, t * chunk);
            const std::uint64_t e = std::min<std::uint64_t>(shots, b + chunk);
            workers.emplace_back([&, t, b, e] { partial[t] = run_range(b, e); });
        }
        for (auto &w : workers)
            w.join();
    }

    ShotCounts result;
    result.total_shots = shots;
    result.seed = seed;
    for (const auto &p : partial)
        for (const auto &[bits, n] : p)
            result.counts[to_bitstring(bits, circuit.num_clbits())] += n;
    return result;
}

} // namespace pigeonsim

#pragma once

// Dense statevector kernels.
//
// Bit ordering: qubit k is bit k of the amplitude index (qubit 0 is the
// least-significant bit). Printed bitstrings put the highest qubit first.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pigeonsim/error.hpp"

namespace pigeonsim {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 24;

/// Below this squared norm a projection is treated as landing on an empty branch.
inline constexpr double kImpossibleProbability = 1e-15;

enum class GateKind { H, S, SDG, X, Z, CX };

inline constexpr std::array<GateKind, 6> kAllGateKinds = {GateKind::H, GateKind::S, GateKind::SDG,
                                                          GateKind::X, GateKind::Z, GateKind::CX};

inline constexpr std::size_t arity(GateKind kind) { return kind == GateKind::CX ? 2 : 1; }

inline std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::SDG: return "sdg";
    case GateKind::X: return "x";
    case GateKind::Z: return "z";
    case GateKind::CX: return "cx";
    }
    return "?";
}

/// Row-major 2x2 matrix.
using Matrix2 = std::array<Complex, 4>;
/// Row-major 4x4 matrix on |control target>, control the high bit.
using Matrix4 = std::array<Complex, 16>;

inline Matrix2 gate_matrix(GateKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    constexpr Complex i{0.0, 1.0};
    switch (kind) {
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1.0, 0.0, 0.0, i};
    case GateKind::SDG: return {1.0, 0.0, 0.0, -i};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::CX: break;
    }
    throw InvalidInstructionError("gate_matrix: cx is a two-qubit gate");
}

inline Matrix4 cx_matrix() {
    Matrix4 m{};
    m[0 * 4 + 0] = 1.0;
    m[1 * 4 + 1] = 1.0;
    m[2 * 4 + 3] = 1.0;
    m[3 * 4 + 2] = 1.0;
    return m;
}

class Statevector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit Statevector(std::size_t num_qubits) : num_qubits_(checked_count(num_qubits)) {
        amps_.assign(std::size_t{1} << num_qubits_, Complex{});
        amps_[0] = 1.0;
    }

    /// Adopts explicit amplitudes; the length must be a power of two.
    explicit Statevector(std::vector<Complex> amps) : amps_(std::move(amps)) {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < amps_.size())
            ++n;
        if (amps_.empty() || (std::size_t{1} << n) != amps_.size())
            throw ShapeError("statevector length " + std::to_string(amps_.size()) +
                             " is not a power of two");
        num_qubits_ = checked_count(n);
    }

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }

    Complex operator[](std::size_t index) const { return amps_[index]; }
    Complex &operator[](std::size_t index) { return amps_[index]; }

    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }

    double norm_squared() const noexcept {
        double s = 0.0;
        for (const Complex &a : amps_)
            s += std::norm(a);
        return s;
    }

    bool operator==(const Statevector &) const = default;

  private:
    static std::size_t checked_count(std::size_t n) {
        if (n < 1 || n > kMaxQubits)
            throw CapacityError("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
        return n;
    }

    std::size_t num_qubits_ = 0;
    std::vector<Complex> amps_;
};

inline Statevector zero_state(std::size_t num_qubits) { return Statevector(num_qubits); }

namespace detail {
inline void check_qubit(const Statevector &state, std::size_t qubit) {
    if (qubit >= state.num_qubits())
        throw IndexError("qubit " + std::to_string(qubit) + " out of range for " +
                         std::to_string(state.num_qubits()) + "-qubit state");
}
} // namespace detail

inline void apply_matrix_1q(Statevector &state, const Matrix2 &m, std::size_t target) {
    detail::check_qubit(state, target);
    const std::size_t stride = std::size_t{1} << target;
    auto amps = state.amplitudes();
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            const Complex a0 = amps[j];
            const Complex a1 = amps[j + stride];
            amps[j] = m[0] * a0 + m[1] * a1;
            amps[j + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

inline void apply_1q(Statevector &state, GateKind kind, std::size_t target) {
    if (arity(kind) != 1)
        throw InvalidInstructionError("apply_1q: " + std::string(gate_name(kind)) +
                                      " is not a single-qubit gate");
    apply_matrix_1q(state, gate_matrix(kind), target);
}

inline void apply_cx(Statevector &state, std::size_t control, std::size_t target) {
    detail::check_qubit(state, control);
    detail::check_qubit(state, target);
    if (control == target)
        throw InvalidInstructionError("cx: control and target are both qubit " +
                                      std::to_string(control));
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    auto amps = state.amplitudes();
    for (std::size_t j = 0; j < amps.size(); ++j) {
        // visit each swapped pair once, from its target-clear member
        if ((j & cmask) && !(j & tmask))
            std::swap(amps[j], amps[j | tmask]);
    }
}

/// <a|b>
inline Complex inner_product(const Statevector &a, const Statevector &b) {
    if (a.num_qubits() != b.num_qubits())
        throw ShapeError("inner_product: " + std::to_string(a.num_qubits()) + " vs " +
                         std::to_string(b.num_qubits()) + " qubits");
    Complex s{};
    for (std::size_t j = 0; j < a.size(); ++j)
        s += std::conj(a[j]) * b[j];
    return s;
}

inline double probability_of(const Statevector &state, std::size_t qubit, int outcome) {
    detail::check_qubit(state, qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const bool want = outcome != 0;
    double p = 0.0;
    for (std::size_t j = 0; j < state.size(); ++j)
        if (((j & mask) != 0) == want)
            p += std::norm(state[j]);
    return p;
}

/// Zeroes every amplitude inconsistent with `qubit == outcome` in place and
/// returns the probability of that outcome. The state is left unnormalized.
inline double project(Statevector &state, std::size_t qubit, int outcome) {
    detail::check_qubit(state, qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    const bool want = outcome != 0;
    double p = 0.0;
    for (std::size_t j = 0; j < state.size(); ++j) {
        if (((j & mask) != 0) == want)
            p += std::norm(state[j]);
    }
    if (p < kImpossibleProbability)
        throw ImpossiblePostselectionError("post-selecting qubit " + std::to_string(qubit) +
                                           " = " + std::to_string(want ? 1 : 0) +
                                           " has probability " + std::to_string(p));
    for (std::size_t j = 0; j < state.size(); ++j)
        if (((j & mask) != 0) != want)
            state[j] = 0.0;
    return p;
}

inline void renormalize(Statevector &state) {
    const double n2 = state.norm_squared();
    if (n2 < kImpossibleProbability)
        throw ImpossiblePostselectionError("cannot renormalize a state of squared norm " +
                                           std::to_string(n2));
    const double scale = 1.0 / std::sqrt(n2);
    for (Complex &a : state.amplitudes())
        a *= scale;
}

enum class BasisLabel { Plus, Minus, PlusI, MinusI, Zero, One };

/// Single-qubit reference state as (amp|0>, amp|1>).
inline std::array<Complex, 2> basis_amplitudes(BasisLabel label) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (label) {
    case BasisLabel::Plus: return {Complex{r, 0.0}, Complex{r, 0.0}};
    case BasisLabel::Minus: return {Complex{r, 0.0}, Complex{-r, 0.0}};
    case BasisLabel::PlusI: return {Complex{r, 0.0}, Complex{0.0, r}};
    case BasisLabel::MinusI: return {Complex{r, 0.0}, Complex{0.0, -r}};
    case BasisLabel::Zero: return {Complex{1.0, 0.0}, Complex{}};
    case BasisLabel::One: return {Complex{}, Complex{1.0, 0.0}};
    }
    return {};
}

/// Tensor product; labels[k] is the state of qubit k.
inline Statevector build_product_state(std::span<const BasisLabel> labels) {
    if (labels.empty() || labels.size() > kMaxQubits)
        throw CapacityError("product state needs 1.." + std::to_string(kMaxQubits) + " labels, got " +
                            std::to_string(labels.size()));
    std::vector<Complex> amps(std::size_t{1} << labels.size(), Complex{1.0, 0.0});
    for (std::size_t q = 0; q < labels.size(); ++q) {
        const auto single = basis_amplitudes(labels[q]);
        for (std::size_t j = 0; j < amps.size(); ++j)
            amps[j] *= single[(j >> q) & 1U];
    }
    return Statevector(std::move(amps));
}

inline Statevector build_product_state(std::initializer_list<BasisLabel> labels) {
    return build_product_state(std::span<const BasisLabel>(labels.begin(), labels.size()));
}

/// Basis index rendered over `width` bits, highest bit first.
inline std::string to_bitstring(std::uint64_t value, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t k = 0; k < width; ++k)
        if ((value >> k) & 1U)
            s[width - 1 - k] = '1';
    return s;
}

} // namespace pigeonsim

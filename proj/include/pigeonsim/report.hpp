#pragma once

// JSON documents and aligned-text tables for run results and parity tables.

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pigeonsim/circuit.hpp"
#include "pigeonsim/qphe.hpp"

namespace pigeonsim {

using json = nlohmann::ordered_json;

inline std::uint64_t parse_bitstring(const std::string &bits) {
    std::uint64_t v = 0;
    for (char c : bits)
        v = (v << 1) | (c == '1' ? 1U : 0U);
    return v;
}

/// { "circuit", "mode": "exact", "branches": [{clbits, prob}], "counts": {}, "shots": 0, "seed": 0 }
inline json exact_result_json(const Circuit &circuit, const std::vector<BranchOutcome> &branches) {
    json branch_list = json::array();
    for (const auto &b : branches)
        branch_list.push_back({{"clbits", b.bitstring()}, {"prob", b.probability}});
    return {{"circuit", circuit.name()}, {"mode", "exact"},   {"branches", branch_list},
            {"counts", json::object()},  {"shots", 0},        {"seed", 0}};
}

inline json shots_result_json(const Circuit &circuit, const ShotCounts &counts) {
    json c = json::object();
    for (const auto &[bits, n] : counts.counts)
        c[bits] = n;
    return {{"circuit", circuit.name()}, {"mode", "shots"},           {"branches", json::array()},
            {"counts", c},               {"shots", counts.total_shots}, {"seed", counts.seed}};
}

namespace qphe {

inline json parity_table_json(const ParityTable &table) {
    static const std::array<const char *, 3> keys = {"w12", "w23", "w13"};
    json rows = json::array();
    for (const auto &row : table.rows) {
        json r = {{"label", row.label.str()}};
        for (std::size_t col = 0; col < 3; ++col)
            r[keys[col]] = (table.measured[col] && row.parity[col]) ? json(*row.parity[col]) : json(nullptr);
        r["prob"] = row.probability;
        rows.push_back(std::move(r));
    }
    return {{"scheme", scheme_name(table.scheme)}, {"rows", rows}};
}

/// Shot tallies split by post-selected label and parity bit.
struct ShotTable {
    SchemeId scheme = SchemeId::DirectParity;
    std::array<std::array<std::array<std::uint64_t, 2>, 3>, 8> counts{};
    std::array<bool, 3> measured{};

    /// Frequency of parity 1 given the label; empty when the label never occurred.
    std::optional<double> frequency(std::size_t row, std::size_t col) const {
        const auto &c = counts[row][col];
        const std::uint64_t n = c[0] + c[1];
        if (!measured[col] || n == 0)
            return std::nullopt;
        return static_cast<double>(c[1]) / static_cast<double>(n);
    }

    std::uint64_t label_shots(std::size_t row, std::size_t col) const {
        return counts[row][col][0] + counts[row][col][1];
    }
};

inline void accumulate_shots(ShotTable &table, PairProjector pair, const Readout &readout,
                             const ShotCounts &shots) {
    const std::size_t col = pair_column(pair);
    table.measured[col] = true;
    for (const auto &[bits, n] : shots.counts) {
        const std::uint64_t clbits = parse_bitstring(bits);
        const PostLabel label = PostLabel::from_system_bits(readout.system_bits(clbits));
        table.counts[label.row_index()][col][readout.parity(clbits)] += n;
    }
}

inline json shot_table_json(const ShotTable &table) {
    static const std::array<const char *, 3> keys = {"p12", "p23", "p13"};
    json rows = json::array();
    for (std::size_t r = 0; r < 8; ++r) {
        json row = {{"label", PostLabel::from_row_index(r).str()}};
        std::uint64_t n = 0;
        for (std::size_t col = 0; col < 3; ++col) {
            const auto f = table.frequency(r, col);
            row[keys[col]] = f ? json(*f) : json(nullptr);
            if (table.measured[col] && n == 0)
                n = table.label_shots(r, col);
        }
        row["shots"] = n;
        rows.push_back(std::move(row));
    }
    return {{"scheme", scheme_name(table.scheme)}, {"rows", rows}};
}

namespace detail {
inline std::string pretty_label(const PostLabel &label) {
    std::string s = "|";
    for (std::size_t k = 0; k < kSystemQubits; ++k) {
        if (k)
            s += ' ';
        s += label.qubits[k] == PostState::PlusI ? "+i" : "-i";
    }
    return s + ">";
}

inline std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string pad_left(const std::string &s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}
} // namespace detail

/// Rows of post-selected states against W12, W23, W13, then the label's probability.
inline void print_parity_table(std::ostream &os, const ParityTable &table) {
    os << "scheme: " << scheme_name(table.scheme) << '\n';
    os << "post-selected     W12  W23  W13    prob\n";
    for (const auto &row : table.rows) {
        os << detail::pretty_label(row.label) << "      ";
        for (std::size_t col = 0; col < 3; ++col) {
            std::string cell = "-";
            if (table.measured[col])
                cell = row.parity[col] ? std::to_string(*row.parity[col]) : "?";
            os << detail::pad_left(cell, 4) << ' ';
        }
        os << detail::pad_left(detail::fixed(row.probability, 4), 7) << '\n';
    }
}

/// Same layout with the observed frequency of parity 1 in each cell.
inline void print_shot_table(std::ostream &os, const ShotTable &table) {
    os << "scheme: " << scheme_name(table.scheme) << " (frequency of parity 1)\n";
    os << "post-selected       W12    W23    W13   shots\n";
    for (std::size_t r = 0; r < 8; ++r) {
        os << detail::pretty_label(PostLabel::from_row_index(r)) << "     ";
        std::uint64_t n = 0;
        for (std::size_t col = 0; col < 3; ++col) {
            const auto f = table.frequency(r, col);
            os << detail::pad_left(f ? detail::fixed(*f, 3) : std::string("-"), 6) << ' ';
            if (table.measured[col] && n == 0)
                n = table.label_shots(r, col);
        }
        os << detail::pad_left(std::to_string(n), 7) << '\n';
    }
}

} // namespace qphe
} // namespace pigeonsim

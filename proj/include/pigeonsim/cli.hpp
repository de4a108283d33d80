#pragma once

// Command implementations behind the `pigeonsim` executable. Each returns the
// process exit code: 0 success, 1 analysis or I/O failure, 2 usage error.
// Reports go to `out`, diagnostics to `err`.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pigeonsim/circuit.hpp"
#include "pigeonsim/error.hpp"
#include "pigeonsim/qasm.hpp"
#include "pigeonsim/qphe.hpp"
#include "pigeonsim/report.hpp"

namespace pigeonsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultShots = 8192;

enum class Mode { Exact, Shots };
enum class Output { Json, Table };

struct RunConfig {
    qphe::SchemeId scheme = qphe::SchemeId::DirectParity;
    /// Empty means all three pairs.
    std::optional<qphe::PairProjector> pair;
    Mode mode = Mode::Exact;
    std::uint64_t shots = kDefaultShots;
    std::uint64_t seed = 0;
    Output output = Output::Table;
    std::optional<std::string> out_path;
    /// Run this QASM file instead of the built-in circuit; needs a single pair.
    std::optional<std::string> from_qasm;
    qphe::SchemeOptions options;
    unsigned threads = 1;
};

/// Seed used when none is given on the command line: $PIGEONSIM_SEED or 0.
inline std::uint64_t default_seed() {
    const char *env = std::getenv("PIGEONSIM_SEED");
    if (!env || !*env)
        return 0;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used, 0);
        if (used == std::string(env).size())
            return v;
    } catch (const std::exception &) {
    }
    throw ArgumentError(std::string("PIGEONSIM_SEED is not an unsigned integer: '") + env + "'");
}

namespace detail {

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool write_file(const std::string &path, const std::string &text, std::ostream &err) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (file)
        file << text;
    if (!file) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

inline int emit(const RunConfig &cfg, const std::string &text, std::ostream &out, std::ostream &err) {
    if (cfg.out_path)
        return write_file(*cfg.out_path, text, err) ? kExitOk : kExitFailure;
    out << text;
    return kExitOk;
}

} // namespace detail

inline int cmd_run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    if (cfg.mode == Mode::Shots && cfg.shots == 0) {
        err << "error: --shots must be at least 1\n";
        return kExitUsage;
    }
    if (cfg.from_qasm && !cfg.pair) {
        err << "error: --from-qasm needs a single --pair (12, 23 or 13)\n";
        return kExitUsage;
    }

    std::vector<qphe::SchemeCircuit> circuits;
    try {
        if (cfg.from_qasm) {
            const std::string stem = std::filesystem::path(*cfg.from_qasm).stem().string();
            circuits.push_back({cfg.scheme, *cfg.pair,
                                parse_qasm(detail::read_file(*cfg.from_qasm), stem),
                                qphe::scheme_readout(cfg.scheme, cfg.options)});
        } else if (cfg.pair) {
            circuits.push_back(qphe::build_scheme_circuit(cfg.scheme, *cfg.pair, cfg.options));
        } else {
            for (auto pp : qphe::kPairs)
                circuits.push_back(qphe::build_scheme_circuit(cfg.scheme, pp, cfg.options));
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }

    const std::string pair_name = cfg.pair ? cfg.pair->name() : "all";
    json doc = {{"scheme", qphe::scheme_name(cfg.scheme)},
                {"pair", pair_name},
                {"mode", cfg.mode == Mode::Exact ? "exact" : "shots"},
                {"results", json::array()}};
    std::ostringstream text;
    try {
        if (cfg.mode == Mode::Exact) {
            qphe::ParityTable table(cfg.scheme);
            for (const auto &sc : circuits) {
                const auto branches = run_exact(sc.circuit);
                qphe::accumulate_pair(table, sc.pair, sc.readout, branches);
                doc["results"].push_back(exact_result_json(sc.circuit, branches));
            }
            doc["table"] = qphe::parity_table_json(table);
            if (cfg.output == Output::Table)
                qphe::print_parity_table(text, table);
        } else {
            qphe::ShotTable table;
            table.scheme = cfg.scheme;
            for (const auto &sc : circuits) {
                const auto counts = run_shots(sc.circuit, cfg.shots, cfg.seed, cfg.threads);
                qphe::accumulate_shots(table, sc.pair, sc.readout, counts);
                doc["results"].push_back(shots_result_json(sc.circuit, counts));
            }
            doc["table"] = qphe::shot_table_json(table);
            if (cfg.output == Output::Table) {
                text << "shots: " << cfg.shots << ", seed: " << cfg.seed << '\n';
                qphe::print_shot_table(text, table);
            }
        }
    } catch (const ModelViolationError &e) {
        err << "model violation: " << e.what() << '\n';
        return kExitFailure;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    if (cfg.output == Output::Json)
        text << doc.dump(2) << '\n';
    return detail::emit(cfg, text.str(), out, err);
}

struct VerifyConfig {
    bool json = false;
    qphe::SchemeOptions options;
};

struct Assertion {
    std::string name;
    bool pass = true;
    std::vector<std::string> details;
};

/// Every check `verify` performs, in report order.
inline std::vector<Assertion> verify_assertions(const qphe::SchemeOptions &options) {
    using namespace qphe;
    std::vector<Assertion> out;
    std::vector<ParityTable> tables;

    for (SchemeId scheme : kSchemes) {
        std::vector<SchemeCircuit> circuits;
        for (auto pp : kPairs)
            circuits.push_back(build_scheme_circuit(scheme, pp, options));

        Assertion table_check{"table_" + std::string(scheme_name(scheme)), true, {}};
        ParityTable table = tabulate(scheme, circuits, /*strict=*/false);
        for (std::size_t r = 0; r < 8; ++r) {
            const ParityRow &row = table.rows[r];
            for (std::size_t col = 0; col < 3; ++col) {
                const int want = kExpectedParity[r][col];
                std::ostringstream os;
                if (!row.parity[col]) {
                    os << "row " << row.label.str() << " W" << kPairs[col].name()
                       << ": not deterministic (contrary probability " << row.leakage[col] << ")";
                } else if (*row.parity[col] != want) {
                    os << "row " << row.label.str() << " W" << kPairs[col].name() << ": got "
                       << *row.parity[col] << ", expected " << want;
                } else {
                    continue;
                }
                table_check.pass = false;
                table_check.details.push_back(os.str());
            }
        }
        out.push_back(std::move(table_check));

        Assertion basis_check{"postselection_" + std::string(scheme_name(scheme)), true, {}};
        std::set<std::string> seen;
        for (const auto &sc : circuits)
            for (auto &line : postselection_mismatches(sc))
                if (seen.insert(line).second)
                    basis_check.details.push_back(line);
        basis_check.pass = basis_check.details.empty();
        out.push_back(std::move(basis_check));

        tables.push_back(std::move(table));
    }

    Assertion ortho{"orthogonality", true, {}};
    for (auto pp : kPairs) {
        for (const PostLabel &label : {PostLabel::from_row_index(0), PostLabel::from_row_index(7)}) {
            const double mag = std::abs(qphe_overlap(pp, label));
            if (mag >= 1e-12) {
                ortho.pass = false;
                std::ostringstream os;
                os << "|<" << label.str() << "|Pi" << pp.name() << "|+++>| = " << mag;
                ortho.details.push_back(os.str());
            }
        }
    }
    out.push_back(std::move(ortho));

    Assertion final{"final_state", true, {}};
    const auto fs = final_state_check(options.phase_gate);
    final.pass = fs.pass;
    if (!fs.pass) {
        std::ostringstream os;
        os << "qubit amplitudes (" << fs.qubit_amplitudes[0][0] << ", " << fs.qubit_amplitudes[0][1]
           << "), expected ((0.5,0.5), (0.5,-0.5)); max amplitude error " << fs.max_amplitude_error;
        final.details.push_back(os.str());
    }
    out.push_back(std::move(final));

    Assertion decomp{"plus_decomposition", true, {}};
    const auto pd = plus_decomposition_check();
    decomp.pass = pd.pass;
    if (!pd.pass) {
        std::ostringstream os;
        os << "<+i|+> = " << pd.plus_i_overlap << ", <-i|+> = " << pd.minus_i_overlap;
        decomp.details.push_back(os.str());
    }
    out.push_back(std::move(decomp));

    Assertion equiv{"scheme_equivalence", true, {}};
    const auto rep = scheme_equivalence_report(tables);
    equiv.pass = rep.equal;
    equiv.details = rep.discrepancies;
    out.push_back(std::move(equiv));
    return out;
}

inline int cmd_verify(const VerifyConfig &cfg, std::ostream &out, std::ostream &err) {
    std::vector<Assertion> results;
    try {
        results = verify_assertions(cfg.options);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    std::size_t passed = 0;
    for (const auto &a : results)
        passed += a.pass ? 1 : 0;
    const bool ok = passed == results.size();

    if (cfg.json) {
        json doc = {{"pass", ok}, {"assertions", json::array()}};
        for (const auto &a : results)
            doc["assertions"].push_back({{"name", a.name}, {"pass", a.pass}, {"details", a.details}});
        out << doc.dump(2) << '\n';
    } else {
        for (const auto &a : results) {
            out << (a.pass ? "PASS " : "FAIL ") << a.name << '\n';
            for (const auto &d : a.details)
                out << "    " << d << '\n';
        }
        out << "verify: " << passed << "/" << results.size() << " assertions passed\n";
    }
    return ok ? kExitOk : kExitFailure;
}

inline int cmd_export(qphe::SchemeId scheme, qphe::PairProjector pair, const std::string &out_path,
                      const qphe::SchemeOptions &options, std::ostream &err) {
    const auto sc = qphe::build_scheme_circuit(scheme, pair, options);
    return detail::write_file(out_path, export_qasm(sc.circuit), err) ? kExitOk : kExitFailure;
}

} // namespace pigeonsim::cli

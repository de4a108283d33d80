// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pigeonsim/cli.hpp"
#include "test_support.hpp"

using namespace pigeonsim;
using namespace pigeonsim::qphe;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string &why) {
        if (pass)
            detail = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome table_reproduction() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream out, err;
    const int rc = cli::cmd_verify({}, out, err);
    const auto assertions = cli::verify_assertions({});
    std::size_t bits = 0;
    for (SchemeId scheme : kSchemes) {
        const auto table = parity_table(scheme);
        for (std::size_t r = 0; r < 8; ++r)
            for (std::size_t col = 0; col < 3; ++col) {
                const auto &row = table.rows[r];
                if (row.parity[col] == kExpectedParity[r][col] && row.leakage[col] < 1e-9)
                    ++bits;
            }
    }
    const double elapsed = seconds_since(t0);
    for (const auto &a : assertions)
        if (a.name.rfind("table_", 0) == 0 && !a.pass)
            o.fail(a.name + ": " + (a.details.empty() ? "" : a.details.front()));
    if (rc != cli::kExitOk)
        o.fail("verify exited " + std::to_string(rc));
    if (bits != 72)
        o.fail(std::to_string(bits) + "/72 parity bits reproduced");
    if (elapsed >= 1.0)
        o.fail("took " + std::to_string(elapsed) + " s");
    if (o.pass)
        o.detail = "72/72 bits, " + std::to_string(elapsed) + " s";
    return o;
}

Outcome orthogonality() {
    Outcome o;
    std::size_t ok = 0;
    for (auto pp : kPairs)
        for (std::size_t r : {0U, 7U}) {
            const double mag = std::abs(qphe_overlap(pp, PostLabel::from_row_index(r)));
            if (mag < 1e-12)
                ++ok;
            else
                o.fail("|<" + PostLabel::from_row_index(r).str() + "|Pi" + pp.name() + "|+++>| = " +
                       std::to_string(mag));
        }
    if (o.pass)
        o.detail = std::to_string(ok) + "/6 overlaps below 1e-12";
    return o;
}

Outcome final_state_amplitudes() {
    Outcome o;
    const auto rep = final_state_check(GateKind::S, 1e-12);
    if (!rep.pass)
        o.fail("max amplitude error " + std::to_string(rep.max_amplitude_error) + ", max probability error " +
               std::to_string(rep.max_probability_error));
    else
        o.detail = "3 qubits and 8 joint outcomes within 1e-12";
    return o;
}

Outcome decomposition() {
    Outcome o;
    const auto rep = plus_decomposition_check(1e-12);
    if (!rep.pass) {
        std::ostringstream os;
        os << "<+i|+> = " << rep.plus_i_overlap << ", <-i|+> = " << rep.minus_i_overlap;
        o.fail(os.str());
    } else {
        o.detail = "both overlaps within 1e-12";
    }
    return o;
}

Outcome scheme_equivalence() {
    Outcome o;
    std::vector<ParityTable> tables;
    for (SchemeId s : kSchemes)
        tables.push_back(parity_table(s));
    // pairwise, not only against the first table
    for (std::size_t a = 0; a < tables.size(); ++a)
        for (std::size_t b = a + 1; b < tables.size(); ++b) {
            const std::array<ParityTable, 2> pair = {tables[a], tables[b]};
            const auto rep = scheme_equivalence_report(pair, 1e-9);
            if (!rep.equal)
                o.fail(rep.discrepancies.front());
        }
    if (o.pass)
        o.detail = "3 scheme pairs agree on 8x3x2 joint entries within 1e-9";
    return o;
}

Outcome sampling_consistency() {
    Outcome o;
    constexpr std::uint64_t kShots = 65536;
    constexpr std::uint64_t kSeed = 20240917;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (SchemeId scheme : kSchemes) {
        const auto exact = parity_table(scheme);
        for (auto pp : kPairs) {
            const auto sc = build_scheme_circuit(scheme, pp);
            const auto counts = run_shots(sc.circuit, kShots, kSeed);
            if (!(run_shots(sc.circuit, kShots, kSeed) == counts))
                o.fail(sc.circuit.name() + " not reproducible for a fixed seed");
            ShotTable shots;
            shots.scheme = scheme;
            accumulate_shots(shots, pp, sc.readout, counts);
            const std::size_t col = pair_column(pp);
            for (std::size_t r = 0; r < 8; ++r) {
                const auto &row = exact.rows[r];
                const double p1 = row.joint[col][1] / row.probability;
                const auto f = shots.frequency(r, col);
                if (!f) {
                    o.fail(sc.circuit.name() + " row " + row.label.str() + " never sampled");
                    continue;
                }
                const double dev = std::abs(*f - p1);
                worst = std::max(worst, dev);
                if (dev > 0.02)
                    o.fail(sc.circuit.name() + " row " + row.label.str() + ": frequency " + std::to_string(*f) +
                           " vs exact " + std::to_string(p1));
            }
        }
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 30.0)
        o.fail("took " + std::to_string(elapsed) + " s");
    if (o.pass)
        o.detail = "9 circuits x 65536 shots, max deviation " + std::to_string(worst) + ", " +
                   std::to_string(elapsed) + " s";
    return o;
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(4242);

    std::size_t norm_cases = 0;
    std::uniform_int_distribution<std::size_t> nq(1, 8), pick(0, 5);
    for (; norm_cases < 1200; ++norm_cases) {
        const std::size_t n = nq(rng);
        Statevector s = testing_support::random_state(n, rng);
        std::uniform_int_distribution<std::size_t> q(0, n - 1);
        for (int k = 0; k < 20; ++k) {
            const std::size_t choice = pick(rng);
            const std::size_t a = q(rng);
            if (choice == 5 && n > 1) {
                std::size_t b = a;
                while (b == a)
                    b = q(rng);
                apply_cx(s, a, b);
            } else {
                apply_1q(s, kAllGateKinds[choice % 5], a);
            }
        }
        if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
            o.fail("norm drift in case " + std::to_string(norm_cases));
            break;
        }
    }
    for (GateKind g : kAllGateKinds) {
        if (g == GateKind::CX)
            continue;
        const Matrix2 u = gate_matrix(g);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) {
                const Complex v = std::conj(u[r]) * u[c] + std::conj(u[2 + r]) * u[2 + c];
                if (std::abs(v - (r == c ? 1.0 : 0.0)) > 1e-14)
                    o.fail(std::string(gate_name(g)) + " is not unitary");
            }
    }

    for (int trial = 0; trial < 100; ++trial) {
        const Statevector s = testing_support::random_state(3, rng);
        for (auto pp : kPairs) {
            auto [once, w1] = apply_pair_projector(s, pp);
            auto [twice, w2] = apply_pair_projector(once, pp);
            for (std::size_t j = 0; j < 8; ++j)
                if (std::abs(once[j] - twice[j]) > 1e-12)
                    o.fail("Pi" + pp.name() + " not idempotent");
        }
    }

    std::size_t round_trips = 0;
    for (SchemeId scheme : kSchemes)
        for (auto pp : kPairs)
            for (bool ff : {false, true}) {
                if (ff && scheme != SchemeId::CommonTarget)
                    continue;
                const auto sc = build_scheme_circuit(scheme, pp, {.feed_forward = ff});
                if (!parse_qasm(export_qasm(sc.circuit)).same_structure(sc.circuit))
                    o.fail(sc.circuit.name() + " does not round-trip");
                ++round_trips;
            }
    for (int trial = 0; trial < 200; ++trial, ++round_trips) {
        const auto c = testing_support::random_valid_circuit(rng);
        if (!parse_qasm(export_qasm(c)).same_structure(c))
            o.fail("random circuit " + std::to_string(trial) + " does not round-trip");
    }

    Circuit tele(3, 2, "teleport");
    tele.h(1).cx(1, 2).cx(0, 1).h(0).measure(0, 0).measure(1, 1);
    tele.c_if(GateKind::X, {2}, 1, 1).c_if(GateKind::Z, {2}, 0, 1);
    double worst_fidelity_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto input = testing_support::random_state(1, rng);
        std::vector<Complex> amps(8);
        amps[0] = input[0];
        amps[1] = input[1];
        for (const auto &b : run_exact(tele, Statevector(amps))) {
            std::vector<Complex> expected(8);
            const std::size_t low = b.clbits & 0b11;
            expected[low] = input[0];
            expected[low | 0b100] = input[1];
            const double gap = std::abs(std::norm(inner_product(Statevector(expected), b.final_state)) - 1.0);
            worst_fidelity_gap = std::max(worst_fidelity_gap, gap);
        }
    }
    if (worst_fidelity_gap > 1e-10)
        o.fail("teleportation fidelity off by " + std::to_string(worst_fidelity_gap));

    if (o.pass)
        o.detail = std::to_string(norm_cases) + " norm cases, 300 projector checks, " + std::to_string(round_trips) +
                   " round-trips, 100 teleportations";
    return o;
}

Outcome negative_control() {
    Outcome o;
    cli::VerifyConfig cfg;
    cfg.options.phase_gate = GateKind::SDG;
    std::ostringstream out, err;
    const int rc = cli::cmd_verify(cfg, out, err);
    if (rc != cli::kExitFailure)
        o.fail("verify exited " + std::to_string(rc) + " under the SDG fixture");
    const std::string text = out.str();
    for (const auto &label : all_labels()) {
        const std::string line = "labelled " + label.str() + " post-select " + label.flipped().str();
        if (text.find(line) == std::string::npos)
            o.fail("diff lacks '" + line + "'");
    }
    if (o.pass)
        o.detail = "verify exits 1, all 8 rows reported as +i<->-i permuted";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"table reproduction", table_reproduction},
        {"pigeonhole orthogonality", orthogonality},
        {"final-state amplitudes", final_state_amplitudes},
        {"|+> decomposition", decomposition},
        {"cross-scheme equivalence", scheme_equivalence},
        {"sampling consistency", sampling_consistency},
        {"property suites", property_suites},
        {"negative control", negative_control},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str());
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

#include "pigeonsim/circuit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "pigeonsim/qphe.hpp"
#include "test_support.hpp"

using namespace pigeonsim;

namespace {

Circuit hadamard_measure() {
    Circuit c(1, 1, "h_measure");
    c.h(0).measure(0, 0);
    return c;
}

double total_probability(const std::vector<BranchOutcome> &branches) {
    double s = 0.0;
    for (const auto &b : branches)
        s += b.probability;
    return s;
}

/// Random valid circuit with no gate after a qubit's measurement.
Circuit random_circuit(std::mt19937_64 &rng, std::size_t n, std::size_t nc, std::size_t length) {
    Circuit c(n, nc, "random");
    std::uniform_int_distribution<std::size_t> q(0, n - 1), cb(0, nc - 1), pick(0, 9);
    std::vector<bool> measured(n, false);
    for (std::size_t k = 0; k < length; ++k) {
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < n; ++i)
            if (!measured[i])
                live.push_back(i);
        if (live.empty())
            break;
        std::uniform_int_distribution<std::size_t> lp(0, live.size() - 1);
        const std::size_t a = live[lp(rng)];
        const std::size_t choice = pick(rng);
        if (choice < 5) {
            c.gate(kAllGateKinds[choice], {a});
        } else if (choice < 7 && live.size() > 1) {
            std::size_t b = a;
            while (b == a)
                b = live[lp(rng)];
            c.cx(a, b);
        } else if (choice == 7) {
            c.measure(a, cb(rng));
            measured[a] = true;
        } else if (choice == 8) {
            const GateKind kinds[] = {GateKind::X, GateKind::Z, GateKind::H};
            c.c_if(kinds[k % 3], {a}, cb(rng), static_cast<int>(k % 2));
        } else {
            c.barrier({a});
        }
    }
    return c;
}

} // namespace

TEST(Validate, SchemeCircuitsAreValid) {
    for (auto scheme : qphe::kSchemes)
        for (auto pp : qphe::kPairs)
            EXPECT_TRUE(validate(qphe::build_scheme_circuit(scheme, pp).circuit).empty());
}

TEST(Validate, ReportsEachViolationWithPosition) {
    Circuit c(2, 1);
    c.h(0);
    c.cx(1, 1);
    c.measure(0, 1);
    c.gate(GateKind::CX, {0});
    const auto d = validate(c);
    ASSERT_EQ(d.size(), 4U);
    EXPECT_EQ(d[0].position, 1U);
    EXPECT_NE(d[0].message.find("control and target"), std::string::npos);
    EXPECT_EQ(d[1].position, 2U);
    EXPECT_NE(d[1].message.find("clbit 1"), std::string::npos);
    // malformed arity, and qubit 0 was measured at position 2
    EXPECT_EQ(d[2].position, 3U);
    EXPECT_NE(d[2].message.find("expects 2"), std::string::npos);
    EXPECT_EQ(d[3].position, 3U);
    EXPECT_NE(d[3].message.find("after its measurement"), std::string::npos);
}

TEST(Validate, GateAfterMeasurement) {
    Circuit c(1, 1);
    c.measure(0, 0).x(0);
    const auto d = validate(c);
    ASSERT_EQ(d.size(), 1U);
    EXPECT_EQ(d[0].position, 1U);
}

TEST(Validate, ConditionChecks) {
    Circuit c(1, 1);
    c.c_if(GateKind::X, {0}, 3, 1).c_if(GateKind::X, {0}, 0, 2);
    EXPECT_EQ(validate(c).size(), 2U);
    EXPECT_THROW(run_exact(c), InvalidInstructionError);
}

TEST(RunExact, HadamardThenMeasure) {
    const auto branches = run_exact(hadamard_measure());
    ASSERT_EQ(branches.size(), 2U);
    EXPECT_EQ(branches[0].bitstring(), "0");
    EXPECT_EQ(branches[1].bitstring(), "1");
    EXPECT_NEAR(branches[0].probability, 0.5, 1e-12);
    EXPECT_NEAR(branches[1].probability, 0.5, 1e-12);
    EXPECT_NEAR(std::norm(branches[1].final_state[1]), 1.0, 1e-12);
}

TEST(RunExact, NoMeasurementsIsOneBranch) {
    Circuit c(2, 0);
    c.h(0).cx(0, 1);
    const auto branches = run_exact(c);
    ASSERT_EQ(branches.size(), 1U);
    EXPECT_DOUBLE_EQ(branches[0].probability, 1.0);
    EXPECT_EQ(branches[0].bitstring(), "");
}

TEST(RunExact, DirectParityPair23AgainstDenseOracle) {
    const auto sc = qphe::build_scheme_circuit(qphe::SchemeId::DirectParity, {2, 3});
    const auto branches = run_exact(sc.circuit);

    // Frozen from the dense deferred-measurement oracle: ancilla c3 = 1 exactly
    // when system bits 1 and 2 agree.
    const std::set<std::string> expected = {"0010", "0011", "0100", "0101",
                                            "1000", "1001", "1110", "1111"};
    std::set<std::string> got;
    for (const auto &b : branches) {
        got.insert(b.bitstring());
        EXPECT_NEAR(b.probability, 0.125, 1e-12) << b.bitstring();
    }
    EXPECT_EQ(got, expected);
    EXPECT_EQ(branches.size(), 8U);

    const auto oracle = testing_support::deferred_measurement_distribution(sc.circuit);
    const auto dist = exact_distribution(branches);
    for (std::size_t key = 0; key < oracle.size(); ++key) {
        const auto it = dist.find(to_bitstring(key, 4));
        const double p = it == dist.end() ? 0.0 : it->second;
        EXPECT_NEAR(p, oracle[key], 1e-12) << to_bitstring(key, 4);
    }
}

TEST(RunExact, CapacityLimit) {
    Circuit c(21, 21);
    for (std::size_t q = 0; q < 21; ++q)
        c.h(q).measure(q, q);
    EXPECT_THROW(run_exact(c), CapacityError);
}

TEST(RunExact, InitialStateShapeChecked) {
    EXPECT_THROW(run_exact(hadamard_measure(), zero_state(2)), ShapeError);
}

TEST(RunExact, ConditionalGateSeesBranchClbits) {
    // Measure a |+> and copy the outcome onto qubit 1 by a conditioned X.
    Circuit c(2, 2);
    c.h(0).measure(0, 0).c_if(GateKind::X, {1}, 0, 1).measure(1, 1);
    const auto branches = run_exact(c);
    ASSERT_EQ(branches.size(), 2U);
    EXPECT_EQ(branches[0].bitstring(), "00");
    EXPECT_EQ(branches[1].bitstring(), "11");
}

TEST(RunExact, ProbabilitiesSumToOneOnRandomCircuits) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = random_circuit(rng, 4, 3, 25);
        EXPECT_NEAR(total_probability(run_exact(c)), 1.0, 1e-9) << "trial " << trial;
    }
    for (auto scheme : qphe::kSchemes)
        for (auto pp : qphe::kPairs)
            EXPECT_NEAR(total_probability(run_exact(qphe::build_scheme_circuit(scheme, pp).circuit)), 1.0,
                        1e-9);
}

TEST(RunExact, DisjointInstructionsCommute) {
    std::mt19937_64 rng(99);
    int swaps = 0;
    for (int trial = 0; trial < 300 && swaps < 100; ++trial) {
        const auto c = random_circuit(rng, 4, 3, 20);
        const auto &insts = c.instructions();
        for (std::size_t k = 0; k + 1 < insts.size(); ++k) {
            auto qa = qubit_support(insts[k]), qb = qubit_support(insts[k + 1]);
            auto ca = clbit_support(insts[k]), cb = clbit_support(insts[k + 1]);
            auto disjoint = [](std::vector<std::size_t> a, std::vector<std::size_t> b) {
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                std::vector<std::size_t> common;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
                return common.empty();
            };
            if (!disjoint(qa, qb) || !disjoint(ca, cb))
                continue;
            Circuit swapped(c.num_qubits(), c.num_clbits());
            for (std::size_t j = 0; j < insts.size(); ++j)
                swapped.append(j == k ? insts[k + 1] : j == k + 1 ? insts[k] : insts[j]);
            const auto a = exact_distribution(run_exact(c));
            const auto b = exact_distribution(run_exact(swapped));
            ASSERT_EQ(a.size(), b.size());
            for (const auto &[bits, p] : a) {
                ASSERT_TRUE(b.count(bits)) << bits;
                EXPECT_NEAR(p, b.at(bits), 1e-12);
            }
            ++swaps;
            break;
        }
    }
    EXPECT_GE(swaps, 100);
}

TEST(Teleportation, ReproducesRandomInputs) {
    // q0 input, (q1, q2) Bell pair; corrections on q2 from c1 (X) and c0 (Z).
    Circuit c(3, 2, "teleport");
    c.h(1).cx(1, 2).cx(0, 1).h(0).measure(0, 0).measure(1, 1);
    c.c_if(GateKind::X, {2}, 1, 1).c_if(GateKind::Z, {2}, 0, 1);

    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        const auto input = testing_support::random_state(1, rng);
        std::vector<Complex> amps(8);
        amps[0] = input[0];
        amps[1] = input[1];
        const auto branches = run_exact(c, Statevector(amps));
        ASSERT_EQ(branches.size(), 4U);
        for (const auto &b : branches) {
            std::vector<Complex> expected(8);
            const std::size_t low = b.clbits & 0b11;
            expected[low] = input[0];
            expected[low | 0b100] = input[1];
            const double fidelity = std::norm(inner_product(Statevector(expected), b.final_state));
            EXPECT_NEAR(fidelity, 1.0, 1e-10) << "trial " << trial << " branch " << b.bitstring();
        }
    }
}

TEST(RunShots, BinomialConcentration) {
    const auto counts = run_shots(hadamard_measure(), 8192, 1);
    EXPECT_EQ(counts.total_shots, 8192U);
    const auto zeros = counts.counts.at("0");
    EXPECT_NEAR(static_cast<double>(zeros), 4096.0, 300.0);
    EXPECT_EQ(zeros + counts.counts.at("1"), 8192U);
}

TEST(RunShots, DeterministicForSeed) {
    const auto sc = qphe::build_scheme_circuit(qphe::SchemeId::Distillation, {2, 3});
    const auto a = run_shots(sc.circuit, 4096, 7);
    const auto b = run_shots(sc.circuit, 4096, 7);
    EXPECT_EQ(a, b);
    const auto other = run_shots(sc.circuit, 4096, 8);
    EXPECT_NE(a.counts, other.counts);
}

TEST(RunShots, ThreadCountDoesNotChangeResult) {
    const auto sc = qphe::build_scheme_circuit(qphe::SchemeId::CommonTarget, {1, 3}, {.feed_forward = true});
    EXPECT_EQ(run_shots(sc.circuit, 5000, 42, 1), run_shots(sc.circuit, 5000, 42, 4));
}

TEST(RunShots, ZeroShotsRejected) {
    EXPECT_THROW(run_shots(hadamard_measure(), 0, 0), ArgumentError);
}

TEST(RunShots, ParityCertainGivenPlusIPlusIPlusI) {
    const auto sc = qphe::build_scheme_circuit(qphe::SchemeId::DirectParity, {2, 3});
    const auto counts = run_shots(sc.circuit, 8192, 3);
    std::uint64_t with_one = 0, with_zero = 0;
    for (const auto &[bits, n] : counts.counts) {
        if (bits.substr(1) != "111")
            continue;
        (bits[0] == '1' ? with_one : with_zero) += n;
    }
    EXPECT_GT(with_one, 0U);
    EXPECT_EQ(with_zero, 0U);
}

TEST(RunShots, MatchesExactInTotalVariation) {
    for (auto scheme : qphe::kSchemes)
        for (auto pp : qphe::kPairs) {
            const auto sc = qphe::build_scheme_circuit(scheme, pp);
            const auto exact = exact_distribution(run_exact(sc.circuit));
            const auto counts = run_shots(sc.circuit, 65536, 2024);
            std::set<std::string> keys;
            for (const auto &[k, p] : exact)
                keys.insert(k);
            for (const auto &[k, n] : counts.counts)
                keys.insert(k);
            double tvd = 0.0;
            for (const auto &k : keys) {
                const double p = exact.count(k) ? exact.at(k) : 0.0;
                const double f = counts.counts.count(k) ? static_cast<double>(counts.counts.at(k)) / 65536.0 : 0.0;
                tvd += 0.5 * std::abs(p - f);
            }
            EXPECT_LT(tvd, 0.02) << sc.circuit.name();
        }
}

TEST(SplitMix64, KnownSequence) {
    // Reference outputs of SplitMix64 seeded with 0.
    SplitMix64 g(0);
    EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(g(), 0x06c45d188009454fULL);
}

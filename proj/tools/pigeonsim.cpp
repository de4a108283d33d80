// pigeonsim: run, verify and export the pigeonhole parity circuits.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pigeonsim/cli.hpp"

namespace {

using pigeonsim::GateKind;
using namespace pigeonsim::cli;
namespace qphe = pigeonsim::qphe;

const std::vector<std::string> kSchemeNames = {"direct", "distillation", "common_target"};

// Negative-control fixture: swapping the phase gate conjugates the post-selection basis.
const std::map<std::string, GateKind> kPhaseGates = {{"s", GateKind::S}, {"sdg", GateKind::SDG}};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Statevector simulator for the three-qubit pigeonhole parity experiment"};
    app.require_subcommand(1);

    RunConfig run;
    std::string run_pair = "all";
    std::string mode = "exact";
    std::string output = "table";
    std::string run_phase = "s";
    std::optional<std::uint64_t> seed;
    std::string out_path, from_qasm;
    auto *run_cmd = app.add_subcommand("run", "Run one scheme exactly or with sampled shots");
    std::string run_scheme = "direct";
    run_cmd->add_option("--scheme", run_scheme, "direct | distillation | common_target")
        ->check(CLI::IsMember(kSchemeNames))
        ->capture_default_str();
    run_cmd->add_option("--pair", run_pair, "12 | 23 | 13 | all")
        ->check(CLI::IsMember({"12", "23", "13", "all"}))
        ->capture_default_str();
    run_cmd->add_option("--mode", mode, "exact | shots")
        ->check(CLI::IsMember({"exact", "shots"}))
        ->capture_default_str();
    run_cmd->add_option("--shots", run.shots, "shots per pair in shots mode")->capture_default_str();
    run_cmd->add_option("--seed", seed, "64-bit seed (default $PIGEONSIM_SEED or 0)");
    run_cmd->add_option("--output", output, "json | table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    run_cmd->add_option("--out", out_path, "write the report here instead of stdout");
    run_cmd->add_option("--from-qasm", from_qasm, "run this .qasm file, read out as --scheme/--pair")
        ->check(CLI::ExistingFile);
    run_cmd->add_flag("--feed-forward", run.options.feed_forward,
                      "common_target: remote CXs through measured Bell-pair corrections");
    run_cmd->add_option("--threads", run.threads, "worker threads for shots mode")->capture_default_str();
    run_cmd->add_option("--phase-gate", run_phase, "phase gate before the final Hadamard (s | sdg)")
        ->check(CLI::IsMember({"s", "sdg"}))
        ->group("Fixtures");

    VerifyConfig verify;
    std::string verify_phase = "s";
    auto *verify_cmd = app.add_subcommand("verify", "Check all schemes against the reference tables");
    verify_cmd->add_flag("--json", verify.json, "machine-readable report");
    verify_cmd->add_flag("--feed-forward", verify.options.feed_forward,
                         "use the feed-forward common_target wiring");
    verify_cmd->add_option("--phase-gate", verify_phase, "phase gate before the final Hadamard (s | sdg)")
        ->check(CLI::IsMember({"s", "sdg"}))
        ->group("Fixtures");

    std::string export_scheme, export_pair, export_out;
    qphe::SchemeOptions export_options;
    auto *export_cmd = app.add_subcommand("export", "Write a scheme circuit as OpenQASM 2.0");
    export_cmd->add_option("--scheme", export_scheme, "direct | distillation | common_target")
        ->check(CLI::IsMember(kSchemeNames))
        ->required();
    export_cmd->add_option("--pair", export_pair, "12 | 23 | 13")
        ->check(CLI::IsMember({"12", "23", "13"}))
        ->required();
    export_cmd->add_option("--out", export_out, "destination .qasm path")->required();
    export_cmd->add_flag("--feed-forward", export_options.feed_forward,
                         "use the feed-forward common_target wiring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*run_cmd) {
            run.scheme = qphe::parse_scheme(run_scheme);
            if (run_pair != "all")
                run.pair = qphe::PairProjector::parse(run_pair);
            run.mode = mode == "shots" ? Mode::Shots : Mode::Exact;
            run.output = output == "json" ? Output::Json : Output::Table;
            run.seed = seed ? *seed : default_seed();
            run.options.phase_gate = kPhaseGates.at(run_phase);
            if (!out_path.empty())
                run.out_path = out_path;
            if (!from_qasm.empty())
                run.from_qasm = from_qasm;
            const int rc = cmd_run(run, std::cout, std::cerr);
            if (rc == kExitUsage)
                std::cerr << run_cmd->help();
            return rc;
        }
        if (*verify_cmd) {
            verify.options.phase_gate = kPhaseGates.at(verify_phase);
            return cmd_verify(verify, std::cout, std::cerr);
        }
        if (*export_cmd)
            return cmd_export(qphe::parse_scheme(export_scheme), qphe::PairProjector::parse(export_pair), export_out,
                              export_options, std::cerr);
    } catch (const pigeonsim::ArgumentError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const pigeonsim::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

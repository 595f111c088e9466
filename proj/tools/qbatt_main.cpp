// qbatt command-line runner: single runs, coupling sweeps, and example
// comparisons for the structured-reservoir battery model.

#include "qbatt/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum battery charging through a structured two-qubit "
                 "thermal reservoir"};
    app.require_subcommand(1);

    std::string scenario = "I", example = "a", config_path, out_path;
    double g = 0.0, k = 0.0, t_max = 0.0, sample_dt = 0.0, tol = 0.0;
    std::vector<double> sweep_g;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario, "interaction scenario")
            ->check(CLI::IsMember({"I", "II", "III"}));
        cmd->add_option("--example", example, "initial state example")
            ->check(CLI::IsMember({"a", "b"}));
        cmd->add_option("--k", k, "charger-battery coupling (scenario III)");
        cmd->add_option("--t-max", t_max, "time horizon");
        cmd->add_option("--sample-dt", sample_dt, "sampling interval");
        cmd->add_option("--tol", tol, "integrator tolerance");
        cmd->add_option("--config", config_path, "key = value config file");
        cmd->add_option("--out", out_path, "output path");
    };

    auto* run_cmd = app.add_subcommand("run", "integrate one configuration "
                                              "and write a CSV time series");
    add_common(run_cmd);
    run_cmd->add_option("--g", g, "interaction coupling");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "run a set of couplings and report the ergotropy trend");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--g", sweep_g,
                          "coupling values (repeatable; paper defaults when "
                          "omitted)");

    std::string csv_a, csv_b;
    auto* compare_cmd = app.add_subcommand(
        "compare", "compare example-a and example-b runs of one scenario");
    compare_cmd->add_option("csv_a", csv_a, "example-a CSV")->required();
    compare_cmd->add_option("csv_b", csv_b, "example-b CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        qbatt::KeyValues file_kv;
        if (!config_path.empty())
            file_kv = qbatt::read_key_value_file(config_path);

        qbatt::KeyValues flags;
        auto* active = run_cmd->parsed() ? run_cmd : sweep_cmd;
        if (active->count("--scenario")) flags["scenario"] = scenario;
        if (active->count("--example")) flags["example"] = example;
        if (active->count("--k")) flags["k"] = num(k);
        if (active->count("--t-max")) flags["t_max"] = num(t_max);
        if (active->count("--sample-dt")) flags["sample_dt"] = num(sample_dt);
        if (active->count("--tol")) flags["tol"] = num(tol);

        if (run_cmd->parsed()) {
            if (run_cmd->count("--g")) flags["g"] = num(g);
            if (run_cmd->count("--out")) flags["out"] = out_path;
            const qbatt::RunSpec spec = qbatt::parse_config(file_kv, flags);
            const qbatt::RunResult result = qbatt::run(spec);
            if (result.exit_code == qbatt::kExitOk) {
                std::cout << "wrote " << result.csv_path << " ("
                          << result.records.size() << " samples)\n";
            } else {
                std::cerr << "run failed: " << result.message << "\n"
                          << "partial results in " << result.csv_path << "\n";
            }
            return result.exit_code;
        }

        if (sweep_cmd->parsed()) {
            if (sweep_cmd->count("--g")) {
                std::string joined;
                for (double v : sweep_g) {
                    if (!joined.empty()) joined += ",";
                    joined += num(v);
                }
                flags["g_values"] = joined;
            }
            if (sweep_cmd->count("--out")) flags["out_dir"] = out_path;
            const qbatt::SweepSpec spec =
                qbatt::parse_sweep_config(file_kv, flags);
            const qbatt::SweepResult result = qbatt::sweep(spec);
            std::cout << format_trend_report(result);
            for (const auto& rr : result.runs)
                if (rr.exit_code != qbatt::kExitOk)
                    std::cerr << rr.csv_path << ": " << rr.message << "\n";
            return result.exit_code;
        }

        const qbatt::CompareReport report =
            qbatt::compare_examples(csv_a, csv_b);
        std::cout << format_compare_report(report);
        return qbatt::kExitOk;
    } catch (const qbatt::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qbatt::kExitUsage;
    } catch (const qbatt::IntegratorError& e) {
        std::cerr << "integrator failure: " << e.what() << "\n";
        return qbatt::kExitIntegrator;
    } catch (const qbatt::ContractError& e) {
        std::cerr << "numerical contract violated: " << e.what() << "\n";
        return qbatt::kExitPhysics;
    }
}

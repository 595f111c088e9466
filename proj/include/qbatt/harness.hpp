// harness.hpp — experiment runner: config parsing with defaults/file/flag
// precedence, single runs and g-sweeps with CSV time series, and the
// example-a vs example-b comparison report.

#pragma once

#include "qbatt/thermo.hpp"

#include <map>
#include <optional>

namespace qbatt {

// Process exit codes shared by the library and the CLI.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitPhysics = 2,
    kExitIntegrator = 3,
};

struct RunSpec {
    ScenarioConfig config;
    double t_max = 60.0;
    double sample_dt = 0.05;
    double tol = 1e-9;
    std::string output_path = "run.csv";
};

struct SweepSpec {
    RunSpec base;
    std::vector<double> g_values;  // paper defaults when empty at parse time
    std::string output_dir = ".";
};

using KeyValues = std::map<std::string, std::string>;

// Flat key = value lines, '#' comments. Unknown keys are rejected by
// parse_config, naming the key.
KeyValues read_key_value_file(const std::string& path);

// Precedence: scenario defaults, then file entries, then flag entries.
RunSpec parse_config(const KeyValues& file_entries, const KeyValues& flags);
SweepSpec parse_sweep_config(const KeyValues& file_entries, const KeyValues& flags);

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    std::optional<double> first_fail_time;
    std::vector<ThermoRecord> records;  // as written to the CSV
    std::string csv_path;
};

// Integrates, evaluates, writes one CSV row per sample. On integrator
// failure the partial CSV is retained and the first failing time reported;
// bound violations keep the full CSV but mark the run failed.
RunResult run(const RunSpec& spec);

void write_csv(const std::string& path, const RunSpec& spec,
               const std::vector<ThermoRecord>& records);

struct CsvData {
    std::string scenario;
    std::string example;
    double g = 0.0;
    std::vector<ThermoRecord> records;
};

CsvData read_csv(const std::string& path);

struct SweepResult {
    std::vector<double> g_values;
    std::vector<RunResult> runs;
    std::vector<double> averages;  // time-averaged ergotropy / omega_b
    std::vector<double> peaks;     // peak ergotropy / omega_b
    std::string ordering;  // "increasing", "decreasing", "mixed", "single"
    int exit_code = kExitOk;
};

// One CSV per coupling value; runs execute concurrently.
SweepResult sweep(const SweepSpec& spec);

std::string format_trend_report(const SweepResult& result);

struct CompareReport {
    std::string scenario;
    double g = 0.0;
    double peak_a = 0.0, peak_b = 0.0;
    double avg_a = 0.0, avg_b = 0.0;
    bool a_dominates = false;  // peak_a >= peak_b
};

// Both files must share scenario and g and be examples a and b.
CompareReport compare_examples(const std::string& csv_a, const std::string& csv_b);

std::string format_compare_report(const CompareReport& report);

}  // namespace qbatt

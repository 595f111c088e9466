#include "qbatt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

namespace qbatt {

namespace {

const char* kCsvHeader =
    "t,E_B_norm,ergotropy_norm,ergo_pop_norm,ergo_coh_norm,power_norm,"
    "C_S12,C_C,C_B,C_S,I_S,I_S_deph,delta_C,W_B,bound_lo_norm,bound_hi_norm,"
    "trace_err,min_eig";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for '" + key + "': " + value);
    }
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto begin = item.find_first_not_of(" \t");
        const auto end = item.find_last_not_of(" \t");
        if (begin == std::string::npos) continue;
        out.push_back(parse_double(key, item.substr(begin, end - begin + 1)));
    }
    return out;
}

const std::vector<std::string> kRunKeys = {
    "scenario", "example",   "omega_s1", "omega_s2", "omega_c",
    "omega_b",  "g",         "k",        "gamma1",   "gamma2",
    "temperature", "t_max",  "sample_dt", "tol",     "out"};
const std::vector<std::string> kSweepOnlyKeys = {"g_values", "out_dir"};

void check_known_keys(const KeyValues& kv, bool sweep) {
    for (const auto& [key, value] : kv) {
        bool known = std::find(kRunKeys.begin(), kRunKeys.end(), key) !=
                     kRunKeys.end();
        if (!known && sweep)
            known = std::find(kSweepOnlyKeys.begin(), kSweepOnlyKeys.end(),
                              key) != kSweepOnlyKeys.end();
        if (!known) throw ConfigError("unknown configuration key '" + key + "'");
    }
}

// file entries first, then flags
KeyValues merge(const KeyValues& file_entries, const KeyValues& flags) {
    KeyValues merged = file_entries;
    for (const auto& [key, value] : flags) merged[key] = value;
    return merged;
}

RunSpec build_run_spec(const KeyValues& merged) {
    const auto get = [&](const std::string& key) -> const std::string* {
        auto it = merged.find(key);
        return it == merged.end() ? nullptr : &it->second;
    };

    const Scenario scenario =
        scenario_from_string(get("scenario") ? *get("scenario") : "I");
    const InitialExample example =
        example_from_string(get("example") ? *get("example") : "a");

    RunSpec spec;
    spec.config = default_config(scenario, example);

    // energy spacings first: the dependent defaults follow the paper's rules
    if (auto* v = get("omega_s1"))
        spec.config.omega_s1 = parse_double("omega_s1", *v);
    if (auto* v = get("omega_s2"))
        spec.config.omega_s2 = parse_double("omega_s2", *v);
    if (get("omega_s1") || get("omega_s2")) {
        const double s1 = spec.config.omega_s1, s2 = spec.config.omega_s2;
        spec.config.temperature = s1;
        spec.config.gamma1 = 0.01 * s1;
        spec.config.gamma2 = 0.01 * s2;
        spec.config.g = 0.05 * s2;
        switch (scenario) {
            case Scenario::I:
                spec.config.omega_b = s2 - s1;
                break;
            case Scenario::II:
                spec.config.omega_b = s2;
                spec.config.omega_c = s1;
                break;
            case Scenario::III:
                spec.config.omega_b = s2 - s1;
                spec.config.omega_c = s2 - s1;
                spec.config.k = 0.03 * spec.config.omega_c;
                break;
        }
    }

    if (auto* v = get("omega_c")) spec.config.omega_c = parse_double("omega_c", *v);
    if (auto* v = get("omega_b")) spec.config.omega_b = parse_double("omega_b", *v);
    if (auto* v = get("g")) spec.config.g = parse_double("g", *v);
    if (auto* v = get("k")) spec.config.k = parse_double("k", *v);
    if (auto* v = get("gamma1")) spec.config.gamma1 = parse_double("gamma1", *v);
    if (auto* v = get("gamma2")) spec.config.gamma2 = parse_double("gamma2", *v);
    if (auto* v = get("temperature"))
        spec.config.temperature = parse_double("temperature", *v);
    if (auto* v = get("t_max")) spec.t_max = parse_double("t_max", *v);
    if (auto* v = get("sample_dt"))
        spec.sample_dt = parse_double("sample_dt", *v);
    if (auto* v = get("tol")) spec.tol = parse_double("tol", *v);
    if (auto* v = get("out")) spec.output_path = *v;

    if (spec.t_max <= 0.0) throw ConfigError("t_max must be positive");
    if (spec.sample_dt <= 0.0 || spec.sample_dt > spec.t_max)
        throw ConfigError("sample_dt must lie in (0, t_max]");
    const auto report = validate_config(spec.config);
    if (!report.ok) throw ConfigError(report.message);
    return spec;
}

double normalized_average(const std::vector<ThermoRecord>& records,
                          double omega_b) {
    if (records.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& r : records) sum += r.ergotropy;
    return sum / (static_cast<double>(records.size()) * omega_b);
}

double normalized_peak(const std::vector<ThermoRecord>& records,
                       double omega_b) {
    double peak = 0.0;
    for (const auto& r : records) peak = std::max(peak, r.ergotropy);
    return peak / omega_b;
}

}  // namespace

KeyValues read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string()
                                          : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": empty key");
        kv[key] = value;
    }
    return kv;
}

RunSpec parse_config(const KeyValues& file_entries, const KeyValues& flags) {
    check_known_keys(file_entries, false);
    return build_run_spec(merge(file_entries, flags));
}

SweepSpec parse_sweep_config(const KeyValues& file_entries,
                             const KeyValues& flags) {
    check_known_keys(file_entries, true);
    KeyValues merged = merge(file_entries, flags);
    SweepSpec spec;
    std::vector<double> g_values;
    if (auto it = merged.find("g_values"); it != merged.end()) {
        g_values = parse_double_list("g_values", it->second);
        merged.erase(it);
    }
    if (auto it = merged.find("out_dir"); it != merged.end()) {
        spec.output_dir = it->second;
        merged.erase(it);
    }
    merged.erase("g");  // the sweep supplies g per run
    spec.base = build_run_spec(merged);
    if (g_values.empty()) {
        for (double frac : {0.03, 0.05, 0.07, 0.09})
            g_values.push_back(frac * spec.base.config.omega_s2);
    }
    if (g_values.empty()) throw ConfigError("g_values must be nonempty");
    for (double g : g_values)
        if (g <= 0.0 || g > 0.1 * spec.base.config.omega_s2)
            throw ConfigError("g_values entries must lie in (0, 0.1 omega_s2]");
    spec.g_values = g_values;
    return spec;
}

void write_csv(const std::string& path, const RunSpec& spec,
               const std::vector<ThermoRecord>& records) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    const auto& c = spec.config;
    out << "# scenario=" << to_string(c.scenario)
        << " example=" << to_string(c.initial_example) << " g=" << fmt(c.g)
        << " k=" << fmt(c.k) << " t_max=" << fmt(spec.t_max)
        << " sample_dt=" << fmt(spec.sample_dt) << " tol=" << fmt(spec.tol)
        << "\n";
    out << kCsvHeader << "\n";
    const double w = c.omega_b;
    for (const auto& r : records) {
        out << fmt(r.t) << ',' << fmt(r.E_B / w) << ',' << fmt(r.ergotropy / w)
            << ',' << fmt(r.ergo_pop / w) << ',' << fmt(r.ergo_coh / w) << ','
            << fmt(r.power / w) << ',' << fmt(r.C_S12) << ',' << fmt(r.C_C)
            << ',' << fmt(r.C_B) << ',' << fmt(r.C_S) << ',' << fmt(r.I_S)
            << ',' << fmt(r.I_S_deph) << ',' << fmt(r.delta_C) << ','
            << fmt(r.W_B) << ',' << fmt(r.bound_lo / w) << ','
            << fmt(r.bound_hi / w) << ',' << fmt(r.trace_err) << ','
            << fmt(r.min_eig) << "\n";
    }
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file: " + path);
    CsvData data;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw ConfigError(path + ": missing metadata line");
    std::stringstream meta(line.substr(2));
    std::string token;
    while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "scenario") data.scenario = value;
        if (key == "example") data.example = value;
        if (key == "g") data.g = parse_double("g", value);
    }
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ConfigError(path + ": unexpected CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(row, cell, ','))
            vals.push_back(parse_double("csv cell", cell));
        if (vals.size() != 18)
            throw ConfigError(path + ": malformed CSV row");
        ThermoRecord r;
        r.t = vals[0];
        r.E_B = vals[1];
        r.ergotropy = vals[2];
        r.ergo_pop = vals[3];
        r.ergo_coh = vals[4];
        r.power = vals[5];
        r.C_S12 = vals[6];
        r.C_C = vals[7];
        r.C_B = vals[8];
        r.C_S = vals[9];
        r.I_S = vals[10];
        r.I_S_deph = vals[11];
        r.delta_C = vals[12];
        r.W_B = vals[13];
        r.bound_lo = vals[14];
        r.bound_hi = vals[15];
        r.trace_err = vals[16];
        r.min_eig = vals[17];
        data.records.push_back(r);
    }
    return data;
}

RunResult run(const RunSpec& spec) {
    RunResult result;
    result.csv_path = spec.output_path;
    const LindbladModel model = build_model(spec.config);
    const IntegrationOutcome outcome = integrate_partial(
        model, initial_state(spec.config), spec.t_max, spec.sample_dt, spec.tol);

    try {
        result.records =
            evaluate_trajectory(outcome.trajectory, spec.config.temperature);
    } catch (const ContractError& e) {
        result.exit_code = kExitPhysics;
        result.message = e.what();
        write_csv(spec.output_path, spec, result.records);
        return result;
    }
    write_csv(spec.output_path, spec, result.records);

    if (!outcome.completed) {
        result.exit_code = kExitIntegrator;
        result.first_fail_time = outcome.fail_time;
        result.message = outcome.error;
        return result;
    }
    for (const auto& r : result.records) {
        if (!r.bounds_ok) {
            result.exit_code = kExitPhysics;
            result.first_fail_time = r.t;
            std::ostringstream msg;
            msg << "ergotropy bound violated at t = " << r.t;
            result.message = msg.str();
            return result;
        }
    }
    return result;
}

SweepResult sweep(const SweepSpec& spec) {
    SweepResult result;
    result.g_values = spec.g_values;

    std::vector<std::future<RunResult>> futures;
    for (double g : spec.g_values) {
        RunSpec rs = spec.base;
        rs.config.g = g;
        std::ostringstream name;
        name << spec.output_dir << "/run_" << to_string(rs.config.scenario)
             << "_" << to_string(rs.config.initial_example) << "_g" << fmt(g)
             << ".csv";
        rs.output_path = name.str();
        futures.push_back(
            std::async(std::launch::async, [rs] { return run(rs); }));
    }
    for (auto& f : futures) result.runs.push_back(f.get());

    const double w = spec.base.config.omega_b;
    for (const auto& rr : result.runs) {
        result.averages.push_back(normalized_average(rr.records, w));
        result.peaks.push_back(normalized_peak(rr.records, w));
        result.exit_code = std::max(result.exit_code, rr.exit_code);
    }

    if (result.averages.size() < 2) {
        result.ordering = "single";
    } else {
        bool inc = true, dec = true;
        for (std::size_t i = 1; i < result.averages.size(); ++i) {
            inc = inc && result.averages[i] > result.averages[i - 1];
            dec = dec && result.averages[i] < result.averages[i - 1];
        }
        result.ordering = inc ? "increasing" : dec ? "decreasing" : "mixed";
    }
    return result;
}

std::string format_trend_report(const SweepResult& result) {
    std::ostringstream out;
    out << "g, time-averaged ergotropy/omega_B, peak ergotropy/omega_B\n";
    for (std::size_t i = 0; i < result.g_values.size(); ++i)
        out << fmt(result.g_values[i]) << ", " << fmt(result.averages[i])
            << ", " << fmt(result.peaks[i]) << "\n";
    if (result.ordering == "single")
        out << "single-coupling sweep: no ordering claim\n";
    else
        out << "time-averaged ergotropy ordering in g: " << result.ordering
            << "\n";
    return out.str();
}

CompareReport compare_examples(const std::string& csv_a,
                               const std::string& csv_b) {
    const CsvData a = read_csv(csv_a);
    const CsvData b = read_csv(csv_b);
    if (a.scenario != b.scenario)
        throw ConfigError("compare: scenario mismatch (" + a.scenario + " vs " +
                          b.scenario + ")");
    if (a.g != b.g) throw ConfigError("compare: coupling g mismatch");
    if (!(a.example == "a" && b.example == "b"))
        throw ConfigError("compare: expected examples a and b in that order");

    // CSV columns are already normalized by omega_B
    auto avg = [](const CsvData& d) {
        double s = 0.0;
        for (const auto& r : d.records) s += r.ergotropy;
        return d.records.empty() ? 0.0 : s / double(d.records.size());
    };
    auto peak = [](const CsvData& d) {
        double p = 0.0;
        for (const auto& r : d.records) p = std::max(p, r.ergotropy);
        return p;
    };

    CompareReport rep;
    rep.scenario = a.scenario;
    rep.g = a.g;
    rep.avg_a = avg(a);
    rep.avg_b = avg(b);
    rep.peak_a = peak(a);
    rep.peak_b = peak(b);
    rep.a_dominates = rep.peak_a >= rep.peak_b;
    return rep;
}

std::string format_compare_report(const CompareReport& r) {
    std::ostringstream out;
    out << "scenario " << r.scenario << ", g = " << fmt(r.g) << "\n"
        << "example a: peak ergotropy/omega_B = " << fmt(r.peak_a)
        << ", time-averaged = " << fmt(r.avg_a) << "\n"
        << "example b: peak ergotropy/omega_B = " << fmt(r.peak_b)
        << ", time-averaged = " << fmt(r.avg_b) << "\n"
        << "peak(a) >= peak(b): " << (r.a_dominates ? "yes" : "no") << "\n";
    return out.str();
}

}  // namespace qbatt

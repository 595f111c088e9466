#include "qbatt/model.hpp"

#include <cmath>
#include <sstream>

namespace qbatt {

namespace {

// Basis index of a product state, first label most significant.
Eigen::Index basis_index(const std::vector<int>& bits) {
    Eigen::Index idx = 0;
    for (int b : bits) idx = (idx << 1) | b;
    return idx;
}

bool relative_equal(double a, double b, double rel_tol = 1e-12) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::I: return "I";
        case Scenario::II: return "II";
        case Scenario::III: return "III";
    }
    return "?";
}

std::string to_string(InitialExample e) {
    return e == InitialExample::a ? "a" : "b";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "I") return Scenario::I;
    if (s == "II") return Scenario::II;
    if (s == "III") return Scenario::III;
    throw ConfigError("unknown scenario '" + s + "' (expected I, II or III)");
}

InitialExample example_from_string(const std::string& s) {
    if (s == "a") return InitialExample::a;
    if (s == "b") return InitialExample::b;
    throw ConfigError("unknown example '" + s + "' (expected a or b)");
}

ScenarioConfig default_config(Scenario scenario, InitialExample example) {
    ScenarioConfig c;
    c.scenario = scenario;
    c.initial_example = example;
    c.omega_s2 = 10.0;
    c.omega_s1 = 0.5 * c.omega_s2;
    c.temperature = c.omega_s1;
    c.gamma1 = 0.01 * c.omega_s1;
    c.gamma2 = 0.01 * c.omega_s2;
    c.g = 0.05 * c.omega_s2;
    switch (scenario) {
        case Scenario::I:
            c.omega_b = c.omega_s2 - c.omega_s1;
            c.omega_c = 0.0;
            c.k = 0.0;
            break;
        case Scenario::II:
            // battery above charger: the flip absorbs the S12 gap into B
            c.omega_b = c.omega_s2;
            c.omega_c = c.omega_s1;
            c.k = 0.0;
            break;
        case Scenario::III:
            c.omega_b = c.omega_s2 - c.omega_s1;
            c.omega_c = c.omega_b;
            c.k = 0.03 * c.omega_c;
            break;
    }
    return c;
}

ValidationReport validate_resonance(const ScenarioConfig& c) {
    if (!(c.omega_s2 > c.omega_s1))
        return {false, "omega_s2 must exceed omega_s1"};
    const double gap = c.omega_s2 - c.omega_s1;
    switch (c.scenario) {
        case Scenario::I:
            if (!relative_equal(c.omega_b, gap))
                return {false, "scenario I requires omega_b = omega_s2 - omega_s1"};
            break;
        case Scenario::II:
            if (!(c.omega_b > c.omega_c))
                return {false, "scenario II requires omega_b > omega_c"};
            if (!relative_equal(gap, c.omega_b - c.omega_c))
                return {false,
                        "scenario II requires omega_s2 - omega_s1 = omega_b - omega_c"};
            break;
        case Scenario::III:
            if (!relative_equal(c.omega_b, gap))
                return {false, "scenario III requires omega_b = omega_s2 - omega_s1"};
            if (!relative_equal(c.omega_c, gap))
                return {false, "scenario III requires omega_c = omega_s2 - omega_s1"};
            break;
    }
    return {};
}

ValidationReport validate_config(const ScenarioConfig& c) {
    if (c.omega_s1 <= 0.0) return {false, "omega_s1 must be positive"};
    if (c.omega_s2 <= 0.0) return {false, "omega_s2 must be positive"};
    if (c.omega_b <= 0.0) return {false, "omega_b must be positive"};
    if (c.scenario != Scenario::I && c.omega_c <= 0.0)
        return {false, "omega_c must be positive"};
    if (c.temperature < 0.0) return {false, "temperature must be nonnegative"};
    if (c.gamma1 < 0.0 || c.gamma2 < 0.0)
        return {false, "decay rates must be nonnegative"};
    if (c.gamma1 > 0.1 * c.omega_s1)
        return {false, "gamma1 violates weak dissipation (gamma1 <= 0.1 omega_s1)"};
    if (c.gamma2 > 0.1 * c.omega_s2)
        return {false, "gamma2 violates weak dissipation (gamma2 <= 0.1 omega_s2)"};
    if (c.g < 0.0) return {false, "g must be nonnegative"};
    if (c.g > 0.1 * c.omega_s2)
        return {false, "g violates the weak coupling limit (g <= 0.1 omega_s2)"};
    if (c.scenario == Scenario::III && c.k < 0.0)
        return {false, "k must be nonnegative"};
    return validate_resonance(c);
}

double bose_occupation(double temperature, double omega) {
    if (omega <= 0.0) throw ConfigError("bose_occupation: omega must be positive");
    if (temperature < 0.0)
        throw ConfigError("bose_occupation: temperature must be nonnegative");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

std::vector<Subsystem> scenario_labels(Scenario scenario) {
    if (scenario == Scenario::I)
        return {Subsystem::S1, Subsystem::S2, Subsystem::B};
    return {Subsystem::S1, Subsystem::S2, Subsystem::C, Subsystem::B};
}

ComplexMatrix build_free_hamiltonian(const ScenarioConfig& c) {
    const auto labels = scenario_labels(c.scenario);
    const int n = static_cast<int>(labels.size());
    std::vector<double> omegas;
    for (auto l : labels) {
        switch (l) {
            case Subsystem::S1: omegas.push_back(c.omega_s1); break;
            case Subsystem::S2: omegas.push_back(c.omega_s2); break;
            case Subsystem::C: omegas.push_back(c.omega_c); break;
            case Subsystem::B: omegas.push_back(c.omega_b); break;
        }
    }
    const Eigen::Index d = Eigen::Index(1) << n;
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (int q = 0; q < n; ++q) h += omegas[q] * embed(number_op(), q, n);
    return h;
}

ComplexMatrix build_interaction(const ScenarioConfig& c) {
    const int n = (c.scenario == Scenario::I) ? 3 : 4;
    const Eigen::Index d = Eigen::Index(1) << n;
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    switch (c.scenario) {
        case Scenario::I: {
            // |0_S1 1_S2 0_B><1_S1 0_S2 1_B| + h.c.
            const Eigen::Index a = basis_index({0, 1, 0});
            const Eigen::Index b = basis_index({1, 0, 1});
            h(a, b) = c.g;
            h(b, a) = c.g;
            break;
        }
        case Scenario::II: {
            // |0_S1 1_S2 1_C 0_B><1_S1 0_S2 0_C 1_B| + h.c.
            const Eigen::Index a = basis_index({0, 1, 1, 0});
            const Eigen::Index b = basis_index({1, 0, 0, 1});
            h(a, b) = c.g;
            h(b, a) = c.g;
            break;
        }
        case Scenario::III: {
            // g [|0_S1 1_S2 0_C><1_S1 0_S2 1_C| + h.c.] (x) I_B
            for (int bb = 0; bb < 2; ++bb) {
                const Eigen::Index a = basis_index({0, 1, 0, bb});
                const Eigen::Index b = basis_index({1, 0, 1, bb});
                h(a, b) = c.g;
                h(b, a) = c.g;
            }
            // k I_S12 (x) [|1_C 0_B><0_C 1_B| + h.c.]
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2) {
                    const Eigen::Index a = basis_index({s1, s2, 1, 0});
                    const Eigen::Index b = basis_index({s1, s2, 0, 1});
                    h(a, b) = c.k;
                    h(b, a) = c.k;
                }
            break;
        }
    }
    return h;
}

std::vector<JumpOperator> build_dissipators(const ScenarioConfig& c) {
    const int n = (c.scenario == Scenario::I) ? 3 : 4;
    std::vector<JumpOperator> jumps;
    const double omegas[2] = {c.omega_s1, c.omega_s2};
    const double gammas[2] = {c.gamma1, c.gamma2};
    for (int m = 0; m < 2; ++m) {
        const double nbar = bose_occupation(c.temperature, omegas[m]);
        jumps.push_back({embed(sigma_minus(), m, n), gammas[m] * (nbar + 1.0)});
        jumps.push_back({embed(sigma_plus(), m, n), gammas[m] * nbar});
    }
    return jumps;
}

DensityMatrix initial_state(const ScenarioConfig& c) {
    const auto labels = scenario_labels(c.scenario);
    const int n = static_cast<int>(labels.size());
    const Eigen::Index d = Eigen::Index(1) << n;
    ComplexVector psi = ComplexVector::Zero(d);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (c.initial_example == InitialExample::a) {
        if (c.scenario == Scenario::I)
            psi(basis_index({0, 1, 0})) = 1.0;
        else
            psi(basis_index({0, 1, 1, 0})) = 1.0;
    } else {
        // (|01> + |10>)_S12 / sqrt(2), (|0> + |1>)_C / sqrt(2) for II/III,
        // battery in |0>
        if (c.scenario == Scenario::I) {
            psi(basis_index({0, 1, 0})) = inv_sqrt2;
            psi(basis_index({1, 0, 0})) = inv_sqrt2;
        } else {
            for (int cc = 0; cc < 2; ++cc) {
                psi(basis_index({0, 1, cc, 0})) = 0.5;
                psi(basis_index({1, 0, cc, 0})) = 0.5;
            }
        }
    }
    return DensityMatrix::from_pure(psi, labels);
}

LindbladModel build_model(const ScenarioConfig& c) {
    const auto report = validate_config(c);
    if (!report.ok) throw ConfigError(report.message);
    LindbladModel model;
    model.config = c;
    model.labels = scenario_labels(c.scenario);
    model.h_free = build_free_hamiltonian(c);
    model.h_int = build_interaction(c);
    model.jump_ops = build_dissipators(c);
    const double comm = (model.h_free * model.h_int - model.h_int * model.h_free)
                            .cwiseAbs()
                            .maxCoeff();
    if (comm > 1e-10)
        throw ContractError("interaction does not commute with the free "
                            "Hamiltonian (norm " + std::to_string(comm) + ")");
    return model;
}

}  // namespace qbatt

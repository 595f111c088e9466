// model.hpp — translates a scenario configuration into concrete operators:
// free Hamiltonians, the scenario's resonant interaction, thermal jump
// operators with Bose occupations, and the two reference initial states.

#pragma once

#include "qbatt/qcore.hpp"

namespace qbatt {

enum class Scenario { I, II, III };
enum class InitialExample { a, b };

std::string to_string(Scenario s);
std::string to_string(InitialExample e);
Scenario scenario_from_string(const std::string& s);
InitialExample example_from_string(const std::string& s);

// All physical parameters, in units with hbar = k_B = 1. The scenario fixes
// which frequencies are meaningful: omega_c is ignored for scenario I and k
// for scenarios I and II.
struct ScenarioConfig {
    Scenario scenario = Scenario::I;
    InitialExample initial_example = InitialExample::a;
    double omega_s1 = 5.0;
    double omega_s2 = 10.0;
    double omega_c = 0.0;  // filled per scenario by default_config
    double omega_b = 0.0;
    double g = 0.5;
    double k = 0.0;
    double gamma1 = 0.05;
    double gamma2 = 0.1;
    double temperature = 5.0;
};

// Paper defaults: omega_s2 = 10, omega_s1 = 5, T = omega_s1,
// gamma_m = 0.01 omega_sm, g = 0.05 omega_s2, k = 0.03 omega_c, and the
// scenario's resonant omega_c/omega_b assignment.
ScenarioConfig default_config(Scenario scenario,
                              InitialExample example = InitialExample::a);

struct ValidationReport {
    bool ok = true;
    std::string message;
};

// Scenario resonance conditions (relative tolerance 1e-12):
//   I:   omega_b = omega_s2 - omega_s1
//   II:  omega_s2 - omega_s1 = omega_b - omega_c, omega_b > omega_c
//   III: omega_b = omega_c = omega_s2 - omega_s1
// plus omega_s2 > omega_s1 everywhere. Scenario II is the energy-conserving
// form: the common flip |0 1 1_C 0_B> <-> |1 0 0_C 1_B| exchanges the S12
// excitation gap into the battery on top of the charger quantum.
ValidationReport validate_resonance(const ScenarioConfig& config);

// Full parameter validation: resonance plus positivity and the weak-coupling
// guards (gamma_m <= 0.1 omega_sm, g <= 0.1 omega_s2).
ValidationReport validate_config(const ScenarioConfig& config);

struct JumpOperator {
    ComplexMatrix op;
    double rate = 0.0;
};

struct LindbladModel {
    ComplexMatrix h_free;
    ComplexMatrix h_int;
    std::vector<JumpOperator> jump_ops;
    std::vector<Subsystem> labels;
    ScenarioConfig config;

    Eigen::Index dim() const { return h_free.rows(); }
};

// Mean thermal occupation 1/(exp(omega/T) - 1); zero at T = 0.
double bose_occupation(double temperature, double omega);

std::vector<Subsystem> scenario_labels(Scenario scenario);

ComplexMatrix build_free_hamiltonian(const ScenarioConfig& config);
ComplexMatrix build_interaction(const ScenarioConfig& config);

// Four entries: sigma- and sigma+ on each reservoir qubit, with rates
// gamma_m (nbar_m + 1) and gamma_m nbar_m evaluated at omega_sm.
std::vector<JumpOperator> build_dissipators(const ScenarioConfig& config);

DensityMatrix initial_state(const ScenarioConfig& config);

// Assembles the model and verifies [h_free, h_int] = 0 to 1e-10.
LindbladModel build_model(const ScenarioConfig& config);

}  // namespace qbatt

// thermo.hpp — per-sample thermodynamic observables along a trajectory:
// stored energy, ergotropy and its population/coherence split, relative
// entropy of coherence, free energies, mutual informations, the correlation
// exchange delta_C, ergotropy bounds, and charging power.

#pragma once

#include "qbatt/dynamics.hpp"

namespace qbatt {

struct ThermoRecord {
    double t = 0.0;
    double E_B = 0.0;
    double ergotropy = 0.0;
    double ergo_pop = 0.0;
    double ergo_coh = 0.0;
    double power = 0.0;
    double C_S12 = 0.0;  // pair coherence C(rho_S1S2)
    double C_C = 0.0;    // 0 in scenario I
    double C_B = 0.0;
    double C_S = 0.0;    // global coherence
    double I_S = 0.0;    // per-qubit mutual information
    double I_S_deph = 0.0;
    double delta_C = 0.0;
    double W_B = 0.0;  // coherence free energy of the battery
    double bound_lo = 0.0;
    double bound_hi = 0.0;
    double trace_err = 0.0;
    double min_eig = 0.0;
    bool bounds_ok = true;
};

double stored_energy(const DensityMatrix& rho_B, double omega_B);

struct ErgotropyResult {
    double value = 0.0;
    DensityMatrix passive_state;
};

// Max work extractable by unitaries; the passive state carries the larger
// eigenvalue on the ground level.
ErgotropyResult ergotropy(const DensityMatrix& rho_B, double omega_B);

struct ErgotropySplit {
    double population = 0.0;
    double coherence = 0.0;
};

// population part from the dephased state's passive energy; coherence part
// is the remainder (never clamped).
ErgotropySplit ergotropy_split(const DensityMatrix& rho_B, double omega_B);

// S(dephased) - S(rho), in bits, dephasing in the computational basis.
double rel_entropy_coherence(const DensityMatrix& rho);

// T times the relative entropy of coherence (k_B = 1, bits); cross-checked
// against the free-energy difference route to 1e-9.
double coherence_free_energy(const DensityMatrix& rho, double temperature);

struct MutualInformation {
    double total = 0.0;     // I_S over per-qubit marginals
    double dephased = 0.0;  // same functional on the fully dephased state
};

MutualInformation mutual_information(const DensityMatrix& rho_S);

// Correlation exchange: C(rho_S) - sum of per-qubit coherences. Computes the
// mutual-information route independently and cross-asserts to 1e-9.
double delta_coherence(const DensityMatrix& rho_S);

// bound_lo = ergo_pop, bound_hi = T C_B + ergo_pop; flags any violation of
// 0 <= ergo_coh <= T C_B or bound_lo <= ergotropy <= bound_hi beyond 1e-9.
bool ergotropy_bounds(ThermoRecord& record, double temperature);

// ergotropy / t, defined as 0 at t = 0.
double charging_power(double ergotropy_value, double t);

std::vector<ThermoRecord> evaluate_trajectory(const Trajectory& traj,
                                              double temperature);

}  // namespace qbatt

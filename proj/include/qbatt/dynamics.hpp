// dynamics.hpp — master-equation integration: adaptive embedded Runge-Kutta
// on the density matrix, plus an exact-propagator oracle built from the
// vectorized Liouvillian exponential.

#pragma once

#include "qbatt/model.hpp"

namespace qbatt {

struct Trajectory {
    std::vector<double> times;  // uniform grid starting at 0
    std::vector<DensityMatrix> states;
    LindbladModel model;
};

struct StateReport {
    double trace_err = 0.0;
    double herm_defect = 0.0;
    double min_eig = 0.0;

    bool pass(const StateTolerances& tol = {}) const {
        return trace_err <= tol.trace && herm_defect <= tol.hermiticity &&
               min_eig >= tol.min_eigenvalue;
    }
};

StateReport validate_state(const ComplexMatrix& rho);

// -i [h_free + h_int, rho] + sum_j rate_j (L rho L+ - 1/2 {L+L, rho}).
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);

// Column-stacking vectorization: d^2 x d^2 generator with
// vec(d rho/dt) = L vec(rho). Built only for the oracle and small tests.
ComplexMatrix liouvillian_matrix(const LindbladModel& model);

// exp(L t) applied to the vectorized state, devectorized.
DensityMatrix oracle_propagate(const LindbladModel& model,
                               const DensityMatrix& rho0, double t);

struct IntegrationOutcome {
    Trajectory trajectory;  // samples accumulated before any failure
    bool completed = true;
    double fail_time = 0.0;
    std::string error;
};

// Dormand-Prince 5(4) with error-per-unit-step control. Samples land exactly
// on the uniform grid k * sample_dt; every sample must pass validate_state.
// Initial step sample_dt/10, maximum step sample_dt. tol must lie in
// [1e-12, 1e-6]. Keeps the partial trajectory on failure.
IntegrationOutcome integrate_partial(const LindbladModel& model,
                                     const DensityMatrix& rho0, double t_max,
                                     double sample_dt, double tol = 1e-9);

// As above but throws IntegratorError with the offending time on failure.
Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     double t_max, double sample_dt, double tol = 1e-9);

// Convenience overload starting from the config's initial state.
Trajectory integrate(const LindbladModel& model, double t_max,
                     double sample_dt, double tol = 1e-9);

}  // namespace qbatt

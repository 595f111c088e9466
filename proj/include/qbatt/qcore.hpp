// qcore.hpp — dense complex matrix algebra for multi-qubit density matrices:
// tensor products, partial traces, spectral decomposition, entropies, dephasing.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbatt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Configuration problems (bad labels, bad parameters).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical-contract violations (non-Hermitian input, broken identities).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration failures (tolerance, trace drift, PSD loss).
struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Subsystem { S1, S2, C, B };

std::string to_string(Subsystem s);

// Tolerances shared by state validation everywhere in the artifact.
struct StateTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-9;
    double min_eigenvalue = -1e-8;
};

// Eigenvalues below this contribute exactly zero to entropies; eigenvalues
// below StateTolerances::min_eigenvalue abort as an integrator failure.
inline constexpr double kEigenvalueClamp = 1e-12;

// Hermitian, unit-trace, PSD matrix on a labeled tensor factorization of
// qubits. Construction validates against the tolerances and stores the
// Hermitian part, so matrix() is exactly Hermitian afterwards. The trace is
// never renormalized and eigenvalues are never clamped in the stored matrix.
class DensityMatrix {
public:
    DensityMatrix(ComplexMatrix m, std::vector<Subsystem> labels,
                  StateTolerances tol = {});

    static DensityMatrix from_pure(const ComplexVector& psi,
                                   std::vector<Subsystem> labels);

    const ComplexMatrix& matrix() const { return matrix_; }
    const std::vector<Subsystem>& labels() const { return labels_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    int num_qubits() const { return static_cast<int>(labels_.size()); }

    bool has_label(Subsystem s) const;
    int label_index(Subsystem s) const;  // position in the tensor order

private:
    ComplexMatrix matrix_;
    std::vector<Subsystem> labels_;
};

struct Spectrum {
    RealVector eigenvalues;      // ascending
    ComplexMatrix eigenvectors;  // orthonormal columns, same order
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced state over `keep`, preserving the original label order.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<Subsystem>& keep);

// Same reduction on a raw matrix with an explicit qubit label list.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                   const std::vector<Subsystem>& labels,
                                   const std::vector<Subsystem>& keep);

Spectrum hermitian_eig(const ComplexMatrix& m, double herm_tol = 1e-10);

// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);
double entropy_of_eigenvalues(const RealVector& eigenvalues);

// Projection onto the computational product basis (off-diagonals zeroed).
DensityMatrix dephase(const DensityMatrix& rho);
ComplexMatrix dephase_matrix(const ComplexMatrix& m);

// exp(m) for an arbitrary complex square matrix (Liouvillians included).
ComplexMatrix matrix_exp(const ComplexMatrix& m);

// Single-qubit operators in the (|0>, |1>) basis, |1> excited.
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix sigma_z();
ComplexMatrix number_op();
ComplexMatrix identity(Eigen::Index d);

// op acting on qubit `pos` of an n-qubit register, identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, int pos, int n_qubits);

}  // namespace qbatt

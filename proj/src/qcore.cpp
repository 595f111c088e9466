#include "qbatt/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qbatt {

std::string to_string(Subsystem s) {
    switch (s) {
        case Subsystem::S1: return "S1";
        case Subsystem::S2: return "S2";
        case Subsystem::C: return "C";
        case Subsystem::B: return "B";
    }
    return "?";
}

DensityMatrix::DensityMatrix(ComplexMatrix m, std::vector<Subsystem> labels,
                             StateTolerances tol)
    : labels_(std::move(labels)) {
    if (m.rows() != m.cols())
        throw ContractError("density matrix must be square");
    const Eigen::Index d = Eigen::Index(1) << labels_.size();
    if (m.rows() != d)
        throw ContractError("density matrix dimension " + std::to_string(m.rows()) +
                            " does not match " + std::to_string(labels_.size()) +
                            " qubit labels");
    const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > tol.hermiticity)
        throw ContractError("hermiticity defect " + std::to_string(herm_defect) +
                            " exceeds tolerance");
    const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_err > tol.trace)
        throw ContractError("trace error " + std::to_string(trace_err) +
                            " exceeds tolerance");
    matrix_ = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_,
                                                    Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < tol.min_eigenvalue)
        throw ContractError("minimum eigenvalue " + std::to_string(min_eig) +
                            " below PSD tolerance");
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi,
                                       std::vector<Subsystem> labels) {
    const double n2 = psi.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-12)
        throw ContractError("pure state vector is not normalized");
    return DensityMatrix(psi * psi.adjoint(), std::move(labels));
}

bool DensityMatrix::has_label(Subsystem s) const {
    for (auto l : labels_)
        if (l == s) return true;
    return false;
}

int DensityMatrix::label_index(Subsystem s) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == s) return static_cast<int>(i);
    throw ConfigError("unknown subsystem label " + to_string(s));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw ContractError("kron requires square factors");
    const Eigen::Index da = a.rows(), db = b.rows();
    ComplexMatrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a(i, j) * b;
    return out;
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                   const std::vector<Subsystem>& labels,
                                   const std::vector<Subsystem>& keep) {
    if (keep.empty())
        throw ConfigError("partial_trace: keep set is empty");
    const int n = static_cast<int>(labels.size());
    std::vector<int> keep_pos;
    for (auto s : keep) {
        int idx = -1;
        for (int i = 0; i < n; ++i)
            if (labels[i] == s) idx = i;
        if (idx < 0)
            throw ConfigError("partial_trace: unknown label " + to_string(s));
        keep_pos.push_back(idx);
    }
    std::sort(keep_pos.begin(), keep_pos.end());
    std::vector<int> trace_pos;
    for (int i = 0; i < n; ++i)
        if (std::find(keep_pos.begin(), keep_pos.end(), i) == keep_pos.end())
            trace_pos.push_back(i);

    const int nk = static_cast<int>(keep_pos.size());
    const int nt = n - nk;
    const Eigen::Index dk = Eigen::Index(1) << nk;
    const Eigen::Index dt = Eigen::Index(1) << nt;
    // qubit i occupies bit (n-1-i) of the basis index (first label most
    // significant)
    auto compose = [&](Eigen::Index kept, Eigen::Index traced) {
        Eigen::Index full = 0;
        for (int i = 0; i < nk; ++i) {
            const Eigen::Index bit = (kept >> (nk - 1 - i)) & 1;
            full |= bit << (n - 1 - keep_pos[i]);
        }
        for (int i = 0; i < nt; ++i) {
            const Eigen::Index bit = (traced >> (nt - 1 - i)) & 1;
            full |= bit << (n - 1 - trace_pos[i]);
        }
        return full;
    };

    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b) {
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < dt; ++t)
                sum += m(compose(a, t), compose(b, t));
            out(a, b) = sum;
        }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<Subsystem>& keep) {
    ComplexMatrix reduced = partial_trace_matrix(rho.matrix(), rho.labels(), keep);
    std::vector<Subsystem> kept_labels;
    for (auto l : rho.labels())
        for (auto s : keep)
            if (l == s) kept_labels.push_back(l);
    return DensityMatrix(std::move(reduced), std::move(kept_labels));
}

Spectrum hermitian_eig(const ComplexMatrix& m, double herm_tol) {
    if (m.rows() != m.cols())
        throw ContractError("hermitian_eig requires a square matrix");
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > herm_tol)
        throw ContractError("hermitian_eig: input hermiticity defect " +
                            std::to_string(defect));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success)
        throw ContractError("hermitian_eig: eigensolver failed");
    return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

double entropy_of_eigenvalues(const RealVector& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double p = eigenvalues[i];
        if (p < StateTolerances{}.min_eigenvalue)
            throw IntegratorError("entropy: eigenvalue " + std::to_string(p) +
                                  " below PSD tolerance");
        if (p > kEigenvalueClamp) s -= p * std::log2(p);
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(),
                                                    Eigen::EigenvaluesOnly);
    return entropy_of_eigenvalues(es.eigenvalues());
}

ComplexMatrix dephase_matrix(const ComplexMatrix& m) {
    return m.diagonal().asDiagonal();
}

DensityMatrix dephase(const DensityMatrix& rho) {
    return DensityMatrix(dephase_matrix(rho.matrix()), rho.labels());
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw ContractError("matrix_exp requires a square matrix");
    return m.exp();
}

ComplexMatrix sigma_plus() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(1, 0) = 1.0;
    return s;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

ComplexMatrix sigma_z() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

ComplexMatrix number_op() {
    ComplexMatrix n = ComplexMatrix::Zero(2, 2);
    n(1, 1) = 1.0;
    return n;
}

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix embed(const ComplexMatrix& op, int pos, int n_qubits) {
    ComplexMatrix out = (pos == 0) ? op : identity(2);
    for (int i = 1; i < n_qubits; ++i)
        out = kron(out, (i == pos) ? op : identity(2));
    return out;
}

}  // namespace qbatt

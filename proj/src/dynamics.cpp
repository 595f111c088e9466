#include "qbatt/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <cmath>
#include <sstream>

namespace qbatt {

namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;

const Complex kImag(0.0, 1.0);

// Jump operators here are single-qubit embeddings, so sparse products keep
// the right-hand side at two dense multiplies per evaluation.
struct Generator {
    ComplexMatrix h;
    std::vector<SparseOp> jumps;       // L_j
    std::vector<SparseOp> jumps_dag;   // L_j+
    std::vector<SparseOp> norms;       // L_j+ L_j
    std::vector<double> rates;
    ComplexMatrix tmp1, tmp2;

    explicit Generator(const LindbladModel& model)
        : h(model.h_free + model.h_int) {
        for (const auto& [op, rate] : model.jump_ops) {
            jumps.push_back(op.sparseView());
            jumps_dag.push_back(op.adjoint().sparseView());
            norms.push_back((op.adjoint() * op).sparseView());
            rates.push_back(rate);
        }
        tmp1.resize(h.rows(), h.cols());
        tmp2.resize(h.rows(), h.cols());
    }

    void eval(const ComplexMatrix& rho, ComplexMatrix& out) {
        out.noalias() = -kImag * (h * rho);
        out.noalias() += kImag * (rho * h);
        for (std::size_t j = 0; j < jumps.size(); ++j) {
            if (rates[j] == 0.0) continue;
            tmp1 = jumps[j] * rho;
            tmp2 = tmp1 * jumps_dag[j];
            out += rates[j] * tmp2;
            tmp1 = norms[j] * rho;
            tmp2 = rho * norms[j];
            out -= (0.5 * rates[j]) * (tmp1 + tmp2);
        }
    }
};

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33,
                 A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// b - b*: weights of the embedded 4th-order error estimate
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

class DormandPrince {
public:
    DormandPrince(Generator& gen, const ComplexMatrix& y0, double tol)
        : gen_(gen), y_(y0), tol_(tol) {
        const Eigen::Index d = y0.rows();
        for (ComplexMatrix* m : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_,
                                 &ytmp_, &ynew_, &err_})
            m->resize(d, d);
        gen_.eval(y_, k1_);
    }

    const ComplexMatrix& state() const { return y_; }
    double time() const { return t_; }

    // Advance to exactly t_target.
    void advance(double t_target, double h_init, double h_max) {
        if (h_ <= 0.0) h_ = h_init;
        while (t_ < t_target) {
            double h = std::min({h_, h_max, t_target - t_});
            if (h < 1e-14 * std::max(1.0, std::abs(t_)))
                throw IntegratorError("step size underflow at t = " +
                                      std::to_string(t_));
            if (!try_step(h)) continue;
            t_ = (std::abs(t_ + h - t_target) < 1e-12 * std::max(1.0, t_target))
                     ? t_target
                     : t_ + h;
            y_.swap(ynew_);
            k1_.swap(k7_);  // first-same-as-last
        }
    }

private:
    // One attempt at step size h; shrinks h_ and reports false on rejection.
    bool try_step(double h) {
        ytmp_.noalias() = y_ + (h * A21) * k1_;
        gen_.eval(ytmp_, k2_);
        ytmp_.noalias() = y_ + (h * A31) * k1_ + (h * A32) * k2_;
        gen_.eval(ytmp_, k3_);
        ytmp_.noalias() = y_ + (h * A41) * k1_ + (h * A42) * k2_ + (h * A43) * k3_;
        gen_.eval(ytmp_, k4_);
        ytmp_.noalias() = y_ + (h * A51) * k1_ + (h * A52) * k2_ +
                          (h * A53) * k3_ + (h * A54) * k4_;
        gen_.eval(ytmp_, k5_);
        ytmp_.noalias() = y_ + (h * A61) * k1_ + (h * A62) * k2_ +
                          (h * A63) * k3_ + (h * A64) * k4_ + (h * A65) * k5_;
        gen_.eval(ytmp_, k6_);
        ynew_.noalias() = y_ + (h * B1) * k1_ + (h * B3) * k3_ + (h * B4) * k4_ +
                          (h * B5) * k5_ + (h * B6) * k6_;
        gen_.eval(ynew_, k7_);
        err_.noalias() = (h * E1) * k1_ + (h * E3) * k3_ + (h * E4) * k4_ +
                         (h * E5) * k5_ + (h * E6) * k6_ + (h * E7) * k7_;

        // error per unit step, scaled by 1 + |y|
        double ratio = 0.0;
        for (Eigen::Index c = 0; c < err_.cols(); ++c)
            for (Eigen::Index r = 0; r < err_.rows(); ++r) {
                const double sc = 1.0 + std::abs(ynew_(r, c));
                ratio = std::max(ratio, std::abs(err_(r, c)) / sc);
            }
        ratio /= (tol_ * h);

        const double factor =
            (ratio > 0.0) ? 0.9 * std::pow(ratio, -0.25) : 5.0;
        h_ = h * std::clamp(factor, 0.2, 5.0);
        return ratio <= 1.0;
    }

    Generator& gen_;
    ComplexMatrix y_;
    double tol_;
    double t_ = 0.0;
    double h_ = 0.0;
    ComplexMatrix k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, err_;
};

}  // namespace

StateReport validate_state(const ComplexMatrix& rho) {
    StateReport rep;
    rep.trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    rep.herm_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        ComplexMatrix(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
    rep.min_eig = es.eigenvalues().minCoeff();
    return rep;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim())
        throw ContractError("lindblad_rhs: state dimension " +
                            std::to_string(rho.rows()) +
                            " does not match model dimension " +
                            std::to_string(model.dim()));
    const ComplexMatrix h = model.h_free + model.h_int;
    ComplexMatrix out = -kImag * (h * rho - rho * h);
    for (const auto& [op, rate] : model.jump_ops) {
        if (rate == 0.0) continue;
        const ComplexMatrix n = op.adjoint() * op;
        out += rate * (op * rho * op.adjoint() - 0.5 * (n * rho + rho * n));
    }
    return out;
}

ComplexMatrix liouvillian_matrix(const LindbladModel& model) {
    const Eigen::Index d = model.dim();
    const ComplexMatrix h = model.h_free + model.h_int;
    const ComplexMatrix id = identity(d);
    ComplexMatrix liou = -kImag * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& [op, rate] : model.jump_ops) {
        if (rate == 0.0) continue;
        const ComplexMatrix n = op.adjoint() * op;
        liou += rate * (kron(op.conjugate(), op) - 0.5 * kron(id, n) -
                        0.5 * kron(n.transpose(), id));
    }
    return liou;
}

DensityMatrix oracle_propagate(const LindbladModel& model,
                               const DensityMatrix& rho0, double t) {
    if (t < 0.0) throw ContractError("oracle_propagate: t must be nonnegative");
    const Eigen::Index d = model.dim();
    if (rho0.dim() != d)
        throw ContractError("oracle_propagate: state/model dimension mismatch");
    const ComplexMatrix prop = matrix_exp(liouvillian_matrix(model) * t);
    ComplexVector vec = Eigen::Map<const ComplexVector>(rho0.matrix().data(), d * d);
    vec = prop * vec;
    ComplexMatrix out = Eigen::Map<const ComplexMatrix>(vec.data(), d, d);
    return DensityMatrix(std::move(out), rho0.labels());
}

IntegrationOutcome integrate_partial(const LindbladModel& model,
                                     const DensityMatrix& rho0, double t_max,
                                     double sample_dt, double tol) {
    if (t_max < 0.0) throw ConfigError("integrate: t_max must be nonnegative");
    if (sample_dt <= 0.0) throw ConfigError("integrate: sample_dt must be positive");
    if (tol < 1e-12 || tol > 1e-6)
        throw ConfigError("integrate: tol must lie in [1e-12, 1e-6]");
    if (rho0.dim() != model.dim())
        throw ContractError("integrate: state/model dimension mismatch");

    IntegrationOutcome out;
    Trajectory& traj = out.trajectory;
    traj.model = model;
    const auto n_samples =
        static_cast<std::size_t>(std::floor(t_max / sample_dt + 1e-9)) + 1;
    traj.times.reserve(n_samples);
    traj.states.reserve(n_samples);
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    Generator gen(model);
    DormandPrince stepper(gen, rho0.matrix(), tol);
    const StateTolerances tols;
    for (std::size_t i = 1; i < n_samples; ++i) {
        const double t = static_cast<double>(i) * sample_dt;
        try {
            stepper.advance(t, sample_dt / 10.0, sample_dt);
        } catch (const IntegratorError& e) {
            out.completed = false;
            out.fail_time = t;
            out.error = e.what();
            return out;
        }
        const StateReport rep = validate_state(stepper.state());
        if (!rep.pass(tols)) {
            std::ostringstream msg;
            msg << "state validity lost at t = " << t
                << " (trace_err " << rep.trace_err << ", herm_defect "
                << rep.herm_defect << ", min_eig " << rep.min_eig << ")";
            out.completed = false;
            out.fail_time = t;
            out.error = msg.str();
            return out;
        }
        traj.times.push_back(t);
        traj.states.emplace_back(stepper.state(), model.labels);
    }
    return out;
}

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0,
                     double t_max, double sample_dt, double tol) {
    IntegrationOutcome out =
        integrate_partial(model, rho0, t_max, sample_dt, tol);
    if (!out.completed) throw IntegratorError(out.error);
    return std::move(out.trajectory);
}

Trajectory integrate(const LindbladModel& model, double t_max,
                     double sample_dt, double tol) {
    return integrate(model, initial_state(model.config), t_max, sample_dt, tol);
}

}  // namespace qbatt

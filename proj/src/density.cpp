#include "sqed/errors.hpp"
#include "sqed/lindblad_dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace sqed {

int basis_index(int s1, int s2, int n, int photon_cutoff) {
    if ((s1 != 0 && s1 != 1) || (s2 != 0 && s2 != 1)) throw InvalidInput("atomic labels must be 0 or 1");
    if (n < 0 || n > photon_cutoff) throw InvalidInput("photon number outside the truncated basis");
    return (2 * s1 + s2) * (photon_cutoff + 1) + n;
}

JointDensityMatrix single_excitation_state(cplx a1, cplx a2, cplx a3, int photon_cutoff) {
    if (photon_cutoff < 1) throw InvalidInput("photon cutoff must be >= 1");
    const int dim = 4 * (photon_cutoff + 1);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(basis_index(0, 1, 0, photon_cutoff)) = a1;
    psi(basis_index(1, 0, 0, photon_cutoff)) = a2;
    psi(basis_index(1, 1, 1, photon_cutoff)) = a3;
    return psi * psi.adjoint();
}

JointDensityMatrix basis_projector(int s1, int s2, int n, int photon_cutoff) {
    const int dim = 4 * (photon_cutoff + 1);
    JointDensityMatrix rho = JointDensityMatrix::Zero(dim, dim);
    const int i = basis_index(s1, s2, n, photon_cutoff);
    rho(i, i) = 1.0;
    return rho;
}

ReducedAtomicState partial_trace_field(const JointDensityMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() % 4 != 0 || rho.rows() < 8)
        throw InvalidInput("joint density matrix must be square with dimension 4 (N + 1), N >= 1");
    const Eigen::Index block = rho.rows() / 4;
    ReducedAtomicState out = ReducedAtomicState::Zero();
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t)
            for (Eigen::Index n = 0; n < block; ++n) out(s, t) += rho(s * block + n, t * block + n);
    return out;
}

double wootters_concurrence(const ReducedAtomicState& rho_a) {
    if ((rho_a - rho_a.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidInput("reduced state is not Hermitian");
    const Eigen::Matrix4cd h = 0.5 * (rho_a + rho_a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition of the reduced state failed");
    const auto& lam = es.eigenvalues();
    if (lam.minCoeff() < -1e-8) throw InvalidInput("reduced state is not positive semidefinite");

    // rho = W W^+, dropping eigenvalues at rounding level so that rank-deficient
    // states do not pick up sqrt(rounding) noise.
    const double cut = 1e-14 * std::max(1.0, std::abs(h.trace().real()));
    Eigen::Matrix4cd W = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k)
        if (lam(k) > cut) W.col(k) = std::sqrt(lam(k)) * es.eigenvectors().col(k);

    Eigen::Matrix4cd spin_flip = Eigen::Matrix4cd::Zero();
    spin_flip(0, 3) = -1.0;
    spin_flip(3, 0) = -1.0;
    spin_flip(1, 2) = 1.0;
    spin_flip(2, 1) = 1.0;
    const Eigen::Matrix4cd tau = W.transpose() * spin_flip * W;
    const Eigen::Vector4d s = Eigen::JacobiSVD<Eigen::Matrix4cd>(tau).singularValues();
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double x_state_concurrence(const ReducedAtomicState& rho_a) {
    const double ee = rho_a(0, 0).real(), eg = rho_a(1, 1).real(), ge = rho_a(2, 2).real(), gg = rho_a(3, 3).real();
    const double a = std::abs(rho_a(1, 2)) - std::sqrt(std::max(0.0, ee * gg));
    const double b = std::abs(rho_a(0, 3)) - std::sqrt(std::max(0.0, eg * ge));
    return 2.0 * std::max({0.0, a, b});
}

double mean_photon(const JointDensityMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() % 4 != 0) throw InvalidInput("joint density matrix has bad shape");
    const Eigen::Index block = rho.rows() / 4;
    double n = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) n += static_cast<double>(i % block) * rho(i, i).real();
    return n;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    const Eigen::MatrixXcd d = rho - sigma;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace sqed

#pragma once

// Zero-temperature master equation for two atoms and one lossy field mode:
//   d rho / d tau = -i [H, rho] + gamma1 (2 a rho a^+ - a^+ a rho - rho a^+ a),
//   H = omega_f a^+ a + omega_at (s_z1 + s_z2) + sum_j chi_j (a s_+j + a^+ s_-j),
// with omega_at = 1 and s_z = +-1/2.
//
// Basis: index = (2 s1 + s2)(N + 1) + n, where s = 0 is the excited and s = 1 the
// ground atomic state and n = 0..N is the photon number. The reduced atomic
// matrix is ordered (ee, eg, ge, gg).
//
// Phase convention: with this Hamiltonian the single-excitation state is
// a1 |eg,0> + a2 |ge,0> + a3 |gg,1>, where (a1, a2, a3) = (C1*, C2*, -C3*) in
// terms of the amplitudes of lossless_dynamics.hpp. Populations, |coherences|,
// concurrence and <n> are identical in both conventions.

#include "sqed/wave_basis.hpp"

#include <Eigen/Core>

#include <vector>

namespace sqed {

struct SystemSpec {
    double omega_f = 1.0;  ///< field frequency in units of omega_at
    double omega_at = 1.0;
    double chi1 = 0.0;
    double chi2 = 0.0;
    double gamma1 = 0.0;
    int photon_cutoff = 2;  ///< N_max

    void validate() const;
    int dimension() const { return 4 * (photon_cutoff + 1); }
};

using JointDensityMatrix = Eigen::MatrixXcd;
using ReducedAtomicState = Eigen::Matrix4cd;

/// Basis index of |s1, s2, n> (s = 0 excited, s = 1 ground).
int basis_index(int s1, int s2, int n, int photon_cutoff);

/// |psi><psi| for psi = a1 |eg,0> + a2 |ge,0> + a3 |gg,1>.
JointDensityMatrix single_excitation_state(cplx a1, cplx a2, cplx a3, int photon_cutoff);

/// |s1, s2, n><s1, s2, n|.
JointDensityMatrix basis_projector(int s1, int s2, int n, int photon_cutoff);

/// Hamiltonian and jump structure in sparse row form. Each row of the
/// annihilation operator has at most one entry.
class Generator {
public:
    explicit Generator(const SystemSpec& spec);

    const SystemSpec& spec() const { return spec_; }
    Eigen::MatrixXcd hamiltonian() const;
    Eigen::MatrixXcd annihilation() const;
    Eigen::MatrixXcd excitation_number() const;

    /// out = L(rho). `rho` must be Hermitian; out is Hermitian.
    void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

private:
    struct Entry {
        int col;
        double value;
    };
    SystemSpec spec_;
    int dim_;
    std::vector<std::vector<Entry>> h_rows_;
    std::vector<int> a_col_;      // column of the single entry of row i of a, or -1
    std::vector<double> a_val_;
    std::vector<double> photons_;  // a^+ a diagonal
    mutable Eigen::MatrixXcd work_;
};

/// Builds the generator and checks [H, N_exc] = 0 (norm < 1e-12).
Generator build_generator(const SystemSpec& spec);

struct EvolveOptions {
    double dt = 1e-3;
    bool check_halving = true;  ///< rerun at dt/2 and compare concurrence
    bool keep_states = true;
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<JointDensityMatrix> states;  ///< empty unless keep_states
    std::vector<double> concurrence, tangle, mean_photon, trace, min_eigenvalue;
    std::vector<double> concurrence_x_state;
    double max_trace_drift = 0.0;          ///< over every step
    double max_hermiticity_defect = 0.0;   ///< before each re-symmetrization
    double max_high_photon_population = 0.0;  ///< populations with n > 1
    double halving_change = 0.0;           ///< sup |dC| against the dt/2 run
    bool step_converged = true;            ///< halving_change < 1e-7
};

/// Fixed-step RK4 with rho <- (rho + rho^+)/2 after every step. Throws
/// NumericalError if the minimum eigenvalue at an output sample drops below -1e-6.
DensityTrajectory evolve(const SystemSpec& spec, const JointDensityMatrix& rho0, const std::vector<double>& time_grid,
                         const EvolveOptions& options = {});

ReducedAtomicState partial_trace_field(const JointDensityMatrix& rho);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4). The l_i are the singular
/// values of W^T (sy x sy) W with rho = W W^+ taken from the eigen-decomposition
/// of rho; they equal the square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
/// Rejects inputs that are not Hermitian or have eigenvalues below -1e-8.
double wootters_concurrence(const ReducedAtomicState& rho_a);

/// X-state closed form: 2 max(0, |rho_eg,ge| - sqrt(rho_ee rho_gg), |rho_ee,gg| - sqrt(rho_eg rho_ge)).
double x_state_concurrence(const ReducedAtomicState& rho_a);

/// Tr(rho a^+ a).
double mean_photon(const JointDensityMatrix& rho);

/// Trace norm distance (1/2) ||rho - sigma||_1.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

}  // namespace sqed

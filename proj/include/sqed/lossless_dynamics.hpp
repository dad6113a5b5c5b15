#pragma once

// Single-excitation dynamics of two atoms coupled to one lossless field
// mode, in dimensionless time tau = omega_at t.
//
// Amplitudes: C1 (atom 1 excited), C2 (atom 2 excited), C3 (field excited).
// With Gbar the 2x2 coupling matrix the atomic amplitudes obey
//   q'' - i dw q' + Gbar q = 0,   q = (C1, C2),  q(0) = (lambda, 1 - lambda),  q'(0) = 0.
// In the rank-one case Gbar = chi chi^T this reduces to
//   C1' = -i chi1 C3,  C2' = -i chi2 C3,  C3' - i dw C3 = -i (chi1 C1 + chi2 C2).

#include "sqed/layered_green.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace sqed {

struct DynamicsParams {
    CouplingMatrix coupling;
    double detuning = 0.0;  ///< (omega_f - omega_at) / omega_at
    int lambda0 = 1;        ///< 1: atom 1 starts excited, 0: atom 2 starts excited
    std::vector<double> time_grid;

    /// Throws InvalidInput unless lambda0 is 0 or 1 and the grid starts at 0
    /// and increases strictly.
    void validate() const;
};

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<cplx> c1, c2, c3;
    std::vector<double> norm;
    /// ODE oracle only: sup-norm change of (C1, C2, C3) when the step is halved.
    double halving_change = 0.0;
    bool step_converged = true;
};

struct SpectralDecomposition {
    std::array<cplx, 4> frequencies;
    std::array<Eigen::Vector2cd, 4> mode_amplitudes;  ///< (c_1j, c_2j)
    double condition_number = 0.0;                    ///< of the 4x4 initial-value system
};

/// Roots of (-w^2 + w dw)^2 + (-w^2 + w dw) Tr Gbar + det Gbar = 0, sorted by real part.
std::array<cplx, 4> eigenfrequencies(const CouplingMatrix& coupling, double detuning);

/// Mode amplitudes such that C_k(t) = sum_j c_kj exp(i w_j t) with the
/// initial conditions of `lambda0`. Throws NumericalError when the 4x4
/// system has condition number > 1e12 (repeated roots).
SpectralDecomposition spectral_decomposition(const CouplingMatrix& coupling, double detuning, int lambda0);

/// Closed-form solution for an arbitrary symmetric PSD Gbar. Each eigenmode of
/// Gbar evolves independently; the sinc form stays exact at repeated roots.
/// |C3|^2 is the occupation of the collective field modes, and the phase of C3
/// is taken from the mode belonging to the largest eigenvalue of Gbar, which
/// reproduces the rank-one C3 exactly.
AmplitudeTrajectory solve_general(const DynamicsParams& params);

/// Rank-one closed form with r(t) = (chi_l/chi^2) {e^{i dw t/2}[i dw/(2 W) sin Wt - cos Wt] + 1},
/// W^2 = dw^2/4 + chi1^2 + chi2^2, chi_l = chi1 lambda + chi2 (1 - lambda).
AmplitudeTrajectory solve_factored(double chi1, double chi2, double detuning, int lambda0,
                                   const std::vector<double>& time_grid);

/// Fixed-step RK4 on (C1, C2, B1, B2), or on (C1, C2, C3) when Gbar is rank one
/// (rank_one_defect < 1e-12). Every output interval is split into equal steps
/// no longer than dt; the run is repeated at dt/2 to fill halving_change.
AmplitudeTrajectory ode_oracle(const DynamicsParams& params, double dt = 1e-3);

struct ConcurrenceSeries {
    std::vector<double> concurrence, tangle, mean_photon;
};

/// C = 2|C1 C2|, tangle C^2, <n> = |C3|^2.
ConcurrenceSeries concurrence_series(const AmplitudeTrajectory& traj);

/// Resonant (dw = 0, lambda = 1) closed form of the concurrence.
double resonant_concurrence(double chi1, double chi2, double t);

/// C(k, a) = 2 (a k / (1 + k^2)) |1 - a / (1 + k^2)| with k = chi2/chi1, a = 1 - cos(Wt).
double c_of_k_a(double k, double a);

struct OptimalK {
    double k1 = 0.0;
    std::optional<double> k2;  ///< present only for a >= 1
};

/// Stationary points of C(k, a) in k: k_{1,2} = sqrt((3a +- sqrt(9a^2 - 4a + 4)) / 2).
OptimalK optimal_k(double a);

/// C(chi1_i, chi2_j) at time t from the rank-one solution; nodes with a zero
/// coupling are exactly 0.
Eigen::MatrixXd concurrence_surface(const std::vector<double>& chi1_grid, const std::vector<double>& chi2_grid,
                                    double detuning, int lambda0, double t);

}  // namespace sqed

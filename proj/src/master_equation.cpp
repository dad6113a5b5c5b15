#include "sqed/errors.hpp"
#include "sqed/lindblad_dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace sqed {

namespace {

constexpr cplx kI{0.0, 1.0};

void validate_state(const JointDensityMatrix& rho, int dim) {
    if (rho.rows() != dim || rho.cols() != dim) throw InvalidInput("initial state has the wrong dimension");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidInput("initial state is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8) throw InvalidInput("initial state must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) throw InvalidInput("initial state is not positive semidefinite");
}

}  // namespace

void SystemSpec::validate() const {
    if (photon_cutoff < 1) throw InvalidInput("photon cutoff must be >= 1");
    if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) throw InvalidInput("gamma1 must be >= 0");
    if (!(omega_f > 0.0) || !std::isfinite(omega_f)) throw InvalidInput("omega_f must be > 0");
    if (!(omega_at > 0.0) || !std::isfinite(omega_at)) throw InvalidInput("omega_at must be > 0");
    if (!std::isfinite(chi1) || !std::isfinite(chi2)) throw InvalidInput("couplings must be finite");
}

Generator::Generator(const SystemSpec& spec) : spec_(spec) {
    spec_.validate();
    const int N = spec_.photon_cutoff;
    dim_ = spec_.dimension();
    h_rows_.assign(static_cast<std::size_t>(dim_), {});
    a_col_.assign(static_cast<std::size_t>(dim_), -1);
    a_val_.assign(static_cast<std::size_t>(dim_), 0.0);
    photons_.assign(static_cast<std::size_t>(dim_), 0.0);

    auto add = [&](int row, int col, double v) {
        if (v != 0.0) h_rows_[static_cast<std::size_t>(row)].push_back({col, v});
    };
    const double chi[2] = {spec_.chi1, spec_.chi2};
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            for (int n = 0; n <= N; ++n) {
                const int i = basis_index(s1, s2, n, N);
                const double sz = (s1 == 0 ? 0.5 : -0.5) + (s2 == 0 ? 0.5 : -0.5);
                add(i, i, spec_.omega_f * n + spec_.omega_at * sz);
                photons_[static_cast<std::size_t>(i)] = n;
                if (n >= 1) {
                    a_col_[static_cast<std::size_t>(basis_index(s1, s2, n - 1, N))] = i;
                    a_val_[static_cast<std::size_t>(basis_index(s1, s2, n - 1, N))] = std::sqrt(static_cast<double>(n));
                }
                // chi_j (a s+_j + a^+ s-_j): |g, n> <-> |e, n-1>.
                for (int atom = 0; atom < 2; ++atom) {
                    const int s_here = atom == 0 ? s1 : s2;
                    if (s_here == 1 && n >= 1) {
                        const int j = atom == 0 ? basis_index(0, s2, n - 1, N) : basis_index(s1, 0, n - 1, N);
                        const double v = chi[atom] * std::sqrt(static_cast<double>(n));
                        add(j, i, v);
                        add(i, j, v);
                    }
                }
            }
        }
    }
    work_.resize(dim_, dim_);
}

Eigen::MatrixXcd Generator::hamiltonian() const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (const auto& e : h_rows_[static_cast<std::size_t>(i)]) h(i, e.col) += e.value;
    return h;
}

Eigen::MatrixXcd Generator::annihilation() const {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        if (a_col_[static_cast<std::size_t>(i)] >= 0) a(i, a_col_[static_cast<std::size_t>(i)]) = a_val_[static_cast<std::size_t>(i)];
    return a;
}

Eigen::MatrixXcd Generator::excitation_number() const {
    const int N = spec_.photon_cutoff;
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            for (int n = 0; n <= N; ++n) {
                const int i = basis_index(s1, s2, n, N);
                x(i, i) = n + (s1 == 0 ? 0.5 : -0.5) + (s2 == 0 ? 0.5 : -0.5) + 1.0;
            }
    return x;
}

void Generator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    // work = H rho; rho H = work^+ for Hermitian rho.
    for (int c = 0; c < dim_; ++c) {
        for (int i = 0; i < dim_; ++i) {
            cplx s = 0.0;
            for (const auto& e : h_rows_[static_cast<std::size_t>(i)]) s += e.value * rho(e.col, c);
            work_(i, c) = s;
        }
    }
    const double g = spec_.gamma1;
    out.resize(dim_, dim_);
    for (int c = 0; c < dim_; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        for (int i = 0; i < dim_; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            cplx v = -kI * (work_(i, c) - std::conj(work_(c, i)));
            if (g != 0.0) {
                cplx jump = 0.0;
                if (a_col_[ui] >= 0 && a_col_[uc] >= 0) jump = a_val_[ui] * a_val_[uc] * rho(a_col_[ui], a_col_[uc]);
                v += g * (2.0 * jump - (photons_[ui] + photons_[uc]) * rho(i, c));
            }
            out(i, c) = v;
        }
    }
}

Generator build_generator(const SystemSpec& spec) {
    Generator gen(spec);
    const Eigen::MatrixXcd h = gen.hamiltonian();
    const Eigen::MatrixXcd x = gen.excitation_number();
    const double comm = (h * x - x * h).cwiseAbs().maxCoeff();
    if (comm >= 1e-12) throw NumericalError("Hamiltonian does not conserve the excitation number");
    return gen;
}

namespace {

DensityTrajectory run(const Generator& gen, const JointDensityMatrix& rho0, const std::vector<double>& grid, double dt,
                      bool keep_states) {
    const int dim = gen.spec().dimension();
    const int block = gen.spec().photon_cutoff + 1;
    DensityTrajectory tr;
    tr.times = grid;
    Eigen::MatrixXcd rho = rho0, k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

    auto record = [&](double t) {
        const ReducedAtomicState ra = partial_trace_field(rho);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < -1e-6) {
            std::ostringstream msg;
            msg << "density matrix lost positivity at tau=" << t << ": min eigenvalue " << min_eig
                << ", trace " << rho.trace().real();
            throw NumericalError(msg.str());
        }
        const double c = wootters_concurrence(ra);
        tr.concurrence.push_back(c);
        tr.tangle.push_back(c * c);
        tr.concurrence_x_state.push_back(x_state_concurrence(ra));
        tr.mean_photon.push_back(mean_photon(rho));
        tr.trace.push_back(rho.trace().real());
        tr.min_eigenvalue.push_back(min_eig);
        double high = 0.0;
        for (int i = 0; i < dim; ++i)
            if (i % block > 1) high += rho(i, i).real();
        tr.max_high_photon_population = std::max(tr.max_high_photon_population, std::abs(high));
        if (keep_states) tr.states.push_back(rho);
    };

    record(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double span = grid[i] - grid[i - 1];
        const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
        const double h = span / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            gen.apply(rho, k1);
            tmp = rho + 0.5 * h * k1;
            gen.apply(tmp, k2);
            tmp = rho + 0.5 * h * k2;
            gen.apply(tmp, k3);
            tmp = rho + h * k3;
            gen.apply(tmp, k4);
            rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tr.max_hermiticity_defect = std::max(tr.max_hermiticity_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
            tmp = 0.5 * (rho + rho.adjoint());
            rho = tmp;
            tr.max_trace_drift = std::max(tr.max_trace_drift, std::abs(rho.trace().real() - 1.0));
        }
        record(grid[i]);
    }
    return tr;
}

}  // namespace

DensityTrajectory evolve(const SystemSpec& spec, const JointDensityMatrix& rho0, const std::vector<double>& time_grid,
                         const EvolveOptions& options) {
    const Generator gen = build_generator(spec);
    validate_state(rho0, spec.dimension());
    if (time_grid.empty()) throw InvalidInput("time grid is empty");
    for (std::size_t i = 1; i < time_grid.size(); ++i)
        if (!(time_grid[i] > time_grid[i - 1])) throw InvalidInput("time grid must be strictly increasing");
    if (!(options.dt > 0.0)) throw InvalidInput("integration step must be > 0");

    DensityTrajectory tr = run(gen, rho0, time_grid, options.dt, options.keep_states);
    if (options.check_halving) {
        const DensityTrajectory fine = run(gen, rho0, time_grid, options.dt / 2.0, false);
        for (std::size_t i = 0; i < tr.concurrence.size(); ++i)
            tr.halving_change = std::max(tr.halving_change, std::abs(tr.concurrence[i] - fine.concurrence[i]));
        tr.step_converged = tr.halving_change < 1e-7;
    }
    return tr;
}

}  // namespace sqed

#include "parallel.hpp"
#include "sqed/errors.hpp"
#include "sqed/lossless_dynamics.hpp"

#include <cmath>

namespace sqed {

ConcurrenceSeries concurrence_series(const AmplitudeTrajectory& traj) {
    ConcurrenceSeries s;
    const std::size_t n = traj.times.size();
    s.concurrence.resize(n);
    s.tangle.resize(n);
    s.mean_photon.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = 2.0 * std::abs(traj.c1[i] * traj.c2[i]);
        s.concurrence[i] = c;
        s.tangle[i] = c * c;
        s.mean_photon[i] = std::norm(traj.c3[i]);
    }
    return s;
}

double resonant_concurrence(double chi1, double chi2, double t) {
    if (!(chi1 >= 0.0) || !(chi2 >= 0.0)) throw InvalidInput("couplings chi must be >= 0");
    if (chi1 == 0.0 && chi2 == 0.0) throw InvalidInput("resonant concurrence needs chi1 or chi2 nonzero");
    const double w2 = chi1 * chi1 + chi2 * chi2;
    const double a = 1.0 - std::cos(std::sqrt(w2) * t);
    return 2.0 * (chi1 * chi2 / w2) * std::abs(1.0 - chi1 * chi1 / w2 * a) * a;
}

double c_of_k_a(double k, double a) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("c_of_k_a needs k >= 0");
    if (!(a >= 0.0 && a <= 2.0)) throw DomainError("c_of_k_a needs 0 <= a <= 2");
    const double s = 1.0 + k * k;
    return 2.0 * (a * k / s) * std::abs(1.0 - a / s);
}

OptimalK optimal_k(double a) {
    if (!(a >= 0.0 && a <= 2.0)) throw DomainError("optimal_k needs 0 <= a <= 2");
    const double root = std::sqrt(9.0 * a * a - 4.0 * a + 4.0);
    OptimalK out;
    out.k1 = std::sqrt((3.0 * a + root) / 2.0);
    if (a >= 1.0) out.k2 = std::sqrt(std::max(0.0, (3.0 * a - root) / 2.0));
    return out;
}

Eigen::MatrixXd concurrence_surface(const std::vector<double>& chi1_grid, const std::vector<double>& chi2_grid,
                                    double detuning, int lambda0, double t) {
    for (const auto* grid : {&chi1_grid, &chi2_grid}) {
        if (grid->empty()) throw InvalidInput("surface grids must be non-empty");
        for (std::size_t i = 0; i < grid->size(); ++i) {
            if (!((*grid)[i] >= 0.0)) throw InvalidInput("surface grids must be >= 0");
            if (i > 0 && !((*grid)[i] > (*grid)[i - 1])) throw InvalidInput("surface grids must be ascending");
        }
    }
    if (!(t >= 0.0)) throw InvalidInput("surface time must be >= 0");
    const auto rows = static_cast<Eigen::Index>(chi1_grid.size());
    const auto cols = static_cast<Eigen::Index>(chi2_grid.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
    const std::vector<double> grid = t > 0.0 ? std::vector<double>{0.0, t} : std::vector<double>{0.0};
    detail::parallel_for(chi1_grid.size() * chi2_grid.size(), [&](std::size_t idx) {
        const std::size_t i = idx / chi2_grid.size();
        const std::size_t j = idx % chi2_grid.size();
        const double c1 = chi1_grid[i], c2 = chi2_grid[j];
        if (c1 == 0.0 || c2 == 0.0) return;
        const auto tr = solve_factored(c1, c2, detuning, lambda0, grid);
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 2.0 * std::abs(tr.c1.back() * tr.c2.back());
    });
    return out;
}

}  // namespace sqed

#include "modes.hpp"
#include "sqed/errors.hpp"
#include "sqed/lossless_dynamics.hpp"

#include <Eigen/Core>

#include <cmath>

namespace sqed {

namespace {

constexpr cplx kI{0.0, 1.0};

template <class Vec, class Rhs>
std::vector<Vec> rk4(const Rhs& f, Vec y, const std::vector<double>& grid, double dt) {
    std::vector<Vec> out;
    out.reserve(grid.size());
    out.push_back(y);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double span = grid[i] - grid[i - 1];
        const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
        const double h = span / static_cast<double>(std::max(1L, steps));
        for (long s = 0; s < std::max(1L, steps); ++s) {
            const Vec k1 = f(y);
            const Vec k2 = f(Vec(y + 0.5 * h * k1));
            const Vec k3 = f(Vec(y + 0.5 * h * k2));
            const Vec k4 = f(Vec(y + h * k3));
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(y);
    }
    return out;
}

AmplitudeTrajectory run(const DynamicsParams& p, double dt) {
    const double dw = p.detuning;
    const auto& g = p.coupling.g;
    AmplitudeTrajectory tr;
    tr.times = p.time_grid;

    if (p.coupling.rank_one_defect < 1e-12) {
        using V3 = Eigen::Matrix<cplx, 3, 1>;
        const double chi1 = std::sqrt(g(0, 0));
        const double chi2 = g(0, 1) < 0.0 ? -std::sqrt(g(1, 1)) : std::sqrt(g(1, 1));
        auto f = [&](const V3& y) {
            V3 d;
            d(0) = -kI * chi1 * y(2);
            d(1) = -kI * chi2 * y(2);
            d(2) = kI * dw * y(2) - kI * (chi1 * y(0) + chi2 * y(1));
            return d;
        };
        const V3 y0(cplx(p.lambda0), cplx(1 - p.lambda0), cplx(0.0));
        for (const auto& y : rk4(f, y0, p.time_grid, dt)) {
            tr.c1.push_back(y(0));
            tr.c2.push_back(y(1));
            tr.c3.push_back(y(2));
        }
    } else {
        // C' = -i B, B' = i dw B - i Gbar C with B(0) = 0.
        using V4 = Eigen::Matrix<cplx, 4, 1>;
        const Eigen::Matrix2cd G = g.cast<cplx>();
        auto f = [&](const V4& y) {
            V4 d;
            d.head<2>() = -kI * y.tail<2>();
            d.tail<2>() = kI * dw * y.tail<2>() - kI * (G * y.head<2>());
            return d;
        };
        const V4 y0(cplx(p.lambda0), cplx(1 - p.lambda0), cplx(0.0), cplx(0.0));
        // Field amplitude of mode k: v_k . B / sqrt(alpha_k).
        const auto modes = detail::coupling_modes(g);
        const double scale = std::max(std::abs(modes.alpha[0]), std::abs(modes.alpha[1]));
        const auto dom = static_cast<std::size_t>(modes.dominant);
        for (const auto& y : rk4(f, y0, p.time_grid, dt)) {
            std::array<cplx, 2> field{};
            for (std::size_t k = 0; k < 2; ++k)
                if (modes.alpha[k] > 1e-14 * scale)
                    field[k] = modes.v[k].cast<cplx>().dot(y.tail<2>()) / std::sqrt(modes.alpha[k]);
            const double mag = std::sqrt(std::norm(field[0]) + std::norm(field[1]));
            const cplx ref = std::abs(field[dom]) > 0.0 ? field[dom] : field[1 - dom];
            tr.c1.push_back(y(0));
            tr.c2.push_back(y(1));
            tr.c3.push_back(std::abs(ref) > 0.0 ? mag * ref / std::abs(ref) : cplx{0.0, 0.0});
        }
    }
    tr.norm.resize(tr.times.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        tr.norm[i] = std::norm(tr.c1[i]) + std::norm(tr.c2[i]) + std::norm(tr.c3[i]);
    return tr;
}

}  // namespace

AmplitudeTrajectory ode_oracle(const DynamicsParams& params, double dt) {
    params.validate();
    if (!(dt > 0.0)) throw InvalidInput("ODE step must be > 0");
    AmplitudeTrajectory coarse = run(params, dt);
    const AmplitudeTrajectory fine = run(params, dt / 2.0);
    double change = 0.0;
    for (std::size_t i = 0; i < coarse.times.size(); ++i) {
        change = std::max({change, std::abs(coarse.c1[i] - fine.c1[i]), std::abs(coarse.c2[i] - fine.c2[i]),
                           std::abs(coarse.c3[i] - fine.c3[i])});
    }
    AmplitudeTrajectory out = fine;
    out.halving_change = change;
    out.step_converged = change < 1e-8;
    return out;
}

}  // namespace sqed

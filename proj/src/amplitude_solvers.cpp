#include "modes.hpp"
#include "sqed/errors.hpp"
#include "sqed/lossless_dynamics.hpp"

#include <cmath>

namespace sqed {

namespace {

constexpr cplx kI{0.0, 1.0};

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidInput("time grid is empty");
    if (grid.front() != 0.0) throw InvalidInput("time grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidInput("time grid must be strictly increasing");
}

void validate_lambda(int lambda0) {
    if (lambda0 != 0 && lambda0 != 1) throw InvalidInput("lambda0 must be 0 or 1");
}

// sin(w t) / w, continuous through w = 0.
cplx sinc_t(cplx w, double t) {
    const cplx x = w * t;
    if (std::abs(x) < 1e-4) return t * (1.0 - x * x / 6.0);
    return std::sin(x) / w;
}

void fill_norm(AmplitudeTrajectory& tr) {
    tr.norm.resize(tr.times.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        tr.norm[i] = std::norm(tr.c1[i]) + std::norm(tr.c2[i]) + std::norm(tr.c3[i]);
}

}  // namespace

void DynamicsParams::validate() const {
    validate_lambda(lambda0);
    validate_grid(time_grid);
    if (!std::isfinite(detuning)) throw InvalidInput("detuning must be finite");
}

AmplitudeTrajectory solve_factored(double chi1, double chi2, double detuning, int lambda0,
                                   const std::vector<double>& time_grid) {
    if (!(chi1 >= 0.0) || !(chi2 >= 0.0)) throw InvalidInput("couplings chi must be >= 0");
    if (chi1 == 0.0 && chi2 == 0.0) throw InvalidInput("factored solution needs chi1 or chi2 nonzero");
    validate_lambda(lambda0);
    validate_grid(time_grid);

    const double lam = lambda0;
    const double chi_l = chi1 * lam + chi2 * (1.0 - lam);
    const double chi_sq = chi1 * chi1 + chi2 * chi2;
    const double omega = std::sqrt(detuning * detuning / 4.0 + chi_sq);

    AmplitudeTrajectory tr;
    tr.times = time_grid;
    for (double t : time_grid) {
        const cplx e = std::exp(kI * (detuning * t / 2.0));
        const double s = std::sin(omega * t);
        const cplx r = chi_l / chi_sq * (e * (kI * (detuning / (2.0 * omega)) * s - std::cos(omega * t)) + 1.0);
        tr.c1.push_back(-chi1 * r + lam);
        tr.c2.push_back(-chi2 * r + 1.0 - lam);
        tr.c3.push_back(-kI * (chi_l / omega) * e * s);
    }
    fill_norm(tr);
    return tr;
}

AmplitudeTrajectory solve_general(const DynamicsParams& params) {
    params.validate();
    auto modes = detail::coupling_modes(params.coupling.g);
    const double scale = std::max(std::abs(modes.alpha[0]), std::abs(modes.alpha[1]));
    for (auto& a : modes.alpha)
        if (std::abs(a) <= 1e-14 * scale) a = 0.0;

    const double dw = params.detuning;
    const Eigen::Vector2d q0(params.lambda0, 1 - params.lambda0);
    std::array<double, 2> y0{};
    std::array<cplx, 2> omega{}, root_alpha{};
    for (std::size_t k = 0; k < 2; ++k) {
        y0[k] = modes.v[k].dot(q0);
        omega[k] = std::sqrt(cplx(dw * dw / 4.0 + modes.alpha[k]));
        root_alpha[k] = std::sqrt(cplx(modes.alpha[k]));
    }
    const auto dom = static_cast<std::size_t>(modes.dominant);

    AmplitudeTrajectory tr;
    tr.times = params.time_grid;
    for (double t : params.time_grid) {
        const cplx e = std::exp(kI * (dw * t / 2.0));
        Eigen::Vector2cd q = Eigen::Vector2cd::Zero();
        std::array<cplx, 2> field{};
        for (std::size_t k = 0; k < 2; ++k) {
            const cplx s = sinc_t(omega[k], t);
            const cplx y = y0[k] * e * (std::cos(omega[k] * t) - kI * (dw / 2.0) * s);
            q += y * modes.v[k].cast<cplx>();
            field[k] = -kI * y0[k] * root_alpha[k] * e * s;
        }
        const double mag = std::sqrt(std::norm(field[0]) + std::norm(field[1]));
        const cplx ref = std::abs(field[dom]) > 0.0 ? field[dom] : field[1 - dom];
        tr.c1.push_back(q(0));
        tr.c2.push_back(q(1));
        tr.c3.push_back(std::abs(ref) > 0.0 ? mag * ref / std::abs(ref) : cplx{0.0, 0.0});
    }
    fill_norm(tr);
    return tr;
}

}  // namespace sqed

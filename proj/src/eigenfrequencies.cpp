#include "modes.hpp"
#include "sqed/errors.hpp"
#include "sqed/lossless_dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace sqed {

namespace detail {

CouplingModes coupling_modes(const Eigen::Matrix2d& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
    if (es.info() != Eigen::Success) throw NumericalError("coupling matrix eigen-decomposition failed");
    CouplingModes m;
    for (int k = 0; k < 2; ++k) {
        m.alpha[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
        Eigen::Vector2d v = es.eigenvectors().col(k);
        if (v.sum() < 0.0) v = -v;
        m.v[static_cast<std::size_t>(k)] = v;
    }
    m.dominant = 1;
    return m;
}

}  // namespace detail

namespace {

constexpr cplx kI{0.0, 1.0};

void sort_by_real(std::array<cplx, 4>& w) {
    std::stable_sort(w.begin(), w.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

}  // namespace

std::array<cplx, 4> eigenfrequencies(const CouplingMatrix& coupling, double detuning) {
    const double tr = coupling.g.trace();
    const double det = coupling.g.determinant();
    // u = -w^2 + w dw solves u^2 + Tr u + det = 0.
    const cplx disc = std::sqrt(cplx(tr * tr - 4.0 * det));
    const std::array<cplx, 2> u = {(-tr + disc) / 2.0, (-tr - disc) / 2.0};
    std::array<cplx, 4> w;
    for (std::size_t k = 0; k < 2; ++k) {
        const cplx root = std::sqrt(detuning * detuning / 4.0 - u[k]);
        w[2 * k] = detuning / 2.0 - root;
        w[2 * k + 1] = detuning / 2.0 + root;
    }
    sort_by_real(w);
    return w;
}

SpectralDecomposition spectral_decomposition(const CouplingMatrix& coupling, double detuning, int lambda0) {
    if (lambda0 != 0 && lambda0 != 1) throw InvalidInput("lambda0 must be 0 or 1");
    const auto modes = detail::coupling_modes(coupling.g);
    struct Mode {
        cplx w;
        Eigen::Vector2cd v;
    };
    std::array<Mode, 4> list;
    for (std::size_t k = 0; k < 2; ++k) {
        const cplx root = std::sqrt(cplx(detuning * detuning / 4.0 + modes.alpha[k]));
        const Eigen::Vector2cd v = modes.v[k].cast<cplx>();
        list[2 * k] = {detuning / 2.0 - root, v};
        list[2 * k + 1] = {detuning / 2.0 + root, v};
    }
    std::stable_sort(list.begin(), list.end(), [](const Mode& x, const Mode& y) {
        if (x.w.real() != y.w.real()) return x.w.real() < y.w.real();
        return x.w.imag() < y.w.imag();
    });

    // [v_j; i w_j v_j] x = [q0; 0]
    Eigen::Matrix4cd M;
    for (int j = 0; j < 4; ++j) {
        const auto& m = list[static_cast<std::size_t>(j)];
        M.block<2, 1>(0, j) = m.v;
        M.block<2, 1>(2, j) = kI * m.w * m.v;
    }
    Eigen::Vector4cd rhs;
    rhs << static_cast<double>(lambda0), static_cast<double>(1 - lambda0), 0.0, 0.0;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(M);
    const auto& sv = svd.singularValues();
    const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
    if (!(cond <= 1e12))
        throw NumericalError("mode-amplitude system is ill-conditioned (repeated eigenfrequencies), condition " +
                             std::to_string(cond));
    const Eigen::Vector4cd x = M.fullPivLu().solve(rhs);

    SpectralDecomposition out;
    out.condition_number = cond;
    for (std::size_t j = 0; j < 4; ++j) {
        out.frequencies[j] = list[j].w;
        out.mode_amplitudes[j] = x(static_cast<int>(j)) * list[j].v;
    }
    return out;
}

}  // namespace sqed

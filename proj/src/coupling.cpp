#include "sqed/errors.hpp"
#include "sqed/layered_green.hpp"

#include <cmath>
#include <limits>

namespace sqed {

CouplingMatrix CouplingMatrix::from_matrix(const Eigen::Matrix2d& g) {
    if (!g.allFinite()) throw InvalidInput("coupling matrix has non-finite entries");
    if (g(0, 1) != g(1, 0)) throw InvalidInput("coupling matrix must be symmetric");
    if (g(0, 0) < 0.0 || g(1, 1) < 0.0) throw InvalidInput("coupling matrix diagonal must be >= 0");
    CouplingMatrix c;
    c.g = g;
    c.chi1 = std::sqrt(g(0, 0));
    c.chi2 = std::sqrt(g(1, 1));
    const double diag = g(0, 0) * g(1, 1);
    c.rank_one_defect =
        std::abs(diag - g(0, 1) * g(0, 1)) / std::max(diag, std::numeric_limits<double>::epsilon());
    return c;
}

CouplingMatrix CouplingMatrix::from_chi(double chi1, double chi2) {
    if (!(chi1 >= 0.0) || !(chi2 >= 0.0)) throw InvalidInput("couplings chi must be >= 0");
    Eigen::Matrix2d g;
    g << chi1 * chi1, chi1 * chi2, chi1 * chi2, chi2 * chi2;
    CouplingMatrix c = from_matrix(g);
    c.chi1 = chi1;
    c.chi2 = chi2;
    return c;
}

CouplingMatrix coupling_matrix(const LayerStack& stack, const AtomPlacement& atom1, const AtomPlacement& atom2,
                               double omega_f, double scale, const GreenOptions& options) {
    if (!(scale > 0.0)) throw InvalidInput("coupling scale must be > 0");
    const AtomPlacement atoms[2] = {atom1, atom2};
    Eigen::Matrix2d g;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double im = green_phiphi(stack, atoms[i].position, atoms[j].position, omega_f, options).value.imag();
            g(i, j) = scale * atoms[i].dipole * atoms[j].dipole * im;
        }
    }
    for (int i = 0; i < 2; ++i)
        if (g(i, i) < 0.0) throw NumericalError("negative local density of states: Im G(a, a) < 0");
    const double off = 0.5 * (g(0, 1) + g(1, 0));
    const double spread = std::abs(g(0, 1) - g(1, 0));
    if (spread > 1e-8 * std::max(std::abs(off), std::numeric_limits<double>::min()))
        throw NumericalError("reciprocity violated: Gbar(1,2) and Gbar(2,1) differ by more than 1e-8 relative");
    g(0, 1) = g(1, 0) = off;
    return CouplingMatrix::from_matrix(g);
}

}  // namespace sqed

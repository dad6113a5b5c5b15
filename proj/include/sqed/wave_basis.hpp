#pragma once

// Special functions for spherical vector-wave expansions: spherical Bessel and
// Hankel functions of complex argument, Riccati-Bessel log-derivatives, and
// associated Legendre functions.
//
// Angular convention: associated Legendre functions carry the Condon-Shortley
// phase (-1)^m, so P_1^1(x) = -sqrt(1 - x^2). Every angular sum in the library
// uses these functions, so the phase cancels in the squared products that
// enter the Green tensor.

#include <complex>
#include <vector>

namespace sqed {

using cplx = std::complex<double>;

enum class Parity { even, odd };

/// Index triple (n, m, parity) of a spherical vector wave.
struct SphericalOrder {
    int n = 1;
    int m = 0;
    Parity parity = Parity::even;

    SphericalOrder() = default;
    SphericalOrder(int n_, int m_, Parity p);
};

enum class BesselKind { first, hankel1 };

/// j_n(z) or h_n^(1)(z).
cplx spherical_bessel(BesselKind kind, int n, cplx z);

/// j_0..j_nmax at z, by Miller's downward recurrence normalized on the closed
/// form of j_0 or j_1 (whichever is larger in modulus).
std::vector<cplx> spherical_bessel_j_table(int nmax, cplx z);

/// h^(1)_0..h^(1)_nmax at z by upward recurrence. Throws DomainError at z = 0.
std::vector<cplx> spherical_hankel1_table(int nmax, cplx z);

/// d/dz ln[z j_n(z)], evaluated by downward recurrence of the log-derivative.
cplx riccati_log_derivative(int n, cplx z);

/// Riccati-Bessel functions psi_n(z) = z j_n(z), xi_n(z) = z h_n(z) and their
/// z-derivatives for n = 1..nmax. Index 0 of each vector is n = 1.
struct RiccatiTable {
    std::vector<cplx> psi, dpsi, xi, dxi;
};
RiccatiTable riccati_table(int nmax, cplx z);

/// P_n^m(x), Condon-Shortley phase, forward recurrence in n.
double assoc_legendre(int n, int m, double x);

/// dP_n^m(cos theta)/dtheta.
double assoc_legendre_dtheta(int n, int m, double theta);

/// sqrt((n-m)!/(n+m)!) P_n^m(x); stays finite for n up to a few hundred.
double assoc_legendre_scaled(int n, int m, double x);

/// sqrt((n-m)!/(n+m)!) dP_n^m(cos theta)/dtheta.
double assoc_legendre_scaled_dtheta(int n, int m, double theta);

}  // namespace sqed

#include "sqed/wave_basis.hpp"

#include "sqed/errors.hpp"

#include <cmath>
#include <string>

namespace sqed {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_order(int n) {
    if (n < 0) throw DomainError("spherical function order must be >= 0, got " + std::to_string(n));
}

// Small-argument series j_n(z) ~ z^n/(2n+1)!! * (1 - z^2/(2(2n+3))).
std::vector<cplx> j_series(int nmax, cplx z) {
    std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
    cplx lead = 1.0;
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) lead *= z / static_cast<double>(2 * n + 1);
        out[static_cast<std::size_t>(n)] = lead * (1.0 - z * z / (2.0 * (2 * n + 3)));
    }
    return out;
}

int miller_start(int nmax, double az) {
    const double top = std::max(static_cast<double>(nmax), az);
    return static_cast<int>(top + 20.0 + 4.0 * std::cbrt(top)) + 5;
}

}  // namespace

SphericalOrder::SphericalOrder(int n_, int m_, Parity p) : n(n_), m(m_), parity(p) {
    if (n < 1) throw DomainError("spherical order n must be >= 1");
    if (m < 0 || m > n) throw DomainError("azimuthal order must satisfy 0 <= m <= n");
}

std::vector<cplx> spherical_bessel_j_table(int nmax, cplx z) {
    require_order(nmax);
    const double az = std::abs(z);
    if (az < 1e-8) return j_series(nmax, z);

    const int top = miller_start(std::max(nmax, 1), az);
    std::vector<cplx> out(static_cast<std::size_t>(std::max(nmax, 1)) + 1);
    cplx above = 0.0;
    cplx here = 1e-30;
    for (int k = top; k >= 1; --k) {
        // here = f_k, above = f_{k+1}
        cplx below = static_cast<double>(2 * k + 1) / z * here - above;
        above = here;
        here = below;  // f_{k-1}
        if (k - 1 <= static_cast<int>(out.size()) - 1) out[static_cast<std::size_t>(k - 1)] = here;
        if (k <= static_cast<int>(out.size()) - 1) out[static_cast<std::size_t>(k)] = above;
        if (std::abs(here) > 1e250) {
            here *= 1e-250;
            above *= 1e-250;
            for (std::size_t i = static_cast<std::size_t>(k - 1); i < out.size(); ++i) out[i] *= 1e-250;
        }
    }

    const cplx j0 = std::sin(z) / z;
    const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / out[0] : j1 / out[1];
    for (auto& v : out) v *= scale;
    out.resize(static_cast<std::size_t>(nmax) + 1);
    return out;
}

std::vector<cplx> spherical_hankel1_table(int nmax, cplx z) {
    require_order(nmax);
    if (z == cplx{0.0, 0.0}) throw DomainError("h_n^(1) is singular at z = 0");
    std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
    const cplx e = std::exp(kI * z);
    out[0] = -kI * e / z;
    if (nmax >= 1) out[1] = -e * (z + kI) / (z * z);
    for (int n = 1; n < nmax; ++n) {
        out[static_cast<std::size_t>(n) + 1] =
            static_cast<double>(2 * n + 1) / z * out[static_cast<std::size_t>(n)] -
            out[static_cast<std::size_t>(n) - 1];
    }
    return out;
}

cplx spherical_bessel(BesselKind kind, int n, cplx z) {
    require_order(n);
    if (kind == BesselKind::first) return spherical_bessel_j_table(n, z).back();
    return spherical_hankel1_table(n, z).back();
}

cplx riccati_log_derivative(int n, cplx z) {
    require_order(n);
    if (z == cplx{0.0, 0.0}) throw DomainError("Riccati log-derivative is singular at z = 0");
    const int top = miller_start(n, std::abs(z));
    cplx d = 0.0;
    for (int k = top; k > n; --k) {
        const cplx kz = static_cast<double>(k) / z;
        d = kz - 1.0 / (d + kz);
    }
    return d;
}

RiccatiTable riccati_table(int nmax, cplx z) {
    if (nmax < 1) throw DomainError("Riccati table needs nmax >= 1");
    const auto j = spherical_bessel_j_table(nmax, z);
    const auto h = spherical_hankel1_table(nmax, z);
    RiccatiTable t;
    const auto count = static_cast<std::size_t>(nmax);
    t.psi.resize(count);
    t.dpsi.resize(count);
    t.xi.resize(count);
    t.dxi.resize(count);
    for (int n = 1; n <= nmax; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const double dn = n;
        t.psi[i - 1] = z * j[i];
        t.dpsi[i - 1] = z * j[i - 1] - dn * j[i];
        t.xi[i - 1] = z * h[i];
        t.dxi[i - 1] = z * h[i - 1] - dn * h[i];
    }
    return t;
}

namespace {

void require_legendre(int n, int m, double x) {
    if (n < 0 || m < 0 || m > n)
        throw DomainError("associated Legendre order requires 0 <= m <= n, got n=" + std::to_string(n) +
                          " m=" + std::to_string(m));
    if (!(std::abs(x) <= 1.0)) throw DomainError("associated Legendre argument must lie in [-1, 1]");
}

}  // namespace

double assoc_legendre(int n, int m, double x) {
    require_legendre(n, m, x);
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double pmm = 1.0;
    for (int i = 1; i <= m; ++i) pmm *= -static_cast<double>(2 * i - 1) * s;
    if (n == m) return pmm;
    double pm1 = x * (2 * m + 1) * pmm;
    if (n == m + 1) return pm1;
    double prev = pmm;
    double cur = pm1;
    for (int l = m + 2; l <= n; ++l) {
        const double next = ((2 * l - 1) * x * cur - (l + m - 1) * prev) / (l - m);
        prev = cur;
        cur = next;
    }
    return cur;
}

double assoc_legendre_scaled(int n, int m, double x) {
    require_legendre(n, m, x);
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double pmm = 1.0;
    for (int i = 1; i <= m; ++i) pmm *= -std::sqrt((2.0 * i - 1.0) / (2.0 * i)) * s;
    if (n == m) return pmm;
    double prev = pmm;
    double cur = x * std::sqrt(2.0 * m + 1.0) * pmm;
    for (int l = m + 2; l <= n; ++l) {
        const double next = ((2.0 * l - 1.0) * x * cur - std::sqrt((l - 1.0) * (l - 1.0) - m * m) * prev) /
                            std::sqrt(static_cast<double>(l) * l - static_cast<double>(m) * m);
        prev = cur;
        cur = next;
    }
    return cur;
}

// dP_n^m/dtheta = (P_n^{m+1} - (n+m)(n-m+1) P_n^{m-1}) / 2 with P_n^{-1} = -P_n^1/(n(n+1)).
double assoc_legendre_dtheta(int n, int m, double theta) {
    const double x = std::cos(theta);
    require_legendre(n, m, x);
    if (n == 0) return 0.0;
    const double upper = m + 1 <= n ? assoc_legendre(n, m + 1, x) : 0.0;
    const double lower = m >= 1 ? assoc_legendre(n, m - 1, x)
                                : -assoc_legendre(n, 1, x) / (static_cast<double>(n) * (n + 1));
    return 0.5 * (upper - static_cast<double>(n + m) * (n - m + 1) * lower);
}

double assoc_legendre_scaled_dtheta(int n, int m, double theta) {
    const double x = std::cos(theta);
    require_legendre(n, m, x);
    if (n == 0) return 0.0;
    const double upper = m + 1 <= n ? assoc_legendre_scaled(n, m + 1, x) : 0.0;
    const double lower = m >= 1 ? assoc_legendre_scaled(n, m - 1, x) : -assoc_legendre_scaled(n, 1, x);
    return 0.5 * (std::sqrt(static_cast<double>(n - m) * (n + m + 1)) * upper -
                  std::sqrt(static_cast<double>(n + m) * (n - m + 1)) * lower);
}

}  // namespace sqed

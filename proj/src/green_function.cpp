#include "sqed/errors.hpp"
#include "sqed/layered_green.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace sqed {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Wave amplitudes of every layer for orders 1..N of one polarization.
// TE matches psi and psi'; TM matches psi and psi'/k^2 (p = 1/k^2).
struct Channel {
    std::vector<cplx> k, p;
    std::vector<std::vector<cplx>> a, b, c, d;  // [layer][n-1]
    double residual = 0.0;
};

double rel_mismatch(cplx x, cplx y, double scale) { return scale > 0.0 ? std::abs(x - y) / scale : 0.0; }

Channel solve_channel(const LayerStack& stack, double k0_um, int N, Polarization pol) {
    const auto& layers = stack.layers();
    const std::size_t L = layers.size();
    const auto n_count = static_cast<std::size_t>(N);
    Channel ch;
    for (const auto& l : layers) {
        const cplx k = k0_um * l.index;
        ch.k.push_back(k);
        ch.p.push_back(pol == Polarization::TM ? 1.0 / (k * k) : cplx{1.0, 0.0});
    }
    ch.a.assign(L, std::vector<cplx>(n_count));
    ch.b = ch.c = ch.d = ch.a;

    // Riccati functions on both sides of every interface.
    std::vector<RiccatiTable> inner(L - 1), outer(L - 1);
    for (std::size_t l = 0; l + 1 < L; ++l) {
        const double R = layers[l].outer_radius * 1e6;
        inner[l] = riccati_table(N, ch.k[l] * R);
        outer[l] = riccati_table(N, ch.k[l + 1] * R);
    }

    // Given (V, D) on one side, amplitudes on the other side follow from the
    // Wronskian psi xi' - psi' xi = i.
    auto transfer = [](const RiccatiTable& t, std::size_t i, cplx V, cplx D, cplx& x, cplx& y) {
        x = (V * t.dxi[i] - D * t.xi[i]) / kI;
        y = (D * t.psi[i] - V * t.dpsi[i]) / kI;
    };

    for (std::size_t i = 0; i < n_count; ++i) {
        ch.a[0][i] = 1.0;
        ch.b[0][i] = 0.0;
        for (std::size_t l = 0; l + 1 < L; ++l) {
            const auto& in = inner[l];
            const auto& out = outer[l];
            const cplx V = ch.a[l][i] * in.psi[i] + ch.b[l][i] * in.xi[i];
            const cplx D = ch.p[l] * ch.k[l] * (ch.a[l][i] * in.dpsi[i] + ch.b[l][i] * in.dxi[i]) /
                           (ch.p[l + 1] * ch.k[l + 1]);
            transfer(out, i, V, D, ch.a[l + 1][i], ch.b[l + 1][i]);
            const cplx V2 = ch.a[l + 1][i] * out.psi[i] + ch.b[l + 1][i] * out.xi[i];
            const cplx D2 = ch.a[l + 1][i] * out.dpsi[i] + ch.b[l + 1][i] * out.dxi[i];
            const double scale = std::max(std::abs(V), std::abs(D));
            ch.residual = std::max({ch.residual, rel_mismatch(V, V2, scale), rel_mismatch(D, D2, scale)});
        }
        ch.c[L - 1][i] = 0.0;
        ch.d[L - 1][i] = 1.0;
        for (std::size_t l = L - 1; l > 0; --l) {
            const auto& in = inner[l - 1];
            const auto& out = outer[l - 1];
            const cplx V = ch.c[l][i] * out.psi[i] + ch.d[l][i] * out.xi[i];
            const cplx D = ch.p[l] * ch.k[l] * (ch.c[l][i] * out.dpsi[i] + ch.d[l][i] * out.dxi[i]) /
                           (ch.p[l - 1] * ch.k[l - 1]);
            transfer(in, i, V, D, ch.c[l - 1][i], ch.d[l - 1][i]);
            const cplx V2 = ch.c[l - 1][i] * in.psi[i] + ch.d[l - 1][i] * in.xi[i];
            const cplx D2 = ch.c[l - 1][i] * in.dpsi[i] + ch.d[l - 1][i] * in.dxi[i];
            const double scale = std::max(std::abs(V), std::abs(D));
            ch.residual = std::max({ch.residual, rel_mismatch(V, V2, scale), rel_mismatch(D, D2, scale)});
        }
    }
    return ch;
}

double k0_um_of(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidInput("angular frequency must be positive");
    return omega / kSpeedOfLight * 1e-6;
}

int default_order(const LayerStack& stack, double k0_um) {
    const double kr = k0_um * stack.max_index() * stack.outer_interface() * 1e6;
    return std::min(kMaxOrder, std::max(20, static_cast<int>(std::ceil(kr)) + 12));
}

GreenValue green_fixed_order(const LayerStack& stack, double r, double r_src, double k0_um, int N,
                             const GreenOptions& opt) {
    const double rl = std::min(r, r_src) * 1e6;
    const double rg = std::max(r, r_src) * 1e6;
    const std::size_t Ll = stack.layer_of(std::min(r, r_src));
    const std::size_t Lg = stack.layer_of(std::max(r, r_src));
    const bool same = Ll == Lg;

    GreenValue out;
    out.terms = N;
    // Per-order series terms: scattering (or full, across layers) and the
    // free-space part expanded in the same basis.
    std::vector<cplx> te(static_cast<std::size_t>(N)), tm(te), direct_terms(te);
    // Riccati products overflow at high order when k r is small; the series is
    // cut before the first order that is not representable.
    int usable = N;

    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        const Channel ch = solve_channel(stack, k0_um, N, pol);
        const cplx kl = ch.k[Ll];
        const cplx kg = ch.k[Lg];
        const RiccatiTable t1 = riccati_table(N, kl * rl);
        const RiccatiTable t2 = riccati_table(N, kg * rg);
        auto& terms = pol == Polarization::TE ? te : tm;
        for (int n = 1; n <= usable; ++n) {
            const auto i = static_cast<std::size_t>(n - 1);
            cplx S1 = t1.psi[i], X1 = t1.xi[i], S2 = t2.psi[i], X2 = t2.xi[i];
            if (pol == Polarization::TM) {
                S1 = t1.dpsi[i] / kl;
                X1 = t1.dxi[i] / kl;
                S2 = t2.dpsi[i] / kg;
                X2 = t2.dxi[i] / kg;
            }
            const cplx a = ch.a[Ll][i], b = ch.b[Ll][i];
            const cplx c = ch.c[Lg][i], d = ch.d[Lg][i];
            // p k (ad - bc) is the same in every layer. Evaluated in the core it is
            // p_0 k_0 d_0, which avoids the cancellation in ad - bc inside shells.
            const cplx w0 = ch.p[0] * ch.k[0] * ch.d[0][i];
            if (!(std::abs(w0) > 0.0) || !std::isfinite(std::abs(w0))) {
                usable = n - 1;
                break;
            }
            const cplx ad_bc = w0 / (ch.p[Ll] * kl);
            const cplx W = kI * w0;
            const cplx pref = -angular_weight(n, opt.max_m, pol) / (4.0 * kPi * rl * rg * W);
            if (same) {
                terms[i] = pref * (a * c * S1 * S2 + b * c * (S1 * X2 + X1 * S2) + b * d * X1 * X2);
                direct_terms[i] += pref * ad_bc * S1 * X2;
            } else {
                terms[i] = pref * (a * S1 + b * X1) * (c * S2 + d * X2);
            }
            const cplx dterm = direct_terms[i];
            if (!std::isfinite(std::abs(terms[i])) || !std::isfinite(std::abs(dterm))) {
                usable = n - 1;
                break;
            }
        }
    }
    if (usable < 1) throw NumericalError("Green series term of order 1 is not finite");
    N = usable;
    out.terms = N;

    const bool series_direct = opt.direct == DirectTerm::series && same;
    cplx sum = 0.0, dsum = 0.0, last = 0.0;
    double dominant = -1.0;
    for (int n = 1; n <= N; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        sum += te[i] + tm[i];
        dsum += direct_terms[i];
        last = te[i] + tm[i] + (series_direct ? direct_terms[i] : cplx{0.0, 0.0});
        for (Polarization pol : {Polarization::TE, Polarization::TM}) {
            const double mag = std::abs((pol == Polarization::TE ? te[i] : tm[i]).imag());
            if (mag > dominant) {
                dominant = mag;
                out.dominant_n = n;
                out.dominant_polarization = pol;
            }
        }
    }
    const cplx series_total = series_direct ? sum + dsum : sum;
    out.tail_ratio = std::abs(series_total) > 0.0 ? std::abs(last) / std::abs(series_total) : 0.0;
    out.converged = out.tail_ratio <= kTailTolerance;

    out.scattering = sum;
    out.direct = 0.0;
    if (series_direct) {
        out.direct = dsum;
    } else if (same && opt.direct == DirectTerm::closed_form) {
        const cplx k = k0_um * stack.layers()[Ll].index;
        if (r == r_src) {
            // Coincident points: only the finite imaginary part i k / (6 pi) is kept.
            out.direct = kI * k / (6.0 * kPi);
        } else {
            const double R = rg - rl;
            const cplx kR = k * R;
            out.direct = std::exp(kI * kR) / (4.0 * kPi * R) * (1.0 + kI / kR - 1.0 / (kR * kR));
        }
    }
    out.value = out.direct + out.scattering;
    return out;
}

}  // namespace

namespace {

double angular_weight_sum(int n, int max_m, Polarization polarization);

// Full-m weights for every order up to the cap, computed once.
const std::vector<std::array<double, 2>>& full_weights() {
    static const std::vector<std::array<double, 2>> table = [] {
        std::vector<std::array<double, 2>> t(static_cast<std::size_t>(kMaxOrder) + 1);
        for (int n = 1; n <= kMaxOrder; ++n)
            t[static_cast<std::size_t>(n)] = {angular_weight_sum(n, -1, Polarization::TE),
                                              angular_weight_sum(n, -1, Polarization::TM)};
        return t;
    }();
    return table;
}

}  // namespace

double angular_weight(int n, int max_m, Polarization polarization) {
    if (n < 1) throw DomainError("angular weight needs n >= 1");
    if ((max_m < 0 || max_m >= n) && n <= kMaxOrder)
        return full_weights()[static_cast<std::size_t>(n)][polarization == Polarization::TE ? 0 : 1];
    return angular_weight_sum(n, max_m, polarization);
}

namespace {

double angular_weight_sum(int n, int max_m, Polarization polarization) {
    const int mtop = max_m < 0 ? n : std::min(n, max_m);
    const double half_pi = kPi / 2.0;
    double s = 0.0;
    for (int m = 0; m <= mtop; ++m) {
        const double neumann = m == 0 ? 1.0 : 2.0;
        if (polarization == Polarization::TE) {
            const double dp = assoc_legendre_scaled_dtheta(n, m, half_pi);
            s += neumann * dp * dp;
        } else {
            const double p = assoc_legendre_scaled(n, m, 0.0);
            s += neumann * m * m * p * p;
        }
    }
    return (2.0 * n + 1.0) / (static_cast<double>(n) * (n + 1)) * s;
}

}  // namespace

ScatteringCoefficients scattering_coefficients(const LayerStack& stack, const SphericalOrder& order, double omega,
                                               Polarization polarization) {
    const double k0 = k0_um_of(omega);
    const Channel ch = solve_channel(stack, k0, order.n, polarization);
    ScatteringCoefficients out;
    out.n = order.n;
    out.polarization = polarization;
    const auto i = static_cast<std::size_t>(order.n - 1);
    for (std::size_t l = 0; l < stack.size(); ++l) {
        out.a.push_back(ch.a[l][i]);
        out.b.push_back(ch.b[l][i]);
        out.c.push_back(ch.c[l][i]);
        out.d.push_back(ch.d[l][i]);
    }
    out.continuity_residual = ch.residual;
    return out;
}

GreenValue green_phiphi(const LayerStack& stack, double r, double r_src, double omega, const GreenOptions& options) {
    const double k0 = k0_um_of(omega);
    const double outer = stack.outer_interface();
    for (double x : {r, r_src})
        if (!(x > 0.0) || !(x < outer))
            throw InvalidInput("field and source points must lie strictly inside the finite layers");
    if (options.direct == DirectTerm::series && r == r_src)
        throw InvalidInput("the series form of the direct term diverges at r = r'");
    if (options.max_n < 0) throw InvalidInput("truncation order must be >= 1");

    if (options.max_n > 0) return green_fixed_order(stack, r, r_src, k0, options.max_n, options);

    const int N = default_order(stack, k0);
    GreenValue v = green_fixed_order(stack, r, r_src, k0, N, options);
    if (!v.converged && N < kMaxOrder) v = green_fixed_order(stack, r, r_src, k0, kMaxOrder, options);
    return v;
}

}  // namespace sqed

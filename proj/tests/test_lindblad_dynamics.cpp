#include "sqed/errors.hpp"
#include "sqed/lindblad_dynamics.hpp"
#include "sqed/lossless_dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace sqed;

namespace {

const double kPi = std::numbers::pi;

SystemSpec reference_spec(double gamma1) {
    SystemSpec s;
    s.omega_f = 1.5;
    s.chi1 = 0.254;
    s.chi2 = 0.151;
    s.gamma1 = gamma1;
    return s;
}

std::vector<double> grid(double t_max, int samples) {
    std::vector<double> t(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (samples - 1);
    return t;
}

Eigen::MatrixXcd random_density(std::mt19937& rng, int dim, int rank) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd a(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j) a(i, j) = cplx(n(rng), n(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return rho / rho.trace().real();
}

// sqrt of the eigenvalues of rho (sy x sy) rho* (sy x sy), in decreasing order.
double concurrence_oracle(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    const Eigen::Matrix4cd tilde = flip * rho.conjugate() * flip;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde);
    std::vector<double> l;
    for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

std::vector<double> local_maxima(const std::vector<double>& v) {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] > v[i - 1] && v[i] >= v[i + 1]) out.push_back(v[i]);
    return out;
}

}  // namespace

TEST_CASE("generator structure") {
    const SystemSpec spec = reference_spec(0.02);
    const Generator g = build_generator(spec);
    const Eigen::MatrixXcd H = g.hamiltonian();
    const Eigen::MatrixXcd a = g.annihilation();
    const Eigen::MatrixXcd N = g.excitation_number();
    CHECK(H.rows() == 12);
    CHECK((H - H.adjoint()).norm() == 0.0);
    CHECK((H * N - N * H).norm() < 1e-12);

    const int cut = spec.photon_cutoff;
    CHECK(H(basis_index(0, 0, 0, cut), basis_index(0, 0, 0, cut)).real() == doctest::Approx(1.0));
    CHECK(H(basis_index(1, 1, 2, cut), basis_index(1, 1, 2, cut)).real() == doctest::Approx(2.0 * 1.5 - 1.0));
    CHECK(H(basis_index(1, 0, 1, cut), basis_index(1, 0, 1, cut)).real() == doctest::Approx(1.5));
    // a s_+1 takes |g e, 1> to |e e, 0> with amplitude chi1.
    CHECK(H(basis_index(0, 0, 0, cut), basis_index(1, 0, 1, cut)).real() == doctest::Approx(0.254));
    CHECK(H(basis_index(0, 1, 0, cut), basis_index(1, 1, 1, cut)).real() == doctest::Approx(0.254));
    CHECK(H(basis_index(1, 0, 0, cut), basis_index(1, 1, 1, cut)).real() == doctest::Approx(0.151));
    CHECK(a(basis_index(1, 1, 1, cut), basis_index(1, 1, 2, cut)).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(N(basis_index(0, 1, 1, cut), basis_index(0, 1, 1, cut)).real() == doctest::Approx(2.0));

    SystemSpec free = spec;
    free.chi1 = free.chi2 = 0.0;
    const Eigen::MatrixXcd H0 = build_generator(free).hamiltonian();
    CHECK((H0 - Eigen::MatrixXcd(H0.diagonal().asDiagonal())).norm() == 0.0);

    SystemSpec bad = spec;
    bad.photon_cutoff = 0;
    CHECK_THROWS_AS(build_generator(bad), InvalidInput);
    bad = spec;
    bad.gamma1 = -0.1;
    CHECK_THROWS_AS(build_generator(bad), InvalidInput);
}

TEST_CASE("sparse generator matches the dense Lindblad formula") {
    std::mt19937 rng(4);
    for (int cut : {1, 2, 4}) {
        SystemSpec spec = reference_spec(0.03);
        spec.photon_cutoff = cut;
        const Generator g = build_generator(spec);
        const Eigen::MatrixXcd H = g.hamiltonian(), a = g.annihilation();
        const Eigen::MatrixXcd n = a.adjoint() * a;
        const Eigen::MatrixXcd rho = random_density(rng, spec.dimension(), spec.dimension());
        const cplx i{0.0, 1.0};
        const Eigen::MatrixXcd want =
            -i * (H * rho - rho * H) + spec.gamma1 * (2.0 * a * rho * a.adjoint() - n * rho - rho * n);
        Eigen::MatrixXcd got;
        g.apply(rho, got);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("state helpers and partial trace") {
    const cplx a1{0.6, 0.0}, a2{0.0, 0.48}, a3{-0.64, 0.0};
    const auto rho = single_excitation_state(a1, a2, a3, 2);
    CHECK(rho.trace().real() == doctest::Approx(1.0));
    const ReducedAtomicState r = partial_trace_field(rho);
    CHECK(std::abs(r(1, 1) - std::norm(a1)) < 1e-15);
    CHECK(std::abs(r(2, 2) - std::norm(a2)) < 1e-15);
    CHECK(std::abs(r(3, 3) - std::norm(a3)) < 1e-15);
    CHECK(std::abs(r(1, 2) - a1 * std::conj(a2)) < 1e-15);
    CHECK(std::abs(r(0, 0)) == 0.0);
    CHECK(mean_photon(rho) == doctest::Approx(std::norm(a3)));
    CHECK(wootters_concurrence(r) == doctest::Approx(2.0 * std::abs(a1 * a2)).epsilon(1e-12));

    CHECK(mean_photon(basis_projector(1, 1, 1, 3)) == doctest::Approx(1.0));
    CHECK(mean_photon(basis_projector(0, 1, 3, 3)) == doctest::Approx(3.0));
    CHECK(trace_distance(basis_projector(0, 1, 0, 2), basis_projector(1, 0, 0, 2)) == doctest::Approx(1.0));
    CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).scale(1.0));

    CHECK_THROWS_AS(basis_index(2, 0, 0, 2), InvalidInput);
    CHECK_THROWS_AS(basis_index(0, 0, 3, 2), InvalidInput);
    CHECK_THROWS_AS(partial_trace_field(Eigen::MatrixXcd::Identity(5, 5)), InvalidInput);
}

TEST_CASE("Wootters concurrence") {
    Eigen::Matrix4cd bell = Eigen::Matrix4cd::Zero();
    bell(1, 1) = bell(2, 2) = bell(1, 2) = bell(2, 1) = 0.5;
    CHECK(wootters_concurrence(bell) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wootters_concurrence(Eigen::Matrix4cd::Identity() / 4.0) == 0.0);
    Eigen::Matrix4cd prod = Eigen::Matrix4cd::Zero();
    prod(0, 0) = 1.0;
    CHECK(wootters_concurrence(prod) == doctest::Approx(0.0).scale(1.0));

    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.9}) {
        const Eigen::Matrix4cd werner = p * bell + (1.0 - p) * Eigen::Matrix4cd::Identity() / 4.0;
        CHECK(wootters_concurrence(werner) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-12).scale(1.0));
        CHECK(x_state_concurrence(werner) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-12).scale(1.0));
    }

    // The eigenvalue oracle takes square roots of eigenvalues that vanish for
    // rank-deficient states, so it is accurate only to about sqrt(eps) there.
    std::mt19937 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const int rank = 2 + trial % 3;
        const Eigen::Matrix4cd rho = random_density(rng, 4, rank);
        CAPTURE(rank);
        CHECK(std::abs(wootters_concurrence(rho) - concurrence_oracle(rho)) < (rank == 4 ? 1e-10 : 1e-7));
    }
    // Pure states: C = |<psi| sy x sy |psi*>|.
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Vector4cd psi;
        for (int i = 0; i < 4; ++i) psi(i) = cplx(n(rng), n(rng));
        psi.normalize();
        const double c = 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
        CHECK(std::abs(wootters_concurrence(psi * psi.adjoint()) - c) < 1e-10);
    }

    Eigen::Matrix4cd nonh = bell;
    nonh(0, 1) = 0.1;
    CHECK_THROWS_AS(wootters_concurrence(nonh), InvalidInput);
    Eigen::Matrix4cd neg = Eigen::Matrix4cd::Zero();
    neg(0, 0) = 1.2;
    neg(3, 3) = -0.2;
    CHECK_THROWS_AS(wootters_concurrence(neg), InvalidInput);
}

TEST_CASE("vacuum is stationary") {
    const auto rho0 = basis_projector(1, 1, 0, 2);
    const auto tr = evolve(reference_spec(0.05), rho0, grid(20.0, 5), {.dt = 1e-2});
    for (const auto& rho : tr.states) CHECK((rho - rho0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero loss reproduces the lossless amplitudes") {
    const double c1 = 0.254, c2 = 0.151, dw = 0.5;
    const auto t = grid(100.0, 201);
    for (int lam : {0, 1}) {
        const auto amp = solve_factored(c1, c2, dw, lam, t);
        const auto rho0 = single_excitation_state(std::conj(amp.c1[0]), std::conj(amp.c2[0]), -std::conj(amp.c3[0]), 2);
        SystemSpec spec = reference_spec(0.0);
        spec.omega_f = 1.0 + dw;
        const auto tr = evolve(spec, rho0, t);
        double worst = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto pure =
                single_excitation_state(std::conj(amp.c1[i]), std::conj(amp.c2[i]), -std::conj(amp.c3[i]), 2);
            worst = std::max(worst, trace_distance(tr.states[i], pure));
        }
        CAPTURE(lam);
        CHECK(worst < 1e-6);
        CHECK(tr.step_converged);

        // Largest photon number at Omega t = pi / 2.
        const double om = std::sqrt(dw * dw / 4 + c1 * c1 + c2 * c2);
        const auto peak = evolve(spec, rho0, {0.0, kPi / (2.0 * om)}, {.check_halving = false});
        const double chi_l = lam ? c1 : c2;
        CHECK(peak.mean_photon[1] == doctest::Approx(std::pow(chi_l / om, 2)).epsilon(1e-8));
    }
}

TEST_CASE("lossy trajectory keeps its invariants") {
    const auto rho0 = single_excitation_state(0.0, 1.0, 0.0, 2);
    const auto tr = evolve(reference_spec(0.02), rho0, grid(300.0, 1501), {.keep_states = false});
    CHECK(tr.states.empty());
    CHECK(tr.max_trace_drift < 1e-8);
    CHECK(tr.max_hermiticity_defect < 1e-10);
    CHECK(tr.max_high_photon_population < 1e-12);
    CHECK(*std::min_element(tr.min_eigenvalue.begin(), tr.min_eigenvalue.end()) >= -1e-8);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(std::abs(tr.concurrence[i] - tr.concurrence_x_state[i]) < 1e-10);
        CHECK(tr.tangle[i] == doctest::Approx(tr.concurrence[i] * tr.concurrence[i]));
    }
    const auto peaks = local_maxima(tr.mean_photon);
    REQUIRE(peaks.size() > 5);
    for (std::size_t i = 1; i < peaks.size(); ++i) CHECK(peaks[i] < peaks[i - 1]);
}

TEST_CASE("invalid initial states are rejected") {
    const SystemSpec spec = reference_spec(0.02);
    Eigen::MatrixXcd half = basis_projector(0, 1, 0, 2) * 0.5;
    CHECK_THROWS_AS(evolve(spec, half, grid(1.0, 3)), InvalidInput);
    CHECK_THROWS_AS(evolve(spec, basis_projector(0, 1, 0, 3), grid(1.0, 3)), InvalidInput);
    CHECK_THROWS_AS(evolve(spec, basis_projector(0, 1, 0, 2), {0.0, 1.0, 0.5}), InvalidInput);
    CHECK_THROWS_AS(evolve(spec, basis_projector(0, 1, 0, 2), grid(1.0, 3), {.dt = 0.0}), InvalidInput);
}

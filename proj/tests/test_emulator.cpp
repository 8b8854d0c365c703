#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "qrr/emulator.hpp"
#include "qrr/errors.hpp"
#include "qrr/lightcone.hpp"
#include "qrr/rng.hpp"

using namespace qrr;
using std::numbers::pi;

namespace {

// Dense-matrix QAOA: diagonal phase separator, mixer built entrywise as a tensor product.
Eigen::VectorXcd dense_qaoa(const std::vector<Edge>& edges, int m, const QaoaAngles& a) {
    const int dim = 1 << m;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(dim));
    for (int l = 0; l < a.p; ++l) {
        for (int x = 0; x < dim; ++x) {
            int cut = 0;
            for (auto [u, v] : edges) cut += ((x >> u) & 1) != ((x >> v) & 1);
            psi[x] *= std::exp(cplx(0, -a.gammas[l] * cut));
        }
        const cplx u[2][2] = {{std::cos(a.betas[l]), cplx(0, -std::sin(a.betas[l]))}, {cplx(0, -std::sin(a.betas[l])), std::cos(a.betas[l])}};
        Eigen::MatrixXcd mix(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                cplx e = 1;
                for (int q = 0; q < m; ++q) e *= u[(r >> q) & 1][(c >> q) & 1];
                mix(r, c) = e;
            }
        psi = mix * psi;
    }
    return psi;
}

double dense_zz(const Eigen::VectorXcd& psi, int a, int b) {
    double s = 0;
    for (int x = 0; x < psi.size(); ++x) s += std::norm(psi[x]) * ((((x >> a) ^ (x >> b)) & 1) ? -1 : 1);
    return s;
}

QaoaAngles angles1(double g, double b) { return {1, {g}, {b}}; }

StateVector uniform_state(int m) {
    StateVector s;
    s.m = m;
    s.amp.assign(std::size_t(1) << m, cplx(1.0 / std::sqrt(double(1 << m)), 0));
    return s;
}

StateVector basis_state(int m, std::uint64_t x) {
    StateVector s;
    s.m = m;
    s.amp.assign(std::size_t(1) << m, 0);
    s.amp[x] = 1;
    return s;
}

double tv(const Marginal& a, const Marginal& b) {
    double s = 0;
    for (int k = 0; k < 4; ++k) s += std::abs(a[k] - b[k]);
    return s / 2;
}

}  // namespace

TEST_CASE("fixed angle table") {
    auto a1 = fixed_angles(1);
    CHECK(a1.gammas[0] == 0.615533629);
    CHECK(a1.betas[0] == 0.3926720292447629);
    auto a2 = fixed_angles(2);
    CHECK(a2.gammas == std::vector<double>{0.4877097328, 0.8979876956});
    CHECK(a2.betas == std::vector<double>{0.5550603400685824, 0.29250781484335187});
    auto a3 = fixed_angles(3);
    CHECK(a3.gammas[2] == 0.9370887966);
    CHECK(a3.betas[2] == 0.23539562255067184);
    CHECK_THROWS_AS(fixed_angles(4), InvalidArgument);
}

TEST_CASE("trivial states") {
    auto s = qaoa_state({}, 1, angles1(0.3, 0.0));
    CHECK(std::abs(s.amp[0] - cplx(M_SQRT1_2, 0)) < 1e-15);
    CHECK(std::abs(s.amp[1] - cplx(M_SQRT1_2, 0)) < 1e-15);
    auto k4 = complete_graph(4);
    auto u = qaoa_state(k4.edges(), 4, angles1(0, 0));
    for (auto a : u.amp) CHECK(std::abs(a - cplx(0.25, 0)) < 1e-15);
    CHECK(zz_expectation_exact(u, 0, 1) == doctest::Approx(0).epsilon(1e-14));
    CHECK(zz_expectation_exact(basis_state(2, 0), 0, 1) == 1.0);
    CHECK(cost_expectation(k4.edges(), u) == doctest::Approx(3.0));
    CHECK(cost_expectation(k4.edges(), basis_state(4, 0b0011)) == doctest::Approx(4.0));
}

TEST_CASE("single edge closed form") {
    auto s = qaoa_state({{0, 1}}, 2, angles1(pi / 2, pi / 8));
    CHECK(zz_expectation_exact(s, 0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        double g = rng.uniform(-pi, pi), b = rng.uniform(-pi, pi);
        auto st = qaoa_state({{0, 1}}, 2, angles1(g, b));
        CHECK(std::abs(zz_expectation_exact(st, 0, 1) + std::sin(4 * b) * std::sin(g)) < 1e-12);
    }
}

TEST_CASE("statevector matches dense oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        int m = 5 + trial % 3;
        std::vector<Edge> edges;
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m; ++v)
                if (rng.uniform() < 0.5) edges.emplace_back(u, v);
        int p = 1 + trial % 3;
        QaoaAngles a{p, {}, {}};
        for (int l = 0; l < p; ++l) a.gammas.push_back(rng.uniform(-2, 2)), a.betas.push_back(rng.uniform(-2, 2));
        auto psi = dense_qaoa(edges, m, a);
        auto s = qaoa_state(edges, m, a);
        auto r = qaoa_state_serial(edges, m, a);
        CHECK(std::abs(norm_squared(s) - 1) < 1e-10);
        for (int x = 0; x < (1 << m); ++x) {
            CHECK(std::abs(s.amp[x] - psi[x]) < 1e-12);
            CHECK(std::abs(r.amp[x] - psi[x]) < 1e-12);
        }
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                CHECK(std::abs(zz_expectation_exact(s, i, j) - dense_zz(psi, i, j)) < 1e-12);
                CHECK(std::abs(zz_expectation_exact_serial(s, i, j) - dense_zz(psi, i, j)) < 1e-12);
            }
    }
}

TEST_CASE("parallel and serial kernels agree on larger tasks") {
    auto g = generate_regular(40, 5);
    auto t = subproblem(g, 0, g.neighbors(0)[0], 2);
    auto a = fixed_angles(2);
    auto s = qaoa_state(t.sub_edges, t.size, a), r = qaoa_state_serial(t.sub_edges, t.size, a);
    double diff = 0;
    for (std::size_t x = 0; x < s.amp.size(); ++x) diff = std::max(diff, std::abs(s.amp[x] - r.amp[x]));
    CHECK(diff < 1e-12);
    CHECK(std::abs(norm_squared(s) - 1) < 1e-10);
    CHECK_THROWS_AS(qaoa_state({}, kMaxQubits + 1, a), CapacityError);
}

TEST_CASE("4-ring p=1 optimum is 3/4 of the max cut") {
    auto ring = ring_graph(4);
    double best = 0;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 100; ++j) {
            auto s = qaoa_state(ring.edges(), 4, angles1(pi * i / 200, pi / 2 * j / 100));
            best = std::max(best, cost_expectation(ring.edges(), s));
        }
    CHECK(best == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(best <= 3.0 + 1e-12);
}

TEST_CASE("analytic p=1 formulas match statevector") {
    auto k4 = complete_graph(4);
    CHECK(zz_analytic_p1(k4, 0, 1, 0.7, 0.0) == 0.0);
    auto edge = Graph(2, {{0, 1}});
    CHECK(zz_analytic_p1(edge, 0, 1, pi / 2, pi / 8) == doctest::Approx(-1.0));

    auto a = fixed_angles(1);
    auto tk4 = subproblem(k4, 0, 1, 1);
    auto sk4 = qaoa_state(tk4.sub_edges, tk4.size, a);
    CHECK(std::abs(zz_analytic_p1(k4, 0, 1, a.gammas[0], a.betas[0]) - zz_expectation_exact(sk4, tk4.anchor_a, tk4.anchor_b)) < 1e-10);

    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto g = generate_regular(24, seed);
        for (auto [i, j] : correlated_pairs(g, 1)) {
            auto t = subproblem(g, i, j, 1);
            for (double gm : {-1.1, 0.3, 0.615533629}) {
                for (double b : {-0.4, 0.2, 0.3926720292447629}) {
                    auto s = qaoa_state(t.sub_edges, t.size, angles1(gm, b));
                    double exact = zz_expectation_exact(s, t.anchor_a, t.anchor_b);
                    CHECK(std::abs(zz_analytic_p1(g, i, j, gm, b) - exact) < 1e-9);
                    CHECK(std::abs(zz_analytic_p1_cubic(g, i, j, gm, b) - exact) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("sampling") {
    auto b = sample_bitstrings(basis_state(3, 5), 100, 1);
    for (auto x : b) CHECK(x == 5);
    auto u = sample_bitstrings(uniform_state(1), 100000, 2);
    double ones = 0;
    for (auto x : u) ones += x & 1;
    CHECK(std::abs(ones / u.size() - 0.5) < 0.01);
    CHECK(sample_bitstrings(uniform_state(4), 1000, 7) == sample_bitstrings(uniform_state(4), 1000, 7));

    CHECK(estimate_zz({0, 0, 0}, 0, 1) == 1.0);
    CHECK(estimate_zz({0, 3}, 0, 1) == 1.0);
    CHECK(estimate_zz({0, 2}, 0, 1) == 0.0);
    CHECK_THROWS_AS(sample_bitstrings(uniform_state(2), 0, 1), InvalidArgument);
}

TEST_CASE("shot noise shrinks as the inverse square root") {
    auto g = generate_regular(20, 2);
    auto t = subproblem(g, 0, g.neighbors(0)[0], 1);
    auto s = qaoa_state(t.sub_edges, t.size, fixed_angles(1));
    double exact = zz_expectation_exact(s, t.anchor_a, t.anchor_b);
    std::vector<double> lx, ly;
    for (std::int64_t n_ex : {100, 1000, 10000}) {
        double se = 0;
        const int reps = 200;
        for (int r = 0; r < reps; ++r) {
            double e = estimate_zz(sample_bitstrings(s, n_ex, hash_combine(n_ex, r)), t.anchor_a, t.anchor_b) - exact;
            se += e * e;
        }
        lx.push_back(std::log(double(n_ex)));
        ly.push_back(0.5 * std::log(se / reps));
    }
    double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("depolarizing rescales correlations") {
    CHECK(apply_depolarizing(-0.4, 1.0) == -0.4);
    CHECK(apply_depolarizing(-0.4, 0.0) == 0.0);
    CHECK(apply_depolarizing(0.5, 0.5) == 0.25);
    CHECK_THROWS_AS(apply_depolarizing(0.5, 1.5), InvalidArgument);
}

TEST_CASE("readout noise") {
    auto samples = sample_bitstrings(uniform_state(3), 2000, 4);
    CHECK(apply_readout_noise(samples, ConfusionModel::identity(3), 1) == samples);
    ConfusionModel flip;
    flip.R.assign(3, {{{0.0, 1.0}, {1.0, 0.0}}});
    auto flipped = apply_readout_noise(samples, flip, 1);
    for (std::size_t k = 0; k < samples.size(); ++k) CHECK(flipped[k] == (samples[k] ^ 7u));

    auto one = sample_bitstrings(uniform_state(1), 200000, 8);
    auto noisy = apply_readout_noise(one, ConfusionModel::asymmetric(1, 0.0, 0.1), 3);
    auto z = [](const Samples& s) {
        double v = 0;
        for (auto x : s) v += (x & 1) ? -1 : 1;
        return v / s.size();
    };
    // Reading 0 for a true 1 with rate 0.1 moves <Z> up by 2 * 0.1 * p(1) = 0.1.
    CHECK(std::abs(z(noisy) - z(one) - 0.1) < 0.005);

    ConfusionModel bad;
    bad.R.assign(1, {{{0.5, 0.6}, {0.0, 1.0}}});
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("iterative Bayesian unfolding") {
    Marginal truth = {0.5, 0.1, 0.15, 0.25};
    auto id = ConfusionModel::identity(2);
    auto back = ibu_mitigate(truth, id, 0, 1, 1);
    CHECK(tv(back, truth) < 1e-15);

    Marginal uniform = {0.25, 0.25, 0.25, 0.25};
    CHECK(tv(ibu_mitigate(uniform, ConfusionModel::symmetric(2, 0.1), 0, 1, 50), uniform) < 1e-12);

    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        Marginal x;
        double s = 0;
        for (auto& v : x) s += v = 0.05 + rng.uniform();
        for (auto& v : x) v /= s;
        auto model = ConfusionModel::asymmetric(2, rng.uniform(0, 0.05), rng.uniform(0, 0.08));
        auto obs = forward_confusion(x, model, 0, 1);
        CHECK(tv(ibu_mitigate(obs, model, 0, 1, 50), x) <= 1e-3);
    }
    CHECK(zz_from_marginal({1, 0, 0, 0}) == 1.0);
    CHECK(zz_from_marginal({0.5, 0.5, 0, 0}) == 0.0);
}

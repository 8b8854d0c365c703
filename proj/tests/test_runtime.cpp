#include <doctest.h>

#include <cmath>

#include "qrr/errors.hpp"
#include "qrr/lightcone.hpp"
#include "qrr/runtime.hpp"

using namespace qrr;

TEST_CASE("circuit duration") {
    RuntimeParams p;
    // 40 + (80 + 7 * 526) + 6000 ns.
    CHECK(circuit_duration(7, 1, 1, p) == doctest::Approx(9802e-9).epsilon(1e-12));
    CHECK(circuit_duration(7, 1, 2, p) == doctest::Approx(2 * circuit_duration(7, 1, 1, p)).epsilon(1e-14));
    CHECK_THROWS_AS(circuit_duration(7, 0, 1, p), InvalidArgument);
    double d1 = circuit_duration(9, 2, 1000, p), d2 = circuit_duration(9, 2, 2000, p), d3 = circuit_duration(9, 2, 3000, p);
    CHECK(d3 - d2 == doctest::Approx(d2 - d1).epsilon(1e-12));
}

TEST_CASE("cloud service duration") {
    RuntimeParams p;
    CHECK(std::abs(qcs_duration(10, 1, 1000, p.qcs) - 0.2590) < 1e-4);
    CHECK(qcs_duration(10, 1, 1000, {0, 0, 0, 0, 0, 0}) == 0.0);
    CHECK(qcs_duration(10, 2, 0, p.qcs) == doctest::Approx(p.qcs[0] + p.qcs[1] * 10 + p.qcs[3] * 20));
    double a = qcs_duration(12, 1, 100, p.qcs), b = qcs_duration(12, 1, 200, p.qcs), c = qcs_duration(12, 1, 300, p.qcs);
    CHECK(c - b == doctest::Approx(b - a));
}

TEST_CASE("quantum runtime batching") {
    RuntimeParams p;
    p.n_ex = 1000;
    auto q = quantum_runtime_from_sizes(std::vector<int>(30, 7), 1, p);
    CHECK(q.formula_batches == 3);  // ceil(30 * 7 / 100)
    CHECK(q.formula == doctest::Approx(circuit_duration(7, 1, 1000, p) * 3));
    CHECK(q.packed_batches == 3);  // 14 circuits of 7 fit per batch

    auto one = quantum_runtime_from_sizes(std::vector<int>(10, 7), 1, p);
    CHECK(one.formula_batches == 1);
    CHECK(one.packed_batches == 1);

    auto mixed = quantum_runtime_from_sizes({60, 50, 40, 30}, 1, p);
    CHECK(mixed.packed_batches == 2);
    CHECK(mixed.packed == doctest::Approx(circuit_duration(60, 1, 1000, p) + circuit_duration(50, 1, 1000, p)));

    CHECK_THROWS_AS(quantum_runtime_from_sizes({101}, 1, p), CapacityError);
    CHECK(quantum_runtime_from_sizes({}, 1, p).formula == 0.0);
}

TEST_CASE("quantum runtime on a generated instance") {
    auto g = generate_regular(32, 1);
    RuntimeParams p;
    auto q = quantum_runtime(g, 1, p);
    CHECK(q.tasks == correlated_pairs(g, 1).size());
    CHECK(q.mean_size <= 7);
    // Close to the published N=32 figure; exact agreement depends on the ensemble.
    CHECK(std::abs(1000 * q.formula - 425.29) / 425.29 < 0.25);
    p.M = 1000;
    CHECK(quantum_runtime(g, 1, p).formula_batches == 1);
}

TEST_CASE("classical runtime estimates") {
    CHECK(1000 * classical_runtime_estimate("sa", 1024, 100) == doctest::Approx(1.833).epsilon(1e-3));
    CHECK(1000 * classical_runtime_estimate("corr_build", 10000, 10000) == doctest::Approx(38.59).epsilon(1e-3));
    CHECK(classical_runtime_estimate("sa", 1024, 0) == 0.0);
    CHECK_THROWS_AS(classical_runtime_estimate("gurobi", 10, 1), InvalidArgument);
}

TEST_CASE("time to match") {
    auto half = time_to_match({{1.0, true}, {1.0, false}});
    CHECK(half.t_star_ms == 2.0);
    auto all = time_to_match({{1.0, true}, {3.0, true}});
    CHECK(all.t_star_ms == 2.0);
    CHECK_FALSE(all.lower_bound);
    auto none = time_to_match({{1.0, false}});
    CHECK(std::isinf(none.t_star_ms));
    CHECK(none.lower_bound);
    CHECK_THROWS_AS(time_to_match({}), InvalidArgument);
}

TEST_CASE("t* optimization over a control grid") {
    // Success probability rises with control while time grows linearly: interior optimum.
    Trial trial = [](double c, std::uint64_t seed) {
        double p = 1 - std::exp(-c / 8);
        return Run{c, (seed % 1000) / 1000.0 < p};
    };
    auto r = t_star_opt(trial, {1, 2, 4, 8, 16, 32, 64}, 400, 7);
    CHECK(r.best_index > 0);
    CHECK(r.best_index < 6);
    CHECK(std::isfinite(r.t_star_ms));
    auto single = t_star_opt(trial, {5}, 10, 1);
    CHECK(single.best_control == 5);
    Trial easy = [](double c, std::uint64_t) { return Run{c, true}; };
    auto e = t_star_opt(easy, {1, 2, 3}, 5, 1);
    CHECK(e.best_control == 1);
    CHECK(e.points[0].ttm.p_hat == 1.0);
    CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
    CHECK(trial_seed(1, 2, 3) != trial_seed(1, 3, 2));
}

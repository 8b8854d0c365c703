#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrr/compile.hpp"
#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

using namespace qrr;
using std::numbers::pi;
using C = std::complex<double>;

namespace {

// Reference matrices written out by hand; qubit 0 is the most significant factor.
Unitary rzz_ref(double phi) {
    Unitary u = Unitary::Zero(4, 4);
    const C m = std::exp(C(0, -phi / 2)), p = std::exp(C(0, phi / 2));
    u(0, 0) = m, u(1, 1) = p, u(2, 2) = p, u(3, 3) = m;
    return u;
}

Unitary swap_ref() {
    Unitary s = Unitary::Zero(4, 4);
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
    return s;
}

Unitary rx_ref(double phi) {
    Unitary u(2, 2);
    u << std::cos(phi / 2), C(0, -std::sin(phi / 2)), C(0, -std::sin(phi / 2)), std::cos(phi / 2);
    return u;
}

}  // namespace

TEST_CASE("ISWAP definition") {
    Unitary expect = Unitary::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 1;
    expect(1, 2) = expect(2, 1) = C(0, 1);
    CHECK(iswap_matrix().isApprox(expect, 1e-15));
    GateSequence one{2, {{NativeKind::ISwap, 0, 1, 0}}};
    CHECK(unitary_of(one).isApprox(expect, 1e-15));
}

TEST_CASE("unitary of trivial sequences") {
    CHECK(unitary_of(GateSequence{2, {}}).isApprox(Unitary::Identity(4, 4)));
    GateSequence rz{1, {{NativeKind::Rz, 0, -1, pi}, {NativeKind::Rz, 0, -1, -pi}}};
    CHECK(unitary_of(rz).isApprox(Unitary::Identity(2, 2)));
    GateSequence bad{1, {{NativeKind::Rx, 0, -1, 0.3}}};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("phase equivalence") {
    Unitary x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    CHECK(equivalent_up_to_phase(x, x));
    CHECK(equivalent_up_to_phase(C(0, 1) * x, x));
    CHECK_FALSE(equivalent_up_to_phase(x, z));
}

TEST_CASE("targets agree with hand-written matrices") {
    Rng rng(1);
    for (int k = 0; k < 10; ++k) {
        double phi = rng.uniform(-4, 4);
        CHECK(target_unitary(GateKind::Rzz, phi).isApprox(rzz_ref(phi), 1e-14));
        CHECK(equivalent_up_to_phase(target_unitary(GateKind::RzzSwap, phi), swap_ref() * rzz_ref(phi)));
        CHECK(target_unitary(GateKind::Rx, phi).isApprox(rx_ref(phi), 1e-14));
    }
    Unitary h(2, 2);
    h << 1, 1, 1, -1;
    CHECK(equivalent_up_to_phase(target_unitary(GateKind::H, 0), h / std::sqrt(2.0)));
}

TEST_CASE("compiled gates equal their targets for random angles") {
    Rng rng(2024);
    for (auto kind : {GateKind::Rx, GateKind::H, GateKind::Rzz, GateKind::RzzSwap}) {
        for (int k = 0; k < 100; ++k) {
            double phi = rng.uniform(-2 * pi, 2 * pi);
            auto seq = compile_gate(kind, phi);
            seq.validate();
            CHECK(equivalent_up_to_phase(unitary_of(seq), target_unitary(kind, phi), 1e-10));
        }
    }
}

TEST_CASE("compiled gate structure") {
    CHECK(compile_gate(GateKind::Rzz, 0.4).iswap_count() == kIswapsPerRzz);
    CHECK(compile_gate(GateKind::RzzSwap, 0.4).iswap_count() == kIswapsPerRzzSwap);
    CHECK(compile_gate(GateKind::Rx, 0.4).iswap_count() == 0);
    CHECK(equivalent_up_to_phase(unitary_of(compile_gate(GateKind::Rzz, 0)), Unitary::Identity(4, 4)));
    CHECK(equivalent_up_to_phase(unitary_of(compile_gate(GateKind::RzzSwap, 0)), swap_ref()));
    auto rx = compile_gate(GateKind::Rx, pi / 2);
    CHECK(equivalent_up_to_phase(unitary_of(rx), rx_ref(pi / 2)));
    for (const auto& g : compile_gate(GateKind::RzzSwap, 1.1).gates)
        if (g.kind == NativeKind::Rx) CHECK(std::abs(std::abs(g.angle) - pi / 2) < 1e-15);
    CHECK(parse_gate_kind("rzzswap") == GateKind::RzzSwap);
    CHECK(gate_kind_name(GateKind::H) == "h");
    CHECK_THROWS_AS(parse_gate_kind("cz"), InvalidArgument);
}

TEST_CASE("swap network counts") {
    auto c7 = swap_network_counts(7, 1);
    CHECK(c7.layers == 7);
    CHECK(c7.iswaps == 63);
    auto c2 = swap_network_counts(2, 1);
    CHECK(c2.layers == 2);
    CHECK(c2.iswaps == 3);
    auto c7p3 = swap_network_counts(7, 3);
    CHECK(c7p3.layers == 3 * c7.layers);
    CHECK(c7p3.iswaps == 3 * c7.iswaps);
    CHECK(c7p3.iswaps_per_pass == c7.iswaps_per_pass);
    CHECK_THROWS_AS(swap_network_counts(1, 1), InvalidArgument);
}

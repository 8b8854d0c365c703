#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrr {

// Native gates: Rz(theta) = exp(-i theta Z/2), Rx(+-pi/2) = exp(-+i pi X/4),
// ISWAP = exp[i pi (XX + YY)/4].
enum class NativeKind { Rz, Rx, ISwap };

struct NativeGate {
    NativeKind kind;
    int q0 = 0, q1 = -1;
    double angle = 0.0;
};

// Gates in time order. In the two-qubit matrix, qubit 0 is the most significant factor.
struct GateSequence {
    int width = 1;
    std::vector<NativeGate> gates;

    int iswap_count() const;
    void validate() const;
};

enum class GateKind { Rx, H, Rzz, RzzSwap };

GateKind parse_gate_kind(const std::string& s);
std::string gate_kind_name(GateKind k);

GateSequence compile_gate(GateKind kind, double phi);

using Unitary = Eigen::MatrixXcd;

Unitary unitary_of(const GateSequence& seq);
// The algebraic gate compile_gate() targets: Rx(phi), H, exp(-i phi ZZ/2), SWAP exp(-i phi ZZ/2).
Unitary target_unitary(GateKind kind, double phi);
Unitary iswap_matrix();

bool equivalent_up_to_phase(const Unitary& a, const Unitary& b, double tol = 1e-10);

struct SwapNetworkCounts {
    long layers = 0;
    long iswaps_per_pass = 0;
    long iswaps = 0;  // over all p passes
};

// Worst-case linear-chain swap network: n p two-qubit layers; each phase-separator pass
// applies n(n-1)/2 Rzz-SWAP blocks of 3 ISWAPs.
SwapNetworkCounts swap_network_counts(int n, int p);

constexpr int kIswapsPerRzz = 2;
constexpr int kIswapsPerRzzSwap = 3;
constexpr int kOneQubitLayersPerRzzSwap = 4;

}  // namespace qrr

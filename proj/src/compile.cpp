#include "qrr/compile.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "qrr/errors.hpp"

namespace qrr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;
using C = std::complex<double>;

NativeGate rz(int q, double t) { return {NativeKind::Rz, q, -1, t}; }
NativeGate rx(int q, double t) { return {NativeKind::Rx, q, -1, t}; }
NativeGate iswap() { return {NativeKind::ISwap, 0, 1, 0.0}; }

// Rx(phi) = Rz(pi/2) Rx(pi/2) Rz(phi) Rx(-pi/2) Rz(-pi/2), i.e. the U2 block after U_{z-}.
void append_rx(std::vector<NativeGate>& g, int q, double phi) {
    g.push_back(rz(q, -kHalfPi));
    g.push_back(rx(q, -kHalfPi));
    g.push_back(rz(q, phi));
    g.push_back(rx(q, kHalfPi));
    g.push_back(rz(q, kHalfPi));
}

// ISWAP (X x I) ISWAP^dag = Z x Y and ISWAP^dag = (Z x Z) ISWAP, so
// Rzz(phi) = [I x Rx(pi/2)] ISWAP [Rx(phi) Z x Z] ISWAP [I x Rx(-pi/2)].
void append_rzz(std::vector<NativeGate>& g, double phi) {
    g.push_back(rx(1, -kHalfPi));
    g.push_back(iswap());
    g.push_back(rz(0, kPi));
    g.push_back(rz(1, kPi));
    append_rx(g, 0, phi);
    g.push_back(iswap());
    g.push_back(rx(1, kHalfPi));
}

// Merge each Rz into an earlier Rz on the same qubit when only gates on the other qubit
// sit between them, then drop exact Rz(0).
std::vector<NativeGate> merge_rz(const std::vector<NativeGate>& in) {
    std::vector<NativeGate> out;
    for (const auto& g : in) {
        bool merged = false;
        if (g.kind == NativeKind::Rz) {
            for (auto it = out.rbegin(); it != out.rend(); ++it) {
                if (it->kind == NativeKind::ISwap) break;
                if (it->q0 != g.q0) continue;
                if (it->kind == NativeKind::Rz) {
                    it->angle += g.angle;
                    merged = true;
                }
                break;
            }
        }
        if (!merged) out.push_back(g);
    }
    std::erase_if(out, [](const NativeGate& g) { return g.kind == NativeKind::Rz && g.angle == 0.0; });
    return out;
}

Unitary rz_matrix(double t) {
    Unitary m = Unitary::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -t / 2);
    m(1, 1) = std::polar(1.0, t / 2);
    return m;
}

Unitary rx_matrix(double t) {
    Unitary m(2, 2);
    m << std::cos(t / 2), C(0, -std::sin(t / 2)), C(0, -std::sin(t / 2)), std::cos(t / 2);
    return m;
}

Unitary kron(const Unitary& a, const Unitary& b) {
    Unitary r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Unitary embed(const Unitary& u, int q, int width) {
    if (width == 1) return u;
    Unitary id = Unitary::Identity(2, 2);
    return q == 0 ? kron(u, id) : kron(id, u);
}

}  // namespace

int GateSequence::iswap_count() const {
    int c = 0;
    for (const auto& g : gates) c += g.kind == NativeKind::ISwap;
    return c;
}

void GateSequence::validate() const {
    if (width < 1 || width > 2) throw InvalidArgument("gate sequence width must be 1 or 2");
    for (const auto& g : gates) {
        if (g.q0 < 0 || g.q0 >= width) throw InvalidArgument("gate acts on a qubit outside the register");
        if (g.kind == NativeKind::Rx && std::abs(std::abs(g.angle) - kHalfPi) > 1e-15)
            throw InvalidArgument("native Rx must have angle +-pi/2");
        if (g.kind == NativeKind::ISwap && width != 2) throw InvalidArgument("ISWAP needs a two-qubit register");
    }
}

GateKind parse_gate_kind(const std::string& s) {
    if (s == "rx") return GateKind::Rx;
    if (s == "h") return GateKind::H;
    if (s == "rzz") return GateKind::Rzz;
    if (s == "rzzswap") return GateKind::RzzSwap;
    throw InvalidArgument("unknown gate kind '" + s + "' (expected rx, h, rzz, rzzswap)");
}

std::string gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Rx: return "rx";
        case GateKind::H: return "h";
        case GateKind::Rzz: return "rzz";
        case GateKind::RzzSwap: return "rzzswap";
    }
    return "?";
}

GateSequence compile_gate(GateKind kind, double phi) {
    GateSequence s;
    switch (kind) {
        case GateKind::Rx:
            s.width = 1;
            if (std::abs(std::abs(phi) - kHalfPi) < 1e-15)
                s.gates.push_back(rx(0, phi > 0 ? kHalfPi : -kHalfPi));
            else
                append_rx(s.gates, 0, phi);
            break;
        case GateKind::H:
            s.width = 1;
            s.gates = {rz(0, kHalfPi), rx(0, kHalfPi), rz(0, kHalfPi)};
            break;
        case GateKind::Rzz:
            s.width = 2;
            append_rzz(s.gates, phi);
            break;
        case GateKind::RzzSwap:
            // ISWAP = SWAP Rzz(pi/2) up to phase, hence SWAP Rzz(phi) = ISWAP Rzz(phi - pi/2).
            s.width = 2;
            append_rzz(s.gates, phi - kHalfPi);
            s.gates.push_back(iswap());
            break;
    }
    s.gates = merge_rz(s.gates);
    s.validate();
    return s;
}

Unitary iswap_matrix() {
    Unitary m = Unitary::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 2) = C(0, 1);
    m(2, 1) = C(0, 1);
    m(3, 3) = 1;
    return m;
}

Unitary unitary_of(const GateSequence& seq) {
    seq.validate();
    const int dim = 1 << seq.width;
    Unitary u = Unitary::Identity(dim, dim);
    for (const auto& g : seq.gates) {
        Unitary m;
        switch (g.kind) {
            case NativeKind::Rz: m = embed(rz_matrix(g.angle), g.q0, seq.width); break;
            case NativeKind::Rx: m = embed(rx_matrix(g.angle), g.q0, seq.width); break;
            case NativeKind::ISwap: m = iswap_matrix(); break;
        }
        u = m * u;
    }
    return u;
}

Unitary target_unitary(GateKind kind, double phi) {
    switch (kind) {
        case GateKind::Rx: return rx_matrix(phi);
        case GateKind::H: {
            Unitary h(2, 2);
            h << 1, 1, 1, -1;
            return h / std::sqrt(2.0);
        }
        case GateKind::Rzz:
        case GateKind::RzzSwap: {
            Unitary d = Unitary::Zero(4, 4);
            d(0, 0) = d(3, 3) = std::polar(1.0, -phi / 2);
            d(1, 1) = d(2, 2) = std::polar(1.0, phi / 2);
            if (kind == GateKind::Rzz) return d;
            Unitary sw = Unitary::Zero(4, 4);
            sw(0, 0) = sw(1, 2) = sw(2, 1) = sw(3, 3) = 1;
            return sw * d;
        }
    }
    throw InvalidArgument("target_unitary: unknown kind");
}

bool equivalent_up_to_phase(const Unitary& a, const Unitary& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("equivalent_up_to_phase: dimension mismatch");
    Eigen::Index r = 0, c = 0;
    double mag = b.cwiseAbs().maxCoeff(&r, &c);
    if (mag == 0.0) return a.cwiseAbs().maxCoeff() <= tol;
    if (std::abs(a(r, c)) == 0.0) return false;
    C phase = a(r, c) / b(r, c);
    phase /= std::abs(phase);
    return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

SwapNetworkCounts swap_network_counts(int n, int p) {
    if (n < 2 || p < 1) throw InvalidArgument("swap_network_counts: need n >= 2 and p >= 1");
    SwapNetworkCounts c;
    c.layers = static_cast<long>(n) * p;
    c.iswaps_per_pass = 3L * n * (n - 1) / 2;
    c.iswaps = c.iswaps_per_pass * p;
    return c;
}

}  // namespace qrr

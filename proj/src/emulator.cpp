#include "qrr/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

QaoaAngles fixed_angles(int p) {
    switch (p) {
        case 1: return {1, {0.615533629}, {0.3926720292447629}};
        case 2: return {2, {0.4877097328, 0.8979876956}, {0.5550603400685824, 0.29250781484335187}};
        case 3:
            return {3,
                    {0.422084082, 0.798412754, 0.9370887966},
                    {0.608757260014991, 0.45927530900125874, 0.23539562255067184}};
        default: throw InvalidArgument("fixed_angles: no tabulated angles for p = " + std::to_string(p));
    }
}

namespace {

void check_inputs(const std::vector<Edge>& edges, int m, const QaoaAngles& angles) {
    if (m < 1) throw InvalidArgument("qaoa_state: need at least one qubit");
    if (m > kMaxQubits)
        throw CapacityError("qaoa_state: " + std::to_string(m) + " qubits exceeds the statevector cap of " + std::to_string(kMaxQubits));
    if (angles.p < 1 || static_cast<int>(angles.gammas.size()) != angles.p || static_cast<int>(angles.betas.size()) != angles.p)
        throw InvalidArgument("qaoa_state: angle lists must both have length p >= 1");
    for (auto [u, v] : edges)
        if (u < 0 || v < 0 || u >= m || v >= m || u == v) throw InvalidArgument("qaoa_state: edge references an invalid qubit");
}

StateVector plus_state(int m) {
    StateVector s;
    s.m = m;
    s.amp.assign(std::size_t{1} << m, cplx(1.0 / std::sqrt(static_cast<double>(std::size_t{1} << m)), 0.0));
    return s;
}

}  // namespace

StateVector qaoa_state(const std::vector<Edge>& edges, int m, const QaoaAngles& angles) {
    check_inputs(edges, m, angles);
    StateVector s = plus_state(m);
    const std::int64_t dim = static_cast<std::int64_t>(s.amp.size());
    const std::int64_t half = dim / 2;

    std::vector<std::uint16_t> cut(dim);
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) {
        int c = 0;
        for (auto [u, v] : edges) c += static_cast<int>(((z >> u) ^ (z >> v)) & 1);
        cut[z] = static_cast<std::uint16_t>(c);
    }

    std::vector<cplx> phase(edges.size() + 1);
    cplx* a = s.amp.data();
    for (int l = 0; l < angles.p; ++l) {
        for (std::size_t c = 0; c < phase.size(); ++c) phase[c] = std::polar(1.0, -angles.gammas[l] * static_cast<double>(c));
#pragma omp parallel for schedule(static)
        for (std::int64_t z = 0; z < dim; ++z) a[z] *= phase[cut[z]];

        const double cb = std::cos(angles.betas[l]), sb = std::sin(angles.betas[l]);
        for (int q = 0; q < m; ++q) {
            const std::int64_t bit = std::int64_t{1} << q, low = bit - 1;
#pragma omp parallel for schedule(static)
            for (std::int64_t k = 0; k < half; ++k) {
                std::int64_t i0 = ((k & ~low) << 1) | (k & low);
                std::int64_t i1 = i0 | bit;
                cplx x = a[i0], y = a[i1];
                a[i0] = cplx(cb * x.real() + sb * y.imag(), cb * x.imag() - sb * y.real());
                a[i1] = cplx(cb * y.real() + sb * x.imag(), cb * y.imag() - sb * x.real());
            }
        }
    }
    return s;
}

StateVector qaoa_state_serial(const std::vector<Edge>& edges, int m, const QaoaAngles& angles) {
    check_inputs(edges, m, angles);
    StateVector s = plus_state(m);
    const std::size_t dim = s.amp.size();
    const cplx mi(0.0, -1.0);
    for (int l = 0; l < angles.p; ++l) {
        // exp(-i gamma (1 - Z_u Z_v)/2): anti-aligned pairs pick up exp(-i gamma).
        const cplx ph = std::exp(mi * angles.gammas[l]);
        for (auto [u, v] : edges)
            for (std::size_t z = 0; z < dim; ++z)
                if (((z >> u) ^ (z >> v)) & 1) s.amp[z] *= ph;
        const double cb = std::cos(angles.betas[l]), sb = std::sin(angles.betas[l]);
        for (int q = 0; q < m; ++q) {
            const std::size_t bit = std::size_t{1} << q;
            for (std::size_t z = 0; z < dim; ++z) {
                if (z & bit) continue;
                cplx x = s.amp[z], y = s.amp[z | bit];
                s.amp[z] = cb * x + mi * sb * y;
                s.amp[z | bit] = mi * sb * x + cb * y;
            }
        }
    }
    return s;
}

double norm_squared(const StateVector& s) {
    const std::int64_t dim = static_cast<std::int64_t>(s.amp.size());
    double t = 0.0;
#pragma omp parallel for reduction(+ : t) schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) t += std::norm(s.amp[z]);
    return t;
}

static void check_pair(const StateVector& s, int a, int b) {
    if (a < 0 || b < 0 || a >= s.m || b >= s.m || a == b) throw InvalidArgument("zz expectation: invalid qubit pair");
}

double zz_expectation_exact(const StateVector& s, int a, int b) {
    check_pair(s, a, b);
    const std::int64_t dim = static_cast<std::int64_t>(s.amp.size());
    double t = 0.0;
#pragma omp parallel for reduction(+ : t) schedule(static)
    for (std::int64_t z = 0; z < dim; ++z) {
        double p = std::norm(s.amp[z]);
        t += (((z >> a) ^ (z >> b)) & 1) ? -p : p;
    }
    return t;
}

double zz_expectation_exact_serial(const StateVector& s, int a, int b) {
    check_pair(s, a, b);
    double t = 0.0;
    for (std::size_t z = 0; z < s.amp.size(); ++z) {
        double sa = ((z >> a) & 1) ? -1.0 : 1.0;
        double sb = ((z >> b) & 1) ? -1.0 : 1.0;
        t += std::norm(s.amp[z]) * sa * sb;
    }
    return t;
}

double cost_expectation(const std::vector<Edge>& edges, const StateVector& s) {
    double c = 0.0;
    for (auto [u, v] : edges) c += 0.5 * (1.0 - zz_expectation_exact(s, u, v));
    return c;
}

Samples sample_bitstrings(const StateVector& s, std::int64_t n_ex, std::uint64_t seed) {
    if (n_ex < 1) throw InvalidArgument("sample_bitstrings: n_ex must be >= 1");
    std::vector<double> cdf(s.amp.size());
    double acc = 0.0;
    for (std::size_t z = 0; z < s.amp.size(); ++z) {
        acc += std::norm(s.amp[z]);
        cdf[z] = acc;
    }
    const Rng rng(seed);
    Samples out(n_ex);
    const std::int64_t last = static_cast<std::int64_t>(cdf.size()) - 1;
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n_ex; ++k) {
        double u = rng.uniform_at(static_cast<std::uint64_t>(k)) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        out[k] = static_cast<std::uint64_t>(std::min<std::int64_t>(it - cdf.begin(), last));
    }
    return out;
}

double estimate_zz(const Samples& samples, int a, int b) {
    if (samples.empty()) throw InvalidArgument("estimate_zz: no samples");
    std::int64_t t = 0;
    for (auto z : samples) t += (((z >> a) ^ (z >> b)) & 1) ? -1 : 1;
    return static_cast<double>(t) / static_cast<double>(samples.size());
}

double zz_analytic_p1(const Graph& g, int i, int j, double gamma, double beta) {
    if (i == j) throw InvalidArgument("zz_analytic_p1: i == j");
    auto w = [&](int x, int y) { return g.adjacent(x, y) ? 1.0 : 0.0; };
    std::vector<int> ks;
    for (int k : g.neighbors(i))
        if (k != j) ks.push_back(k);
    for (int k : g.neighbors(j))
        if (k != i) ks.push_back(k);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    // Vertices outside N(i) u N(j) contribute factors cos(0) = 1.
    double pi_ = 1.0, pj = 1.0, psum = 1.0, pdiff = 1.0;
    for (int k : ks) {
        double wik = w(i, k), wjk = w(j, k);
        pi_ *= std::cos(gamma * wik);
        pj *= std::cos(gamma * wjk);
        psum *= std::cos(gamma * (wik + wjk));
        pdiff *= std::cos(gamma * (wjk - wik));
    }
    const double s2 = std::sin(2 * beta), c2 = std::cos(2 * beta);
    return -s2 * c2 * std::sin(gamma * w(i, j)) * (pi_ + pj) - 0.5 * s2 * s2 * (psum - pdiff);
}

double zz_analytic_p1_cubic(const Graph& g, int i, int j, double gamma, double beta) {
    if (i == j) throw InvalidArgument("zz_analytic_p1_cubic: i == j");
    if (g.degree(i) != 3 || g.degree(j) != 3) throw DomainError("zz_analytic_p1_cubic: endpoints must have degree 3");
    const int w = g.adjacent(i, j) ? 1 : 0;
    int nij = 0;
    for (int k : g.neighbors(i)) nij += g.adjacent(k, j);
    // -2 s c sin(g) cos^2(g) { W - tan(2b) cos^2(g) sin(g)/2 [N + d_{N,3} tan^4(g) + W N tan^2(g)] },
    // expanded so that tan(2b) and tan(g) never appear.
    const double s2 = std::sin(2 * beta), c2 = std::cos(2 * beta);
    const double sg = std::sin(gamma), cg = std::cos(gamma);
    const double sg2 = sg * sg, cg2 = cg * cg;
    double bracket = nij * cg2 * cg2 + (nij == 3 ? sg2 * sg2 : 0.0) + w * nij * sg2 * cg2;
    return -2.0 * s2 * c2 * sg * cg2 * w + s2 * s2 * sg2 * bracket;
}

double apply_depolarizing(double corr, double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw InvalidArgument("apply_depolarizing: fidelity must lie in [0, 1]");
    return corr * fidelity;
}

ConfusionModel ConfusionModel::identity(int m) { return asymmetric(m, 0.0, 0.0); }

ConfusionModel ConfusionModel::symmetric(int m, double flip) { return asymmetric(m, flip, flip); }

ConfusionModel ConfusionModel::asymmetric(int m, double p01, double p10) {
    ConfusionModel c;
    c.R.assign(m, {{{1.0 - p01, p01}, {p10, 1.0 - p10}}});
    c.validate();
    return c;
}

void ConfusionModel::validate() const {
    for (const auto& r : R)
        for (const auto& row : r) {
            if (row[0] < 0 || row[1] < 0 || row[0] > 1 || row[1] > 1 || std::abs(row[0] + row[1] - 1.0) > 1e-12)
                throw InvalidArgument("confusion model rows must be probability vectors");
        }
}

Samples apply_readout_noise(const Samples& samples, const ConfusionModel& model, std::uint64_t seed) {
    model.validate();
    const int m = static_cast<int>(model.R.size());
    const Rng rng(seed);
    Samples out(samples.size());
    const std::int64_t ns = static_cast<std::int64_t>(samples.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < ns; ++k) {
        std::uint64_t z = samples[k];
        for (int q = 0; q < m; ++q) {
            int bit = static_cast<int>((z >> q) & 1);
            double flip = model.R[q][bit][1 - bit];
            if (flip > 0 && rng.uniform_at(static_cast<std::uint64_t>(k) * 64 + q) < flip) z ^= std::uint64_t{1} << q;
        }
        out[k] = z;
    }
    return out;
}

Marginal marginal(const Samples& samples, int a, int b) {
    if (samples.empty()) throw InvalidArgument("marginal: no samples");
    Marginal m{};
    for (auto z : samples) m[((z >> a) & 1) + 2 * ((z >> b) & 1)] += 1.0;
    for (auto& x : m) x /= static_cast<double>(samples.size());
    return m;
}

namespace {

// R2[t][o] for the pair (a, b), t and o indexed bit_a + 2 bit_b.
std::array<std::array<double, 4>, 4> pair_confusion(const ConfusionModel& model, int a, int b) {
    if (a < 0 || b < 0 || a >= static_cast<int>(model.R.size()) || b >= static_cast<int>(model.R.size()))
        throw InvalidArgument("confusion model does not cover the requested qubits");
    std::array<std::array<double, 4>, 4> r{};
    for (int t = 0; t < 4; ++t)
        for (int o = 0; o < 4; ++o) r[t][o] = model.R[a][t & 1][o & 1] * model.R[b][t >> 1][o >> 1];
    return r;
}

}  // namespace

Marginal forward_confusion(const Marginal& truth, const ConfusionModel& model, int a, int b) {
    auto r = pair_confusion(model, a, b);
    Marginal o{};
    for (int t = 0; t < 4; ++t)
        for (int k = 0; k < 4; ++k) o[k] += r[t][k] * truth[t];
    return o;
}

Marginal ibu_mitigate(const Marginal& observed, const ConfusionModel& model, int a, int b, int iters,
                      std::optional<Marginal> prior) {
    model.validate();
    if (iters < 1) throw InvalidArgument("ibu_mitigate: iters must be >= 1");
    double tot = 0.0;
    for (double x : observed) {
        if (x < 0) throw InvalidArgument("ibu_mitigate: negative probability");
        tot += x;
    }
    if (std::abs(tot - 1.0) > 1e-9) throw InvalidArgument("ibu_mitigate: observed distribution is not normalized");
    auto r = pair_confusion(model, a, b);
    Marginal t = prior.value_or(Marginal{0.25, 0.25, 0.25, 0.25});
    for (int it = 0; it < iters; ++it) {
        Marginal denom{};
        for (int o = 0; o < 4; ++o)
            for (int l = 0; l < 4; ++l) denom[o] += r[l][o] * t[l];
        Marginal nt{};
        for (int i = 0; i < 4; ++i) {
            double acc = 0.0;
            for (int o = 0; o < 4; ++o)
                if (denom[o] > 0) acc += r[i][o] * observed[o] / denom[o];
            nt[i] = t[i] * acc;
        }
        double s = nt[0] + nt[1] + nt[2] + nt[3];
        for (auto& x : nt) x /= s;
        t = nt;
    }
    return t;
}

double zz_from_marginal(const Marginal& m) { return m[0] + m[3] - m[1] - m[2]; }

}  // namespace qrr

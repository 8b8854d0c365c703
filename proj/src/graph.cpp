#include "qrr/graph.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adj_(n) {
    if (n < 0) throw InvalidArgument("negative vertex count");
    for (auto& [u, v] : edges_) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
        if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw InvalidArgument("duplicate edge");
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool Graph::adjacent(int u, int v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

bool Graph::is_regular(int d) const {
    return std::all_of(adj_.begin(), adj_.end(), [d](const auto& a) { return static_cast<int>(a.size()) == d; });
}

ProblemInstance::ProblemInstance(int n, std::vector<Edge> edges, std::uint64_t seed, std::string id)
    : Graph(n, std::move(edges)), seed_(seed), id_(std::move(id)) {
    if (n < 4 || n % 2 != 0) throw InvalidArgument("instance size must be even and >= 4, got " + std::to_string(n));
    if (!is_regular(3)) throw InvalidArgument("instance " + id_ + " is not 3-regular");
}

std::string default_instance_id(int n, std::uint64_t seed) {
    return "rr3_n" + std::to_string(n) + "_s" + std::to_string(seed);
}

ProblemInstance generate_regular(int n, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) throw InvalidArgument("generate_regular: n must be even and >= 4, got " + std::to_string(n));
    Rng rng(seed);
    std::vector<int> stubs(3 * static_cast<std::size_t>(n));
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    for (;;) {
        for (int v = 0; v < n; ++v) stubs[3 * v] = stubs[3 * v + 1] = stubs[3 * v + 2] = v;
        for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[rng.below(i + 1)]);
        edges.clear();
        bool ok = true;
        for (std::size_t i = 0; i < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) { ok = false; break; }
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (!ok) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        return ProblemInstance(n, std::move(edges), seed, default_instance_id(n, seed));
    }
}

static void check_length(const Graph& g, const Assignment& z) {
    if (static_cast<int>(z.size()) != g.n())
        throw InvalidArgument("assignment length " + std::to_string(z.size()) + " != n = " + std::to_string(g.n()));
    for (int x : z)
        if (x != 1 && x != -1) throw InvalidArgument("assignment entries must be +1 or -1");
}

int cut_value(const Graph& g, const Assignment& z) {
    check_length(g, z);
    int c = 0;
    for (auto [u, v] : g.edges()) c += z[u] != z[v];
    return c;
}

int ising_value(const Graph& g, const Assignment& z) {
    check_length(g, z);
    int s = 0;
    for (auto [u, v] : g.edges()) s += z[u] * z[v];
    return s;
}

double approximation_ratio(const Graph& g, const Assignment& z, int best_cut) {
    if (best_cut <= 0) throw InvalidArgument("approximation_ratio: best_cut must be positive");
    return static_cast<double>(cut_value(g, z)) / best_cut;
}

int flip_gain(const Graph& g, const Assignment& z, int v) {
    int s = 0;
    for (int u : g.neighbors(v)) s += z[u] * z[v];
    return s;
}

namespace {

// Bit i of a mask set means z_i = -1. With -1 < +1, the lexicographically smaller of two
// assignments is the one holding the set bit at the lowest differing index.
bool lex_less(std::uint64_t a, std::uint64_t b) {
    std::uint64_t d = a ^ b;
    if (!d) return false;
    return (a & d & (~d + 1)) != 0;
}

}  // namespace

MaxCutResult brute_force_maxcut(const Graph& g) {
    const int n = g.n();
    if (n > kBruteForceMaxN)
        throw CapacityError("brute_force_maxcut: n = " + std::to_string(n) + " exceeds cap " + std::to_string(kBruteForceMaxN));
    if (n == 0) return {0, {}};
    if (n == 1) return {0, {1}};

    // Free variables are 1..n-1. Split the top bits into chunks so threads can scan in
    // parallel; inside a chunk a Gray-code walk updates the cut in O(degree).
    const int free_bits = n - 1;
    const int chunk_bits = std::min(free_bits, 6);
    const int inner_bits = free_bits - chunk_bits;
    const long chunks = 1L << chunk_bits;

    std::vector<int> best_cut(chunks, -1);
    std::vector<std::uint64_t> best_mask(chunks, 0);

#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < chunks; ++c) {
        std::vector<int> z(n, 1);
        std::uint64_t mask = static_cast<std::uint64_t>(c) << (1 + inner_bits);
        for (int i = 1; i < n; ++i)
            if ((mask >> i) & 1) z[i] = -1;
        int cut = 0;
        for (auto [u, v] : g.edges()) cut += z[u] != z[v];
        int bc = cut;
        std::uint64_t bm = mask;
        const std::uint64_t steps = 1ULL << inner_bits;
        for (std::uint64_t k = 1; k < steps; ++k) {
            int bit = 1 + __builtin_ctzll(k);
            int s = 0;
            for (int u : g.neighbors(bit)) s += z[u] * z[bit];
            cut += s;
            z[bit] = -z[bit];
            mask ^= 1ULL << bit;
            if (cut > bc || (cut == bc && lex_less(mask, bm))) {
                bc = cut;
                bm = mask;
            }
        }
        best_cut[c] = bc;
        best_mask[c] = bm;
    }

    int bc = -1;
    std::uint64_t bm = 0;
    for (long c = 0; c < chunks; ++c) {
        if (best_cut[c] > bc || (best_cut[c] == bc && lex_less(best_mask[c], bm))) {
            bc = best_cut[c];
            bm = best_mask[c];
        }
    }
    MaxCutResult r;
    r.cut = bc;
    r.z.assign(n, 1);
    for (int i = 1; i < n; ++i)
        if ((bm >> i) & 1) r.z[i] = -1;
    return r;
}

namespace {

void cycle_dfs(const Graph& g, int start, int v, int len, int max_len, std::vector<char>& on_path,
               std::vector<long>& counts) {
    for (int u : g.neighbors(v)) {
        if (u == start && len >= 3) {
            ++counts[len];
            continue;
        }
        if (u <= start || on_path[u] || len == max_len) continue;
        on_path[u] = 1;
        cycle_dfs(g, start, u, len + 1, max_len, on_path, counts);
        on_path[u] = 0;
    }
}

}  // namespace

std::map<int, long> cycle_census(const Graph& g, int max_len) {
    if (max_len > 8) throw InvalidArgument("cycle_census: max_len must be <= 8");
    std::vector<long> counts(std::max(max_len, 2) + 1, 0);
    std::vector<char> on_path(g.n(), 0);
    // Each cycle is rooted at its smallest vertex and walked in both directions.
    for (int s = 0; s < g.n(); ++s) {
        on_path[s] = 1;
        cycle_dfs(g, s, s, 1, max_len, on_path, counts);
        on_path[s] = 0;
    }
    std::map<int, long> out;
    for (int l = 3; l <= max_len; ++l) out[l] = counts[l] / 2;
    return out;
}

Graph complete_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, std::move(e));
}

Graph complete_bipartite(int a, int b) {
    std::vector<Edge> e;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
    return Graph(a + b, std::move(e));
}

Graph ring_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(e));
}

void write_edge_list(std::ostream& os, const Graph& g) {
    os << g.n() << ' ' << g.num_edges() << '\n';
    for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is) {
    long n = -1, m = -1;
    if (!(is >> n >> m) || n < 0 || m < 0) throw DataError("edge list: malformed header");
    std::vector<Edge> e;
    e.reserve(m);
    for (long k = 0; k < m; ++k) {
        long u, v;
        if (!(is >> u >> v)) throw DataError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(k));
        if (u < 0 || v < 0 || u >= n || v >= n) throw DataError("edge list: vertex out of range on edge " + std::to_string(k));
        e.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    try {
        return Graph(static_cast<int>(n), std::move(e));
    } catch (const InvalidArgument& ex) {
        throw DataError(std::string("edge list: ") + ex.what());
    }
}

void save_edge_list(const std::string& path, const Graph& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    write_edge_list(os, g);
    if (!os) throw DataError("write failed: " + path);
}

Graph load_edge_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open " + path);
    try {
        return read_edge_list(is);
    } catch (const DataError& ex) {
        throw DataError(path + ": " + ex.what());
    }
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["n"] = r.n;
        j["seed"] = r.seed;
        j["path"] = r.path;
        os << j.dump() << '\n';
    }
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open manifest " + path);
    std::vector<ManifestEntry> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            rows.push_back({j.at("id").get<std::string>(), j.at("n").get<int>(), j.at("seed").get<std::uint64_t>(),
                            j.at("path").get<std::string>()});
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return rows;
}

ProblemInstance load_instance(const ManifestEntry& row, const std::string& manifest_path) {
    namespace fs = std::filesystem;
    fs::path p(row.path);
    if (p.is_relative()) p = fs::path(manifest_path).parent_path() / p;
    Graph g = load_edge_list(p.string());
    if (g.n() != row.n) throw DataError(p.string() + ": vertex count " + std::to_string(g.n()) + " != manifest n " + std::to_string(row.n));
    try {
        return ProblemInstance(g.n(), g.edges(), row.seed, row.id);
    } catch (const InvalidArgument& ex) {
        throw DataError(p.string() + ": " + ex.what());
    }
}

}  // namespace qrr

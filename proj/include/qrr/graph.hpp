#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qrr {

using Edge = std::pair<int, int>;

// Spins in {-1, +1}.
using Assignment = std::vector<int>;

// Simple undirected unit-weight graph. Edges are stored normalized (u < v) and sorted.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool adjacent(int u, int v) const;
    bool is_regular(int d) const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

// A unit-weight 3-regular instance.
class ProblemInstance : public Graph {
public:
    ProblemInstance() = default;
    ProblemInstance(int n, std::vector<Edge> edges, std::uint64_t seed, std::string id);

    std::uint64_t seed() const { return seed_; }
    const std::string& id() const { return id_; }

private:
    std::uint64_t seed_ = 0;
    std::string id_;
};

// Configuration-model sampling with rejection of loops and multi-edges.
ProblemInstance generate_regular(int n, std::uint64_t seed);

std::string default_instance_id(int n, std::uint64_t seed);

int cut_value(const Graph& g, const Assignment& z);
int ising_value(const Graph& g, const Assignment& z);
double approximation_ratio(const Graph& g, const Assignment& z, int best_cut);

// Change in cut if spin v were flipped.
int flip_gain(const Graph& g, const Assignment& z, int v);

struct MaxCutResult {
    int cut = 0;
    Assignment z;
};

constexpr int kBruteForceMaxN = 26;

// Exhaustive search over all 2^(n-1) classes with z_0 = +1. Among optimal assignments the
// lexicographically smallest (ordering -1 < +1) is returned.
MaxCutResult brute_force_maxcut(const Graph& g);

// Number of simple cycles of each length 3..max_len (max_len <= 8).
std::map<int, long> cycle_census(const Graph& g, int max_len);

// Test graphs.
Graph complete_graph(int n);
Graph complete_bipartite(int a, int b);
Graph ring_graph(int n);

// Edge-list text format: "n m" then m lines "u v" with u < v, 0-indexed.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);
void save_edge_list(const std::string& path, const Graph& g);
Graph load_edge_list(const std::string& path);

struct ManifestEntry {
    std::string id;
    int n = 0;
    std::uint64_t seed = 0;
    std::string path;
};

// Manifest: JSON lines, one {id, n, seed, path} record per line.
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& rows);
std::vector<ManifestEntry> read_manifest(const std::string& path);

// Loads the instance a manifest row points at (path relative to the manifest's directory
// when not absolute) and checks it is 3-regular.
ProblemInstance load_instance(const ManifestEntry& row, const std::string& manifest_path);

}  // namespace qrr

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qrr/graph.hpp"

namespace qrr {

// Largest subgraph a pair task can induce on a 3-regular host.
inline int max_task_size(int p) { return 1 + 6 * ((1 << p) - 1); }
inline int max_cone_size(int p) { return 1 + 3 * ((1 << p) - 1); }

// Vertices within distance p of v (v included), sorted.
std::vector<int> light_cone(const Graph& g, int v, int p);

// Pairs (i < j) whose p-cones intersect, i.e. dist(i, j) <= 2p. Sorted.
std::vector<Edge> correlated_pairs(const Graph& g, int p);

struct SubcircuitTask {
    std::vector<Edge> sub_edges;  // induced subgraph, subgraph coordinates
    int size = 0;
    int anchor_a = 0, anchor_b = 0;
    std::string instance_id;
    int orig_i = 0, orig_j = 0;
    std::vector<int> vertices;  // subgraph vertex -> original vertex (sorted ascending)

    // Original vertex -> subgraph vertex, or -1.
    int local(int orig) const;
    Graph graph() const { return Graph(size, sub_edges); }
};

SubcircuitTask subproblem(const Graph& g, int i, int j, int p, const std::string& instance_id = "");

constexpr int kWlRounds = 3;

// Weisfeiler-Lehman digest with both anchors given the same distinguished start color.
std::uint64_t wl_hash(const SubcircuitTask& t, int rounds = kWlRounds);

// A map a-vertex -> b-vertex that is a bijection, preserves adjacency and takes the anchor
// pair of a onto the anchor pair of b (in either order), if one exists.
std::optional<std::vector<int>> are_isomorphic(const SubcircuitTask& a, const SubcircuitTask& b);

// Re-checks the three conditions for a stored map: every vertex assigned, assignment
// injective, and edges mapped onto edges (with anchors onto anchors).
bool verify_isomorphism(const SubcircuitTask& a, const SubcircuitTask& b, const std::vector<int>& map);

struct IsoMember {
    std::string instance_id;
    int i = 0, j = 0;
    std::vector<int> map;  // member vertex -> canonical vertex
};

struct IsoClass {
    SubcircuitTask canonical_task;
    std::uint64_t hash = 0;
    std::string key;  // hex digest, "#k" suffix for the k-th distinct class sharing a digest
    std::size_t member_count = 0;
    std::vector<IsoMember> members;  // filled only when the database stores members
};

// Isomorphism database: the WL digest is a pre-filter and the backtracking matcher decides.
// Single writer; merge per-thread databases with merge().
class IsoDatabase {
public:
    explicit IsoDatabase(bool store_members = false) : store_members_(store_members) {}

    struct Hit {
        std::size_t cls;
        bool inserted;
    };
    Hit insert(const SubcircuitTask& t);
    // Same, with the task's wl_hash already computed.
    Hit insert(const SubcircuitTask& t, std::uint64_t hash) { return insert_with_hash(t, hash, 1); }
    // Class index of an already-known task, if any.
    std::optional<std::size_t> find(const SubcircuitTask& t) const;

    void merge(const IsoDatabase& other);

    std::size_t size() const { return classes_.size(); }
    const IsoClass& operator[](std::size_t k) const { return classes_[k]; }
    const std::vector<IsoClass>& classes() const { return classes_; }

    // JSON lines: {key, hash, size, sub_edges, anchors, member_count}.
    void save(const std::string& path) const;
    static IsoDatabase load(const std::string& path);

private:
    Hit insert_with_hash(const SubcircuitTask& t, std::uint64_t h, std::size_t count);

    bool store_members_;
    std::vector<IsoClass> classes_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash_;
};

std::vector<IsoClass> dedup_tasks(const std::vector<SubcircuitTask>& tasks, bool store_members = true);

}  // namespace qrr

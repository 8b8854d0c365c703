#include "qrr/lightcone.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

namespace {

// BFS ball with an epoch-stamped visited array so repeated calls cost O(ball), not O(n).
struct BallScratch {
    std::vector<std::uint32_t> stamp;
    std::vector<int> dist;
    std::uint32_t epoch = 0;
};

void ball(const Graph& g, int v, int r, std::vector<int>& out) {
    thread_local BallScratch s;
    if (static_cast<int>(s.stamp.size()) < g.n()) {
        s.stamp.assign(g.n(), 0);
        s.dist.assign(g.n(), 0);
        s.epoch = 0;
    }
    if (++s.epoch == 0) {
        std::fill(s.stamp.begin(), s.stamp.end(), 0);
        s.epoch = 1;
    }
    out.clear();
    out.push_back(v);
    s.stamp[v] = s.epoch;
    s.dist[v] = 0;
    for (std::size_t h = 0; h < out.size(); ++h) {
        int u = out[h];
        if (s.dist[u] == r) continue;
        for (int w : g.neighbors(u)) {
            if (s.stamp[w] == s.epoch) continue;
            s.stamp[w] = s.epoch;
            s.dist[w] = s.dist[u] + 1;
            out.push_back(w);
        }
    }
}

}  // namespace

std::vector<int> light_cone(const Graph& g, int v, int p) {
    if (v < 0 || v >= g.n()) throw InvalidArgument("light_cone: vertex out of range");
    if (p < 1) throw InvalidArgument("light_cone: p must be >= 1");
    std::vector<int> out;
    ball(g, v, p, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> correlated_pairs(const Graph& g, int p) {
    if (p < 1) throw InvalidArgument("correlated_pairs: p must be >= 1");
    std::vector<Edge> pairs;
    std::vector<int> b;
    for (int i = 0; i < g.n(); ++i) {
        ball(g, i, 2 * p, b);
        std::sort(b.begin(), b.end());
        for (int j : b)
            if (j > i) pairs.emplace_back(i, j);
    }
    return pairs;
}

int SubcircuitTask::local(int orig) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), orig);
    if (it == vertices.end() || *it != orig) return -1;
    return static_cast<int>(it - vertices.begin());
}

SubcircuitTask subproblem(const Graph& g, int i, int j, int p, const std::string& instance_id) {
    if (i < 0 || j < 0 || i >= g.n() || j >= g.n() || i == j) throw InvalidArgument("subproblem: invalid pair");
    if (p < 1) throw InvalidArgument("subproblem: p must be >= 1");
    std::vector<int> ci, cj;
    ball(g, i, p, ci);
    ball(g, j, p, cj);
    std::sort(ci.begin(), ci.end());
    std::sort(cj.begin(), cj.end());
    SubcircuitTask t;
    std::set_union(ci.begin(), ci.end(), cj.begin(), cj.end(), std::back_inserter(t.vertices));
    if (t.vertices.size() == ci.size() + cj.size())
        throw DomainError("subproblem: light cones of " + std::to_string(i) + " and " + std::to_string(j) + " do not intersect at p=" + std::to_string(p));
    t.size = static_cast<int>(t.vertices.size());
    for (int a = 0; a < t.size; ++a) {
        for (int w : g.neighbors(t.vertices[a])) {
            if (w <= t.vertices[a]) continue;
            int b = t.local(w);
            if (b >= 0) t.sub_edges.emplace_back(a, b);
        }
    }
    std::sort(t.sub_edges.begin(), t.sub_edges.end());
    t.anchor_a = t.local(std::min(i, j));
    t.anchor_b = t.local(std::max(i, j));
    t.orig_i = std::min(i, j);
    t.orig_j = std::max(i, j);
    t.instance_id = instance_id;
    return t;
}

namespace {

std::vector<std::vector<int>> adjacency_lists(const SubcircuitTask& t) {
    std::vector<std::vector<int>> adj(t.size);
    for (auto [u, v] : t.sub_edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

std::vector<std::uint64_t> wl_colors(const SubcircuitTask& t, const std::vector<std::vector<int>>& adj, int rounds) {
    std::vector<std::uint64_t> c(t.size, 1), next(t.size);
    c[t.anchor_a] = c[t.anchor_b] = 2;
    std::vector<std::uint64_t> nb;
    for (int r = 0; r < rounds; ++r) {
        for (int v = 0; v < t.size; ++v) {
            nb.clear();
            for (int u : adj[v]) nb.push_back(c[u]);
            std::sort(nb.begin(), nb.end());
            std::uint64_t h = mix64(c[v]);
            for (auto x : nb) h = hash_combine(h, x);
            next[v] = h;
        }
        c.swap(next);
    }
    return c;
}

}  // namespace

std::uint64_t wl_hash(const SubcircuitTask& t, int rounds) {
    auto adj = adjacency_lists(t);
    auto c = wl_colors(t, adj, rounds);
    std::sort(c.begin(), c.end());
    std::uint64_t h = hash_combine(static_cast<std::uint64_t>(t.size), t.sub_edges.size());
    for (auto x : c) h = hash_combine(h, x);
    return h;
}

bool verify_isomorphism(const SubcircuitTask& a, const SubcircuitTask& b, const std::vector<int>& map) {
    if (a.size != b.size || static_cast<int>(map.size()) != a.size) return false;
    // Condition 1: every vertex of a is assigned a vertex of b.
    for (int x : map)
        if (x < 0 || x >= b.size) return false;
    // Condition 2: no vertex of b receives two vertices of a.
    std::vector<char> used(b.size, 0);
    for (int x : map) {
        if (used[x]) return false;
        used[x] = 1;
    }
    // Condition 3: adjacency preserved (equal edge counts make it an iff).
    if (a.sub_edges.size() != b.sub_edges.size()) return false;
    for (auto [u, v] : a.sub_edges) {
        Edge e{std::min(map[u], map[v]), std::max(map[u], map[v])};
        if (!std::binary_search(b.sub_edges.begin(), b.sub_edges.end(), e)) return false;
    }
    int ma = map[a.anchor_a], mb = map[a.anchor_b];
    return (ma == b.anchor_a && mb == b.anchor_b) || (ma == b.anchor_b && mb == b.anchor_a);
}

namespace {

struct Matcher {
    const SubcircuitTask& a;
    const SubcircuitTask& b;
    std::vector<std::vector<int>> adj_a, adj_b;
    std::vector<std::uint64_t> col_a, col_b;
    std::vector<std::uint64_t> bits_a, bits_b;
    std::vector<int> order, parent;
    std::vector<int> map;
    std::vector<char> used;

    Matcher(const SubcircuitTask& a_, const SubcircuitTask& b_) : a(a_), b(b_) {
        adj_a = adjacency_lists(a);
        adj_b = adjacency_lists(b);
        col_a = wl_colors(a, adj_a, kWlRounds);
        col_b = wl_colors(b, adj_b, kWlRounds);
        bits_a.assign(a.size, 0);
        bits_b.assign(b.size, 0);
        for (auto [u, v] : a.sub_edges) bits_a[u] |= 1ULL << v, bits_a[v] |= 1ULL << u;
        for (auto [u, v] : b.sub_edges) bits_b[u] |= 1ULL << v, bits_b[v] |= 1ULL << u;
        // Match order: anchors first, then BFS so every later vertex has a mapped parent.
        std::vector<char> seen(a.size, 0);
        auto push = [&](int v, int par) {
            if (seen[v]) return;
            seen[v] = 1;
            order.push_back(v);
            parent.push_back(par);
        };
        push(a.anchor_a, -1);
        push(a.anchor_b, -1);
        for (std::size_t h = 0; h < order.size(); ++h)
            for (int u : adj_a[order[h]]) push(u, order[h]);
        for (int v = 0; v < a.size; ++v) push(v, -1);
    }

    bool consistent(int v, int c) const {
        if (col_a[v] != col_b[c] || adj_a[v].size() != adj_b[c].size()) return false;
        for (std::size_t k = 0; k < order.size(); ++k) {
            int u = order[k];
            if (map[u] < 0) continue;
            bool ea = (bits_a[v] >> u) & 1;
            bool eb = (bits_b[c] >> map[u]) & 1;
            if (ea != eb) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order.size()) return true;
        int v = order[depth];
        int par = parent[depth];
        auto try_c = [&](int c) {
            if (used[c] || !consistent(v, c)) return false;
            map[v] = c;
            used[c] = 1;
            if (extend(depth + 1)) return true;
            map[v] = -1;
            used[c] = 0;
            return false;
        };
        if (par >= 0) {
            for (int c : adj_b[map[par]])
                if (try_c(c)) return true;
        } else {
            for (int c = 0; c < b.size; ++c)
                if (try_c(c)) return true;
        }
        return false;
    }

    std::optional<std::vector<int>> run() {
        for (int orient = 0; orient < 2; ++orient) {
            int ta = orient ? b.anchor_b : b.anchor_a;
            int tb = orient ? b.anchor_a : b.anchor_b;
            map.assign(a.size, -1);
            used.assign(b.size, 0);
            if (!consistent(a.anchor_a, ta)) continue;
            map[a.anchor_a] = ta;
            used[ta] = 1;
            if (!consistent(a.anchor_b, tb)) continue;
            map[a.anchor_b] = tb;
            used[tb] = 1;
            if (extend(2)) return map;
        }
        return std::nullopt;
    }
};

}  // namespace

std::optional<std::vector<int>> are_isomorphic(const SubcircuitTask& a, const SubcircuitTask& b) {
    if (a.size != b.size || a.sub_edges.size() != b.sub_edges.size()) return std::nullopt;
    if (a.size > 64) throw CapacityError("are_isomorphic: tasks above 64 vertices are not supported");
    Matcher m(a, b);
    auto ca = m.col_a, cb = m.col_b;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return std::nullopt;
    auto r = m.run();
    if (r && !verify_isomorphism(a, b, *r)) throw NumericalError("are_isomorphic: matcher produced an invalid map");
    return r;
}

static std::string hex_key(std::uint64_t h, std::size_t k) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    std::string s(buf);
    if (k > 0) s += "#" + std::to_string(k);
    return s;
}

IsoDatabase::Hit IsoDatabase::insert(const SubcircuitTask& t) { return insert_with_hash(t, wl_hash(t), 1); }

IsoDatabase::Hit IsoDatabase::insert_with_hash(const SubcircuitTask& t, std::uint64_t h, std::size_t count) {
    auto& bucket = by_hash_[h];
    for (std::size_t idx : bucket) {
        auto m = are_isomorphic(t, classes_[idx].canonical_task);
        if (!m) continue;
        classes_[idx].member_count += count;
        if (store_members_ && count == 1) classes_[idx].members.push_back({t.instance_id, t.orig_i, t.orig_j, std::move(*m)});
        return {idx, false};
    }
    IsoClass c;
    c.canonical_task = t;
    c.hash = h;
    c.key = hex_key(h, bucket.size());
    c.member_count = count;
    if (store_members_ && count == 1) {
        std::vector<int> id(t.size);
        for (int v = 0; v < t.size; ++v) id[v] = v;
        c.members.push_back({t.instance_id, t.orig_i, t.orig_j, std::move(id)});
    }
    bucket.push_back(classes_.size());
    classes_.push_back(std::move(c));
    return {classes_.size() - 1, true};
}

std::optional<std::size_t> IsoDatabase::find(const SubcircuitTask& t) const {
    auto it = by_hash_.find(wl_hash(t));
    if (it == by_hash_.end()) return std::nullopt;
    for (std::size_t idx : it->second)
        if (are_isomorphic(t, classes_[idx].canonical_task)) return idx;
    return std::nullopt;
}

void IsoDatabase::merge(const IsoDatabase& other) {
    for (const auto& oc : other.classes_) {
        auto hit = insert_with_hash(oc.canonical_task, oc.hash, oc.member_count);
        if (!store_members_ || oc.members.empty()) continue;
        auto& mine = classes_[hit.cls];
        if (hit.inserted) {
            mine.members = oc.members;
            continue;
        }
        auto iso = are_isomorphic(oc.canonical_task, mine.canonical_task);
        for (const auto& m : oc.members) {
            IsoMember nm = m;
            for (int& x : nm.map) x = (*iso)[x];
            mine.members.push_back(std::move(nm));
        }
    }
}

void IsoDatabase::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    for (const auto& c : classes_) {
        nlohmann::ordered_json j;
        j["key"] = c.key;
        j["hash"] = hex_key(c.hash, 0);
        j["size"] = c.canonical_task.size;
        auto e = nlohmann::json::array();
        for (auto [u, v] : c.canonical_task.sub_edges) e.push_back({u, v});
        j["sub_edges"] = e;
        j["anchors"] = {c.canonical_task.anchor_a, c.canonical_task.anchor_b};
        j["member_count"] = c.member_count;
        os << j.dump() << '\n';
    }
}

IsoDatabase IsoDatabase::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open " + path);
    IsoDatabase db;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            SubcircuitTask t;
            t.size = j.at("size").get<int>();
            for (const auto& e : j.at("sub_edges")) t.sub_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            t.anchor_a = j.at("anchors").at(0).get<int>();
            t.anchor_b = j.at("anchors").at(1).get<int>();
            t.vertices.resize(t.size);
            for (int v = 0; v < t.size; ++v) t.vertices[v] = v;
            auto h = std::stoull(j.at("hash").get<std::string>(), nullptr, 16);
            if (h != wl_hash(t)) throw DataError("digest mismatch");
            db.insert_with_hash(t, h, j.at("member_count").get<std::size_t>());
        } catch (const std::exception& ex) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return db;
}

std::vector<IsoClass> dedup_tasks(const std::vector<SubcircuitTask>& tasks, bool store_members) {
    IsoDatabase db(store_members);
    for (const auto& t : tasks) db.insert(t);
    return db.classes();
}

}  // namespace qrr

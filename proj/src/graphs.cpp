#include "dpcr/graphs.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace dpcr {

DynamicGraph::DynamicGraph(int n) : n_(n), adj_(n) {
    if (n < 1) throw std::invalid_argument("DynamicGraph: need >= 1 vertex");
}

void DynamicGraph::apply(const Update& u) {
    switch (u.kind) {
        case Update::Kind::Noop:
            return;
        case Update::Kind::InsertEdge:
            insert_edge(static_cast<int>(u.a), static_cast<int>(u.b));
            return;
        case Update::Kind::DeleteEdge:
            delete_edge(static_cast<int>(u.a), static_cast<int>(u.b));
            return;
        default:
            throw std::invalid_argument("DynamicGraph: element update");
    }
}

static std::pair<int, int> ekey(int u, int v) {
    return {std::min(u, v), std::max(u, v)};
}

void DynamicGraph::insert_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("insert_edge: vertex out of range");
    if (u == v) throw std::invalid_argument("insert_edge: self loop");
    int64_t& m = mult_[ekey(u, v)];
    if (++m == 1) {
        adj_[u].insert(v);
        adj_[v].insert(u);
        ++edges_;
    }
}

void DynamicGraph::delete_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("delete_edge: vertex out of range");
    auto it = mult_.find(ekey(u, v));
    if (it == mult_.end() || it->second == 0) return;  // absent: no-op
    if (--it->second == 0) {
        adj_[u].erase(v);
        adj_[v].erase(u);
        --edges_;
    }
}

bool DynamicGraph::has_edge(int u, int v) const {
    return u >= 0 && u < n_ && adj_[u].count(v) > 0;
}

std::vector<std::pair<int, int>> DynamicGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges_);
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

// --------------------------------------------------------------------------
// maximum matching via blossom contraction

namespace {

struct BlossomSearch {
    const std::vector<std::set<int>>& adj;
    std::vector<int>& match;
    int n;
    std::vector<int> p, base;
    std::vector<char> used, flower;

    BlossomSearch(const std::vector<std::set<int>>& a, std::vector<int>& m)
        : adj(a), match(m), n(static_cast<int>(a.size())) {}

    int lca(int a, int b) {
        std::vector<char> seen(n, 0);
        for (;;) {
            a = base[a];
            seen[a] = 1;
            if (match[a] == -1) break;
            a = p[match[a]];
        }
        for (;;) {
            b = base[b];
            if (seen[b]) return b;
            b = p[match[b]];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base[v] != b) {
            flower[base[v]] = 1;
            flower[base[match[v]]] = 1;
            p[v] = child;
            child = match[v];
            v = p[match[v]];
        }
    }

    // BFS for an augmenting path from a free root; applies it when found
    bool find_path(int root) {
        used.assign(n, 0);
        p.assign(n, -1);
        base.resize(n);
        for (int i = 0; i < n; ++i) base[i] = i;
        used[root] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int to : adj[v]) {
                if (base[v] == base[to] || match[v] == to) continue;
                if (to == root || (match[to] != -1 && p[match[to]] != -1)) {
                    // odd cycle: contract the blossom
                    int cur = lca(v, to);
                    flower.assign(n, 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 0; i < n; ++i)
                        if (flower[base[i]]) {
                            base[i] = cur;
                            if (!used[i]) {
                                used[i] = 1;
                                q.push(i);
                            }
                        }
                } else if (p[to] == -1) {
                    p[to] = v;
                    if (match[to] == -1) {
                        for (int u = to; u != -1;) {
                            int pv = p[u], ppv = match[pv];
                            match[u] = pv;
                            match[pv] = u;
                            u = ppv;
                        }
                        return true;
                    }
                    used[match[to]] = 1;
                    q.push(match[to]);
                }
            }
        }
        return false;
    }
};

// grow `match` to a maximum matching; returns number of matched pairs
int grow_to_maximum(const std::vector<std::set<int>>& adj,
                    std::vector<int>& match) {
    BlossomSearch bs(adj, match);
    int n = static_cast<int>(adj.size());
    for (int v = 0; v < n; ++v)
        if (match[v] == -1 && !adj[v].empty()) bs.find_path(v);
    int size = 0;
    for (int v = 0; v < n; ++v)
        if (match[v] != -1) ++size;
    return size / 2;
}

}  // namespace

int max_matching_size(const DynamicGraph& g) {
    int n = g.vertex_count();
    std::vector<std::set<int>> adj(n);
    for (int v = 0; v < n; ++v) adj[v] = g.neighbors(v);
    std::vector<int> match(n, -1);
    // cheap greedy seed before the blossom phases
    for (int v = 0; v < n; ++v) {
        if (match[v] != -1) continue;
        for (int u : adj[v])
            if (match[u] == -1) {
                match[v] = u;
                match[u] = v;
                break;
            }
    }
    return grow_to_maximum(adj, match);
}

IncrementalMatching::IncrementalMatching(int n)
    : n_(n), adj_(n), match_(n, -1) {
    if (n < 1) throw std::invalid_argument("IncrementalMatching: need >= 1 vertex");
}

void IncrementalMatching::augment_all() {
    size_ = grow_to_maximum(adj_, match_);
}

void IncrementalMatching::insert_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v)
        throw std::invalid_argument("IncrementalMatching: bad edge");
    int64_t& m = mult_[ekey(u, v)];
    if (++m > 1) return;
    adj_[u].insert(v);
    adj_[v].insert(u);
    // the matching stays maximum unless a new augmenting path runs through
    // (u,v); one sweep over free vertices finds it
    augment_all();
}

void IncrementalMatching::delete_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v)
        throw std::invalid_argument("IncrementalMatching: bad edge");
    auto it = mult_.find(ekey(u, v));
    if (it == mult_.end() || it->second == 0) return;
    if (--it->second > 0) return;
    adj_[u].erase(v);
    adj_[v].erase(u);
    if (match_[u] == v) {
        match_[u] = -1;
        match_[v] = -1;
    }
    augment_all();
}

void IncrementalMatching::apply(const Update& u) {
    switch (u.kind) {
        case Update::Kind::Noop:
            return;
        case Update::Kind::InsertEdge:
            insert_edge(static_cast<int>(u.a), static_cast<int>(u.b));
            return;
        case Update::Kind::DeleteEdge:
            delete_edge(static_cast<int>(u.a), static_cast<int>(u.b));
            return;
        default:
            throw std::invalid_argument("IncrementalMatching: element update");
    }
}

// --------------------------------------------------------------------------

std::vector<int> core_numbers(const DynamicGraph& g) {
    int n = g.vertex_count();
    std::vector<int> deg(n), core(n, 0);
    int maxdeg = 0;
    for (int v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        maxdeg = std::max(maxdeg, deg[v]);
    }
    // bucket sort by degree, peel minimum-degree vertices
    std::vector<std::vector<int>> bucket(maxdeg + 1);
    for (int v = 0; v < n; ++v) bucket[deg[v]].push_back(v);
    std::vector<char> removed(n, 0);
    int k = 0;
    for (int d = 0; d <= maxdeg; ++d) {
        for (size_t i = 0; i < bucket[d].size(); ++i) {
            int v = bucket[d][i];
            if (removed[v] || deg[v] > d) continue;
            k = std::max(k, deg[v]);
            core[v] = k;
            removed[v] = 1;
            for (int u : g.neighbors(v)) {
                if (removed[u]) continue;
                if (deg[u] > deg[v]) {
                    --deg[u];
                    bucket[deg[u]].push_back(u);
                }
            }
        }
    }
    return core;
}

int core_number(const DynamicGraph& g, int v) {
    if (v < 0 || v >= g.vertex_count())
        throw std::invalid_argument("core_number: vertex out of range");
    return core_numbers(g)[v];
}

std::vector<int64_t> degree_histogram(const DynamicGraph& g) {
    int n = g.vertex_count();
    std::vector<int64_t> hist(n, 0);
    for (int v = 0; v < n; ++v) {
        int d = g.degree(v);
        if (d >= 1) ++hist[d];
    }
    return hist;
}

int64_t count_degree_at_least(const DynamicGraph& g, int tau) {
    int64_t c = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) >= tau) ++c;
    return c;
}

// --------------------------------------------------------------------------
// cuts

namespace {

struct Dinic {
    struct Arc {
        int to;
        int64_t cap;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> head;
    std::vector<int> level, it;

    explicit Dinic(int n) : head(n), level(n), it(n) {}

    void add_edge(int u, int v, int64_t cap) {
        head[u].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({v, cap});
        head[v].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({u, cap});  // undirected: symmetric capacity
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int id : head[v]) {
                if (arcs[id].cap > 0 && level[arcs[id].to] == -1) {
                    level[arcs[id].to] = level[v] + 1;
                    q.push(arcs[id].to);
                }
            }
        }
        return level[t] != -1;
    }

    int64_t dfs(int v, int t, int64_t f) {
        if (v == t) return f;
        for (int& i = it[v]; i < static_cast<int>(head[v].size()); ++i) {
            int id = head[v][i];
            Arc& a = arcs[id];
            if (a.cap > 0 && level[a.to] == level[v] + 1) {
                int64_t d = dfs(a.to, t, std::min(f, a.cap));
                if (d > 0) {
                    a.cap -= d;
                    arcs[id ^ 1].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    int64_t max_flow(int s, int t) {
        int64_t flow = 0;
        while (bfs(s, t)) {
            std::fill(it.begin(), it.end(), 0);
            while (int64_t f = dfs(s, t, INT64_MAX)) flow += f;
        }
        return flow;
    }
};

}  // namespace

int64_t st_mincut(const DynamicGraph& g, int s, int t) {
    int n = g.vertex_count();
    if (s < 0 || s >= n || t < 0 || t >= n || s == t)
        throw std::invalid_argument("st_mincut: bad terminals");
    Dinic d(n);
    for (auto [u, v] : g.edges()) d.add_edge(u, v, 1);
    return d.max_flow(s, t);
}

int64_t global_mincut(const DynamicGraph& g) {
    int n = g.vertex_count();
    if (n < 2) throw std::invalid_argument("global_mincut: need >= 2 vertices");
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
    for (auto [u, v] : g.edges()) {
        w[u][v] += 1;
        w[v][u] += 1;
    }
    // Stoer-Wagner minimum cut phases
    std::vector<int> vertices(n);
    for (int i = 0; i < n; ++i) vertices[i] = i;
    int64_t best = INT64_MAX;
    while (vertices.size() > 1) {
        int m = static_cast<int>(vertices.size());
        std::vector<int64_t> weight(m, 0);
        std::vector<char> added(m, 0);
        int prev = -1, last = -1;
        for (int i = 0; i < m; ++i) {
            int sel = -1;
            for (int j = 0; j < m; ++j)
                if (!added[j] && (sel == -1 || weight[j] > weight[sel])) sel = j;
            added[sel] = 1;
            prev = last;
            last = sel;
            if (i == m - 1) best = std::min(best, weight[sel]);
            for (int j = 0; j < m; ++j)
                if (!added[j]) weight[j] += w[vertices[sel]][vertices[j]];
        }
        // merge `last` into `prev`
        int a = vertices[prev], b = vertices[last];
        for (int j = 0; j < n; ++j) {
            w[a][j] += w[b][j];
            w[j][a] += w[j][b];
        }
        vertices.erase(vertices.begin() + last);
    }
    return best;
}

int connected_components(const DynamicGraph& g) {
    int n = g.vertex_count();
    std::vector<char> seen(n, 0);
    int comps = 0;
    for (int v = 0; v < n; ++v) {
        if (seen[v]) continue;
        ++comps;
        std::queue<int> q;
        q.push(v);
        seen[v] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int u : g.neighbors(x))
                if (!seen[u]) {
                    seen[u] = 1;
                    q.push(u);
                }
        }
    }
    return comps;
}

int64_t triangle_count(const DynamicGraph& g) {
    int64_t c = 0;
    for (auto [u, v] : g.edges())
        for (int w : g.neighbors(u))
            if (w > v && g.has_edge(v, w)) ++c;
    return c;
}

// --------------------------------------------------------------------------
// exhaustive oracles

namespace bruteforce {

namespace {
void check_small(const DynamicGraph& g, const char* who) {
    if (g.vertex_count() > 12)
        throw std::invalid_argument(std::string(who) +
                                    ": exhaustive oracle limited to 12 vertices");
}
}  // namespace

int max_matching_size(const DynamicGraph& g) {
    check_small(g, "bruteforce::max_matching_size");
    int n = g.vertex_count();
    std::vector<char> used(n, 0);
    // branch on the lowest unmatched vertex
    auto rec = [&](auto&& self, int v) -> int {
        while (v < n && used[v]) ++v;
        if (v == n) return 0;
        used[v] = 1;
        int best = self(self, v + 1);  // leave v single
        for (int u : g.neighbors(v)) {
            if (used[u]) continue;
            used[u] = 1;
            best = std::max(best, 1 + self(self, v + 1));
            used[u] = 0;
        }
        used[v] = 0;
        return best;
    };
    return rec(rec, 0);
}

int core_number(const DynamicGraph& g, int v) {
    check_small(g, "bruteforce::core_number");
    int n = g.vertex_count();
    int best = 0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!(mask & (1u << v))) continue;
        int mindeg = n;
        for (int a = 0; a < n; ++a) {
            if (!(mask & (1u << a))) continue;
            int d = 0;
            for (int b : g.neighbors(a))
                if (mask & (1u << b)) ++d;
            mindeg = std::min(mindeg, d);
        }
        best = std::max(best, mindeg);
    }
    return best;
}

namespace {
int64_t cut_weight(const DynamicGraph& g, uint32_t side) {
    int64_t c = 0;
    for (auto [u, v] : g.edges())
        if (((side >> u) & 1) != ((side >> v) & 1)) ++c;
    return c;
}
}  // namespace

int64_t st_mincut(const DynamicGraph& g, int s, int t) {
    check_small(g, "bruteforce::st_mincut");
    int n = g.vertex_count();
    int64_t best = INT64_MAX;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!(mask & (1u << s)) || (mask & (1u << t))) continue;
        best = std::min(best, cut_weight(g, mask));
    }
    return best;
}

int64_t global_mincut(const DynamicGraph& g) {
    check_small(g, "bruteforce::global_mincut");
    int n = g.vertex_count();
    int64_t best = INT64_MAX;
    for (uint32_t mask = 1; mask < (1u << (n - 1)); ++mask)
        best = std::min(best, cut_weight(g, mask));
    return best;
}

}  // namespace bruteforce

}  // namespace dpcr

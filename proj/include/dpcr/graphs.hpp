#pragma once
#include <map>
#include <set>
#include <vector>

#include "dpcr/core.hpp"

namespace dpcr {

// Simple undirected graph maintained under an insert/delete edge stream.
// Updates change per-edge multiplicities; an edge is present iff its
// multiplicity is positive (deletes of absent edges are no-ops).
class DynamicGraph {
public:
    explicit DynamicGraph(int n);

    void apply(const Update& u);
    void insert_edge(int u, int v);
    void delete_edge(int u, int v);

    int vertex_count() const { return n_; }
    bool has_edge(int u, int v) const;
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    const std::set<int>& neighbors(int v) const { return adj_[v]; }
    int64_t edge_count() const { return edges_; }
    std::vector<std::pair<int, int>> edges() const;

private:
    int n_;
    int64_t edges_ = 0;
    std::vector<std::set<int>> adj_;
    std::map<std::pair<int, int>, int64_t> mult_;
};

// exact evaluators ----------------------------------------------------------

// size of a maximum matching (general graphs, blossom contraction)
int max_matching_size(const DynamicGraph& g);

// core number of every vertex (min-degree peeling), and of one vertex
std::vector<int> core_numbers(const DynamicGraph& g);
int core_number(const DynamicGraph& g, int v);

// hist[d] = number of vertices of degree d, for d = 1 .. n-1 (hist[0] = 0;
// degree-zero vertices are not reported)
std::vector<int64_t> degree_histogram(const DynamicGraph& g);

int64_t count_degree_at_least(const DynamicGraph& g, int tau);

// minimum s-t cut (max flow, unit capacities)
int64_t st_mincut(const DynamicGraph& g, int s, int t);

// global minimum cut (Stoer-Wagner); 0 when disconnected, throws for n < 2
int64_t global_mincut(const DynamicGraph& g);

int connected_components(const DynamicGraph& g);
int64_t triangle_count(const DynamicGraph& g);

// Maintains a maximum matching across edge insertions and deletions. Each
// change triggers at most one augmenting-path search per free vertex, which
// is much cheaper than recomputing from scratch on long streams.
class IncrementalMatching {
public:
    explicit IncrementalMatching(int n);
    void insert_edge(int u, int v);
    void delete_edge(int u, int v);
    void apply(const Update& u);
    int size() const { return size_; }

private:
    void augment_all();
    int n_, size_ = 0;
    std::vector<std::set<int>> adj_;
    std::map<std::pair<int, int>, int64_t> mult_;
    std::vector<int> match_;
};

// exhaustive cross-check oracles; refuse graphs with more than 12 vertices
namespace bruteforce {
int max_matching_size(const DynamicGraph& g);
int core_number(const DynamicGraph& g, int v);
int64_t st_mincut(const DynamicGraph& g, int s, int t);
int64_t global_mincut(const DynamicGraph& g);
}  // namespace bruteforce

}  // namespace dpcr

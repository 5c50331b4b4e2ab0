#pragma once

#include "clonescope/error.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clonescope {

/**
 * How similarity edges are grouped into clone classes/groups.
 *
 * Components: connected components of the edge graph (what practical clone
 * tools report). Cliques: all maximal cliques, i.e. sets whose members are
 * pairwise similar. Cliques is exact and exponential in the worst case.
 */
enum class ClusterMode { Components, Cliques };

inline const char* to_string(ClusterMode m) {
    return m == ClusterMode::Components ? "components" : "cliques";
}

inline constexpr std::size_t kMaxCliqueEdges = 10'000;

namespace detail {

// Bron-Kerbosch with Tomita pivoting over dense vertex indices.
class CliqueEnumerator {
public:
    explicit CliqueEnumerator(const std::vector<std::vector<bool>>& adj) : adj_(adj) {}

    std::vector<std::vector<std::size_t>> run() {
        std::vector<std::size_t> r, p, x;
        for (std::size_t v = 0; v < adj_.size(); ++v) p.push_back(v);
        expand(r, p, x);
        return std::move(found_);
    }

private:
    const std::vector<std::vector<bool>>& adj_;
    std::vector<std::vector<std::size_t>> found_;

    void expand(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
        if (p.empty() && x.empty()) {
            if (r.size() >= 2) {
                auto c = r;
                std::sort(c.begin(), c.end());
                found_.push_back(std::move(c));
            }
            return;
        }
        std::size_t pivot = p.empty() ? x.front() : p.front();
        std::size_t best = 0;
        for (const auto* set : {&p, &x}) {
            for (auto u : *set) {
                std::size_t deg = 0;
                for (auto v : p) deg += adj_[u][v] ? 1 : 0;
                if (deg >= best) {
                    best = deg;
                    pivot = u;
                }
            }
        }
        const auto candidates = [&] {
            std::vector<std::size_t> c;
            for (auto v : p) {
                if (!adj_[pivot][v]) c.push_back(v);
            }
            return c;
        }();
        for (auto v : candidates) {
            std::vector<std::size_t> np, nx;
            for (auto u : p) {
                if (adj_[v][u]) np.push_back(u);
            }
            for (auto u : x) {
                if (adj_[v][u]) nx.push_back(u);
            }
            r.push_back(v);
            expand(r, std::move(np), std::move(nx));
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.push_back(v);
        }
    }
};

} // namespace detail

/**
 * Groups the vertices of an undirected edge list. Every returned cluster has
 * at least two members, members are sorted, and clusters are ordered by
 * their smallest member (then lexicographically).
 */
template <class Id>
std::vector<std::vector<Id>> cluster_edges(std::span<const std::pair<Id, Id>> edges, ClusterMode mode) {
    std::map<Id, std::size_t> index;
    for (const auto& [a, b] : edges) {
        index.emplace(a, 0);
        index.emplace(b, 0);
    }
    std::vector<Id> ids;
    ids.reserve(index.size());
    for (auto& [id, slot] : index) {
        slot = ids.size();
        ids.push_back(id);
    }

    std::vector<std::vector<Id>> clusters;
    if (mode == ClusterMode::Components) {
        std::vector<std::vector<std::size_t>> adj(ids.size());
        for (const auto& [a, b] : edges) {
            if (a == b) continue;
            adj[index[a]].push_back(index[b]);
            adj[index[b]].push_back(index[a]);
        }
        std::vector<bool> seen(ids.size(), false);
        for (std::size_t s = 0; s < ids.size(); ++s) {
            if (seen[s]) continue;
            std::vector<std::size_t> stack{s}, comp;
            seen[s] = true;
            while (!stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                comp.push_back(v);
                for (auto u : adj[v]) {
                    if (!seen[u]) {
                        seen[u] = true;
                        stack.push_back(u);
                    }
                }
            }
            if (comp.size() < 2) continue;
            std::sort(comp.begin(), comp.end());
            std::vector<Id> members;
            for (auto v : comp) members.push_back(ids[v]);
            clusters.push_back(std::move(members));
        }
    } else {
        if (edges.size() > kMaxCliqueEdges) {
            throw Error(ErrorKind::Combinatorial,
                        "cliques clustering refused for " + std::to_string(edges.size()) +
                            " edges (limit " + std::to_string(kMaxCliqueEdges) +
                            "); use components mode");
        }
        std::vector<std::vector<bool>> adj(ids.size(), std::vector<bool>(ids.size(), false));
        for (const auto& [a, b] : edges) {
            if (a == b) continue;
            adj[index[a]][index[b]] = true;
            adj[index[b]][index[a]] = true;
        }
        for (auto& clique : detail::CliqueEnumerator(adj).run()) {
            std::vector<Id> members;
            for (auto v : clique) members.push_back(ids[v]);
            clusters.push_back(std::move(members));
        }
    }
    std::sort(clusters.begin(), clusters.end());
    return clusters;
}

} // namespace clonescope

#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace mapl {

/// Dinic's algorithm on an integer-capacity network. Arcs are explored in
/// insertion order, so for a fixed construction order the resulting flow is
/// deterministic.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t n_nodes) : adj_(n_nodes) {}

    /// Adds arc u -> v; returns its id for later `flow_on` queries.
    std::size_t add_arc(std::size_t u, std::size_t v, std::int64_t cap) {
        const std::size_t id = arcs_.size();
        arcs_.push_back({v, cap});
        adj_[u].push_back(id);
        arcs_.push_back({u, 0});
        adj_[v].push_back(id + 1);
        return id;
    }

    std::int64_t run(std::size_t source, std::size_t sink) {
        std::int64_t total = 0;
        while (bfs(source, sink)) {
            it_.assign(adj_.size(), 0);
            while (std::int64_t f = dfs(source, sink, std::numeric_limits<std::int64_t>::max())) total += f;
        }
        return total;
    }

    std::int64_t flow_on(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

    /// Nodes reachable from `source` in the residual network after `run`.
    std::vector<bool> source_side(std::size_t source) const {
        std::vector<bool> seen(adj_.size(), false);
        std::queue<std::size_t> q;
        q.push(source);
        seen[source] = true;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto id : adj_[u]) {
                const auto& a = arcs_[id];
                if (a.cap > 0 && !seen[a.to]) {
                    seen[a.to] = true;
                    q.push(a.to);
                }
            }
        }
        return seen;
    }

private:
    struct Arc {
        std::size_t to;
        std::int64_t cap;
    };

    bool bfs(std::size_t s, std::size_t t) {
        level_.assign(adj_.size(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto id : adj_[u]) {
                const auto& a = arcs_[id];
                if (a.cap > 0 && level_[a.to] < 0) {
                    level_[a.to] = level_[u] + 1;
                    q.push(a.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t pushed) {
        if (u == t) return pushed;
        for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
            const auto id = adj_[u][i];
            auto& a = arcs_[id];
            if (a.cap <= 0 || level_[a.to] != level_[u] + 1) continue;
            if (std::int64_t f = dfs(a.to, t, std::min(pushed, a.cap))) {
                a.cap -= f;
                arcs_[id ^ 1].cap += f;
                return f;
            }
        }
        return 0;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;
};

} // namespace mapl

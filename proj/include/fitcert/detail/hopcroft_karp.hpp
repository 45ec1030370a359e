#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace fitcert::detail {

// Maximum bipartite matching (Hopcroft-Karp) between `left` vertices and
// `right` vertices, both 0-based. Vertices on the right can be switched off,
// which is how rows are deleted without rebuilding the graph.
class BipartiteMatcher {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    BipartiteMatcher(std::size_t left, std::size_t right)
        : adj_(left), match_left_(left, npos), match_right_(right, npos), dist_(left),
          enabled_(right, 1) {}

    void add_edge(std::size_t u, std::size_t v) { adj_[u].push_back(v); }

    void set_enabled(std::size_t v, bool on) { enabled_[v] = on ? 1 : 0; }

    std::size_t left_size() const noexcept { return adj_.size(); }

    std::size_t solve() {
        std::fill(match_left_.begin(), match_left_.end(), npos);
        std::fill(match_right_.begin(), match_right_.end(), npos);
        std::size_t size = 0;
        while (bfs())
            for (std::size_t u = 0; u < adj_.size(); ++u)
                if (match_left_[u] == npos && dfs(u)) ++size;
        return size;
    }

    // After solve(): if some left vertex is unmatched, the left vertices
    // reachable from it by alternating paths have fewer enabled neighbours
    // than members (König). Empty when the matching saturates the left side.
    std::vector<std::size_t> hall_violator() const {
        std::size_t root = npos;
        for (std::size_t u = 0; u < adj_.size(); ++u)
            if (match_left_[u] == npos) {
                root = u;
                break;
            }
        if (root == npos) return {};
        std::vector<char> seen_left(adj_.size(), 0), seen_right(match_right_.size(), 0);
        std::vector<std::size_t> out;
        std::queue<std::size_t> q;
        q.push(root);
        seen_left[root] = 1;
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            out.push_back(u);
            for (auto v : adj_[u]) {
                if (!enabled_[v] || seen_right[v]) continue;
                seen_right[v] = 1;
                auto w = match_right_[v];
                if (w != npos && !seen_left[w]) {
                    seen_left[w] = 1;
                    q.push(w);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    bool bfs() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
            if (match_left_[u] == npos) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = npos;
            }
        }
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto v : adj_[u]) {
                if (!enabled_[v]) continue;
                auto w = match_right_[v];
                if (w == npos) {
                    found = true;
                } else if (dist_[w] == npos) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (auto v : adj_[u]) {
            if (!enabled_[v]) continue;
            auto w = match_right_[v];
            if (w == npos || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        dist_[u] = npos;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_left_, match_right_, dist_;
    std::vector<char> enabled_;
};

}  // namespace fitcert::detail

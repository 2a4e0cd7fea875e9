#include "sbrp/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "sbrp/errors.hpp"

namespace sbrp {

FlowNetwork::FlowNetwork(int num_nodes) : n_(num_nodes), adj_(static_cast<std::size_t>(num_nodes)) {}

int FlowNetwork::add_edge(int from, int to, int capacity, double cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back(Edge{to, capacity, cost});
    edges_.push_back(Edge{from, 0, -cost});
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
}

void FlowNetwork::reset_flow() {
    for (std::size_t i = 0; i + 1 < edges_.size(); i += 2) {
        const int total = edges_[i].cap + edges_[i + 1].cap;
        edges_[i].cap = total;
        edges_[i + 1].cap = 0;
    }
}

bool FlowNetwork::bfs_level(int s, int t) {
    level_.assign(static_cast<std::size_t>(n_), -1);
    std::deque<int> q{s};
    level_[static_cast<std::size_t>(s)] = 0;
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (int id : adj_[static_cast<std::size_t>(v)]) {
            const Edge& e = edges_[static_cast<std::size_t>(id)];
            if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
                level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
                q.push_back(e.to);
            }
        }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
}

int FlowNetwork::dfs_push(int v, int t, int pushed) {
    if (v == t) return pushed;
    auto& it = iter_[static_cast<std::size_t>(v)];
    for (; it < adj_[static_cast<std::size_t>(v)].size(); ++it) {
        const int id = adj_[static_cast<std::size_t>(v)][it];
        Edge& e = edges_[static_cast<std::size_t>(id)];
        if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] !=
                              level_[static_cast<std::size_t>(v)] + 1)
            continue;
        const int got = dfs_push(e.to, t, std::min(pushed, e.cap));
        if (got > 0) {
            e.cap -= got;
            edges_[static_cast<std::size_t>(id ^ 1)].cap += got;
            return got;
        }
    }
    return 0;
}

int FlowNetwork::max_flow(int source, int sink) {
    int flow = 0;
    while (bfs_level(source, sink)) {
        iter_.assign(static_cast<std::size_t>(n_), 0);
        while (int pushed = dfs_push(source, sink, std::numeric_limits<int>::max()))
            flow += pushed;
    }
    return flow;
}

std::pair<int, double> FlowNetwork::min_cost_max_flow(int source, int sink) {
    int flow = 0;
    double cost = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    for (;;) {
        // SPFA shortest path on residual costs.
        std::vector<double> dist(static_cast<std::size_t>(n_), inf);
        std::vector<int> in_edge(static_cast<std::size_t>(n_), -1);
        std::vector<char> in_queue(static_cast<std::size_t>(n_), 0);
        std::deque<int> q{source};
        dist[static_cast<std::size_t>(source)] = 0.0;
        in_queue[static_cast<std::size_t>(source)] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            in_queue[static_cast<std::size_t>(v)] = 0;
            for (int id : adj_[static_cast<std::size_t>(v)]) {
                const Edge& e = edges_[static_cast<std::size_t>(id)];
                if (e.cap <= 0) continue;
                const double nd = dist[static_cast<std::size_t>(v)] + e.cost;
                if (nd < dist[static_cast<std::size_t>(e.to)] - 1e-12) {
                    dist[static_cast<std::size_t>(e.to)] = nd;
                    in_edge[static_cast<std::size_t>(e.to)] = id;
                    if (!in_queue[static_cast<std::size_t>(e.to)]) {
                        in_queue[static_cast<std::size_t>(e.to)] = 1;
                        q.push_back(e.to);
                    }
                }
            }
        }
        if (in_edge[static_cast<std::size_t>(sink)] < 0) break;

        int push = std::numeric_limits<int>::max();
        for (int v = sink; v != source;) {
            const int id = in_edge[static_cast<std::size_t>(v)];
            push = std::min(push, edges_[static_cast<std::size_t>(id)].cap);
            v = edges_[static_cast<std::size_t>(id ^ 1)].to;
        }
        for (int v = sink; v != source;) {
            const int id = in_edge[static_cast<std::size_t>(v)];
            edges_[static_cast<std::size_t>(id)].cap -= push;
            edges_[static_cast<std::size_t>(id ^ 1)].cap += push;
            cost += push * edges_[static_cast<std::size_t>(id)].cost;
            v = edges_[static_cast<std::size_t>(id ^ 1)].to;
        }
        flow += push;
    }
    return {flow, cost};
}

int FlowNetwork::edge_flow(int id) const {
    // Flow on a forward edge equals the accumulated reverse capacity.
    return edges_[static_cast<std::size_t>(id) + 1].cap;
}

}  // namespace sbrp

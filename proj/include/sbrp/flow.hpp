#pragma once

#include <utility>
#include <vector>

namespace sbrp {

// Small flow network with integer capacities and double edge costs; big
// enough for student-to-stop assignment graphs, nothing more.
class FlowNetwork {
public:
    explicit FlowNetwork(int num_nodes);

    /// Adds a directed edge; returns its id for flow queries.
    int add_edge(int from, int to, int capacity, double cost = 0.0);

    /// Dinic max flow; network keeps the resulting flow.
    int max_flow(int source, int sink);

    /// Successive shortest augmenting paths (SPFA); returns {flow, cost}.
    std::pair<int, double> min_cost_max_flow(int source, int sink);

    int edge_flow(int id) const;

    void reset_flow();

private:
    struct Edge {
        int to;
        int cap;
        double cost;
    };

    bool bfs_level(int s, int t);
    int dfs_push(int v, int t, int pushed);

    int n_;
    std::vector<Edge> edges_;            // edge 2i/2i+1 are a forward/backward pair
    std::vector<std::vector<int>> adj_;  // node -> edge ids
    std::vector<int> level_;
    std::vector<std::size_t> iter_;
};

}  // namespace sbrp

#pragma once

#include <vector>

namespace cifh::detail {

/// Dinic's algorithm on a directed graph with real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  void add_edge(int from, int to, double capacity);
  double solve(int source, int sink);

  /// Nodes reachable from the source in the final residual graph.
  std::vector<bool> source_side(int source) const;

 private:
  struct Arc {
    int to;
    int rev;
    double cap;
  };
  bool bfs(int s, int t);
  double dfs(int v, int t, double pushed);

  std::vector<std::vector<Arc>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  double eps_ = 1e-12;
};

}  // namespace cifh::detail

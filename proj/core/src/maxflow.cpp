#include "maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace cifh::detail {

MaxFlow::MaxFlow(int nodes) : graph_(nodes), level_(nodes), next_(nodes) {}

void MaxFlow::add_edge(int from, int to, double capacity) {
  if (capacity <= 0) return;
  eps_ = std::max(eps_, 1e-13 * capacity);
  graph_[from].push_back({to, static_cast<int>(graph_[to].size()), capacity});
  graph_[to].push_back({from, static_cast<int>(graph_[from].size()) - 1, 0.0});
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const Arc& a : graph_[v]) {
      if (a.cap > eps_ && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(int v, int t, double pushed) {
  if (v == t) return pushed;
  for (std::size_t& i = next_[v]; i < graph_[v].size(); ++i) {
    Arc& a = graph_[v][i];
    if (a.cap <= eps_ || level_[a.to] != level_[v] + 1) continue;
    const double got = dfs(a.to, t, std::min(pushed, a.cap));
    if (got > 0) {
      a.cap -= got;
      graph_[a.to][a.rev].cap += got;
      return got;
    }
  }
  return 0;
}

double MaxFlow::solve(int source, int sink) {
  double flow = 0;
  while (bfs(source, sink)) {
    std::fill(next_.begin(), next_.end(), 0);
    while (true) {
      const double f = dfs(source, sink, std::numeric_limits<double>::infinity());
      if (f <= 0) break;
      flow += f;
    }
  }
  return flow;
}

std::vector<bool> MaxFlow::source_side(int source) const {
  std::vector<bool> seen(graph_.size(), false);
  std::queue<int> q;
  seen[source] = true;
  q.push(source);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const Arc& a : graph_[v]) {
      if (a.cap > eps_ && !seen[a.to]) {
        seen[a.to] = true;
        q.push(a.to);
      }
    }
  }
  return seen;
}

}  // namespace cifh::detail

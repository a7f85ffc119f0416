#include "blackwell/chain.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace blackwell {

namespace {

std::vector<std::vector<int>> positive_adjacency(const RatMatrix& p) {
  const auto n = static_cast<int>(p.rows());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) > 0)
        adj[static_cast<std::size_t>(i)].push_back(j);
  return adj;
}

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
  const auto n = static_cast<int>(adj.size());
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  std::function<void(int)> visit = [&](int v) {
    index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
    stack.push_back(v);
    on_stack[static_cast<std::size_t>(v)] = true;
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (index[static_cast<std::size_t>(w)] < 0) {
        visit(w);
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(w)]);
      } else if (on_stack[static_cast<std::size_t>(w)]) {
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
      }
    }
    if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
      std::vector<int> component;
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        component.push_back(w);
        if (w == v) break;
      }
      std::sort(component.begin(), component.end());
      components.push_back(std::move(component));
    }
  };

  for (int v = 0; v < n; ++v)
    if (index[static_cast<std::size_t>(v)] < 0) visit(v);
  return components;
}

/// gcd over intra-class edges of (level[u] + 1 - level[v]) from a BFS tree.
int class_period(const std::vector<int>& members, const std::vector<std::vector<int>>& adj) {
  std::vector<int> level(adj.size(), -1);
  std::vector<bool> in_class(adj.size(), false);
  for (int v : members) in_class[static_cast<std::size_t>(v)] = true;

  std::deque<int> queue{members.front()};
  level[static_cast<std::size_t>(members.front())] = 0;
  long g = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!in_class[static_cast<std::size_t>(w)]) continue;
      if (level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      } else {
        g = std::gcd(g, static_cast<long>(level[static_cast<std::size_t>(v)]) + 1 -
                            level[static_cast<std::size_t>(w)]);
      }
    }
  }
  // Every edge is scanned exactly once; tree edges would contribute
  // gcd(g, 0) = g, so only non-tree edges matter. A closed class always
  // closes at least one cycle, hence g > 0.
  return static_cast<int>(g);
}

}  // namespace

ChainStructure chain_structure(const RatMatrix& p) {
  if (!is_stochastic(p)) throw ValidationError("chain_structure: matrix is not stochastic");
  const auto adj = positive_adjacency(p);
  const auto components = strongly_connected_components(adj);

  ChainStructure out;
  for (const auto& component : components) {
    bool closed = true;
    for (int v : component) {
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (!std::binary_search(component.begin(), component.end(), w)) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    if (closed)
      out.recurrent_classes.push_back(component);
    else
      out.transient_states.insert(out.transient_states.end(), component.begin(),
                                  component.end());
  }
  std::sort(out.recurrent_classes.begin(), out.recurrent_classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::sort(out.transient_states.begin(), out.transient_states.end());

  long global = 1;
  for (const auto& component : out.recurrent_classes) {
    const int period = class_period(component, adj);
    out.class_periods.push_back(period);
    global = std::lcm(global, static_cast<long>(period));
  }
  out.global_period = static_cast<int>(global);
  return out;
}

LimitData limiting_matrix(const RatMatrix& p) {
  const ChainStructure structure = chain_structure(p);
  const std::size_t n = p.rows();
  RatMatrix qstar(n, n);

  // Stationary distribution of each closed class: x P_class = x, sum x = 1.
  // Transposed system with the last equation replaced by normalization.
  std::vector<RatVector> stationary;
  for (const auto& members : structure.recurrent_classes) {
    const std::size_t k = members.size();
    RatMatrix a(k, k);
    RatVector b(k);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        a(i, j) = p(static_cast<std::size_t>(members[j]), static_cast<std::size_t>(members[i]));
        if (i == j) a(i, j) -= 1;
      }
    }
    for (std::size_t j = 0; j < k; ++j) a(k - 1, j) = 1;
    b[k - 1] = 1;
    stationary.push_back(solve_exact(a, b));
  }

  for (std::size_t ci = 0; ci < structure.recurrent_classes.size(); ++ci) {
    const auto& members = structure.recurrent_classes[ci];
    for (int i : members)
      for (std::size_t j = 0; j < members.size(); ++j)
        qstar(static_cast<std::size_t>(i), static_cast<std::size_t>(members[j])) =
            stationary[ci][j];
  }

  // Absorption probabilities from transient states: (I - P_TT) a = P_TC 1.
  const auto& transient = structure.transient_states;
  if (!transient.empty()) {
    const std::size_t m = transient.size();
    RatMatrix system(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        system(i, j) = -p(static_cast<std::size_t>(transient[i]),
                          static_cast<std::size_t>(transient[j]));
        if (i == j) system(i, j) += 1;
      }
    ExactLu lu(std::move(system));

    for (std::size_t ci = 0; ci < structure.recurrent_classes.size(); ++ci) {
      const auto& members = structure.recurrent_classes[ci];
      RatVector rhs(m);
      for (std::size_t i = 0; i < m; ++i)
        for (int j : members)
          rhs[i] += p(static_cast<std::size_t>(transient[i]), static_cast<std::size_t>(j));
      const RatVector absorb = lu.solve(rhs);
      for (std::size_t i = 0; i < m; ++i) {
        if (absorb[i] == 0) continue;
        for (std::size_t j = 0; j < members.size(); ++j)
          qstar(static_cast<std::size_t>(transient[i]),
                static_cast<std::size_t>(members[j])) = absorb[i] * stationary[ci][j];
      }
    }
  }

  // Cheap sanity on every computed limit; the full projector identities are
  // exercised by the test suite.
  for (std::size_t i = 0; i < n; ++i) {
    Rational sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (qstar(i, j) < 0 || qstar(i, j) > 1)
        throw InternalError("limiting matrix entry out of [0,1]");
      sum += qstar(i, j);
    }
    if (sum != 1) throw InternalError("limiting matrix row does not sum to 1");
  }

  return LimitData{std::move(qstar), structure.global_period == 1};
}

std::vector<RatVector> cycle_limit_vectors(const RatMatrix& p, const RatVector& r,
                                           const ChainStructure& structure) {
  const auto period = static_cast<unsigned long>(structure.global_period);
  const RatMatrix pp_star =
      period == 1 ? limiting_matrix(p).limiting_matrix
                  : limiting_matrix(mat_pow(p, period)).limiting_matrix;

  std::vector<RatVector> orbit;
  orbit.reserve(period);
  RatVector power_r = r;  // P^j r
  for (unsigned long j = 0; j < period; ++j) {
    orbit.push_back(pp_star * power_r);
    if (j + 1 < period) power_r = p * power_r;
  }
  return orbit;
}

void verify_limit_identities(const RatMatrix& p, const RatMatrix& qstar) {
  if (qstar * p != qstar) throw InternalError("Q* Q != Q*");
  if (p * qstar != qstar) throw InternalError("Q Q* != Q*");
  if (qstar * qstar != qstar) throw InternalError("Q* Q* != Q*");
  for (std::size_t i = 0; i < qstar.rows(); ++i) {
    Rational sum;
    for (std::size_t j = 0; j < qstar.cols(); ++j) {
      if (qstar(i, j) < 0 || qstar(i, j) > 1) throw InternalError("Q* entry out of [0,1]");
      sum += qstar(i, j);
    }
    if (sum != 1) throw InternalError("Q* row sum != 1");
  }
}

}  // namespace blackwell

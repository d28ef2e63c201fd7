#ifndef GSO_GRAPH_HPP
#define GSO_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gso {

using Edge = std::pair<int, int>;

// Simple undirected graph. Edges are stored once with first < second, sorted.
class Graph {
public:
  Graph() = default;

  // Collapses duplicate and reversed pairs. Throws std::invalid_argument on
  // self-loops or ids outside [0, n_vertices).
  Graph(int n_vertices, const std::vector<Edge>& edges);

  int n_vertices() const { return n_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  bool has_edge(int u, int v) const;

  // Dense 0/1 adjacency. O(n^2) memory, meant for small graphs and checks.
  Eigen::MatrixXd adjacency() const;

  friend bool operator==(const Graph& a, const Graph& b)
  {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> degrees_;
};

// Sherrington-Kirkpatrick couplings: symmetric, zero diagonal.
struct SKInstance {
  int n = 0;
  Eigen::MatrixXd couplings;
};

// Node states x_t(i); row t is the state vector at time t.
struct TimeSeries {
  Eigen::MatrixXd states;

  int length() const { return static_cast<int>(states.rows()); }
  int n_nodes() const { return static_cast<int>(states.cols()); }
};

// Hard community assignment with labels in [0, n_communities).
struct Partition {
  std::vector<int> labels;
  int n_communities = 0;

  // Throws std::invalid_argument if any label is out of range.
  void validate() const;
  int n_nonempty() const;
};

// Whitespace separated integer pairs, '#' comments. A "# vertices: N" comment
// (written by save_graph) fixes the vertex count so isolated trailing
// vertices survive a round trip. With one_based, ids are shifted down by one.
Graph load_edge_list(const std::filesystem::path& path, bool one_based = false);
void save_graph(const Graph& g, const std::filesystem::path& path);

// J_ij ~ N(0, 1/n) for i < j in row-major order, mirrored.
SKInstance gen_sk_instance(int n, std::uint64_t seed);

// Uniform-ish d-regular simple graph by the pairing model with rejection.
Graph gen_random_regular(int n, int d, std::uint64_t seed, int max_attempts = 1000);

// G(n, p); each unordered pair drawn in row-major order.
Graph gen_erdos_renyi(int n, double p, std::uint64_t seed);

// CSV with header "t,x_0,...,x_{n-1}", 17 significant digits.
void save_series(const TimeSeries& series, const std::filesystem::path& path);
TimeSeries load_series(const std::filesystem::path& path);

}  // namespace gso

#endif  // GSO_GRAPH_HPP

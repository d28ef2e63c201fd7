#include "gso/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gso/error.hpp"
#include "gso/rng.hpp"

namespace gso {

Graph::Graph(int n_vertices, const std::vector<Edge>& edges)
: n_(n_vertices)
, adj_(n_vertices)
, degrees_(n_vertices, 0)
{
  if (n_vertices < 0)
    throw std::invalid_argument("negative vertex count");
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range for " + std::to_string(n_) + " vertices");
    if (u == v)
      throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (int v = 0; v < n_; ++v) {
    std::sort(adj_[v].begin(), adj_[v].end());
    degrees_[v] = static_cast<int>(adj_[v].size());
  }
}

bool Graph::has_edge(int u, int v) const
{
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

Eigen::MatrixXd Graph::adjacency() const
{
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (auto [u, v] : edges_) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

void Partition::validate() const
{
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0 || labels[i] >= n_communities)
      throw std::invalid_argument("label " + std::to_string(labels[i]) + " of vertex " +
                                  std::to_string(i) + " outside [0, " +
                                  std::to_string(n_communities) + ")");
}

int Partition::n_nonempty() const
{
  std::set<int> used(labels.begin(), labels.end());
  return static_cast<int>(used.size());
}

namespace {

bool parse_int(std::string_view token, long long& out)
{
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& token, double& out)
{
  if (token.empty())
    return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path, bool one_based)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open edge list " + path.string());

  std::vector<Edge> edges;
  long long declared = -1;
  long long max_id = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream comment(line.substr(hash + 1));
      std::string key;
      long long value = 0;
      if (comment >> key >> value && key == "vertices:")
        declared = value;
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    for (std::string tok; tokens >> tok;)
      fields.push_back(tok);
    if (fields.empty())
      continue;
    if (fields.size() != 2)
      throw ParseError("expected two vertex ids, got " + std::to_string(fields.size()) +
                       " tokens", line_no);
    long long u = 0, v = 0;
    if (!parse_int(fields[0], u) || !parse_int(fields[1], v))
      throw ParseError("non-integer vertex id", line_no);
    if (one_based) {
      --u;
      --v;
    }
    if (u < 0 || v < 0)
      throw ParseError("negative vertex id", line_no);
    if (u == v)
      throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
    max_id = std::max({max_id, u, v});
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  if (edges.empty())
    throw ParseError("edge list is empty", line_no);
  if (declared > max_id + 1)
    max_id = declared - 1;
  return Graph(static_cast<int>(max_id + 1), edges);
}

void save_graph(const Graph& g, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << "# vertices: " << g.n_vertices() << "\n";
  for (auto [u, v] : g.edges())
    out << u << ' ' << v << '\n';
}

SKInstance gen_sk_instance(int n, std::uint64_t seed)
{
  if (n < 2)
    throw std::invalid_argument("SK instance needs n >= 2");
  Rng rng(seed);
  SKInstance inst{n, Eigen::MatrixXd::Zero(n, n)};
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double w = scale * standard_normal(rng);
      inst.couplings(i, j) = w;
      inst.couplings(j, i) = w;
    }
  return inst;
}

Graph gen_random_regular(int n, int d, std::uint64_t seed, int max_attempts)
{
  if (n <= 0 || d < 0)
    throw std::invalid_argument("random regular graph needs n > 0 and d >= 0");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("n*d must be even (n=" + std::to_string(n) +
                                ", d=" + std::to_string(d) + ")");
  if (d >= n)
    throw std::invalid_argument("degree must be below the vertex count");

  Rng rng(seed);
  std::vector<int> points(static_cast<std::size_t>(n) * d);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i)
      points[i] = static_cast<int>(i) / d;
    shuffle(points, rng);

    std::set<Edge> seen;
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      const int u = std::min(points[i], points[i + 1]);
      const int v = std::max(points[i], points[i + 1]);
      simple = u != v && seen.emplace(u, v).second;
    }
    if (simple)
      return Graph(n, std::vector<Edge>(seen.begin(), seen.end()));
  }
  throw std::runtime_error("pairing model produced no simple " + std::to_string(d) +
                           "-regular graph on " + std::to_string(n) + " vertices in " +
                           std::to_string(max_attempts) + " attempts");
}

Graph gen_erdos_renyi(int n, double p, std::uint64_t seed)
{
  if (n <= 0 || p < 0.0 || p > 1.0)
    throw std::invalid_argument("Erdos-Renyi graph needs n > 0 and p in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(rng) < p)
        edges.emplace_back(i, j);
  return Graph(n, edges);
}

void save_series(const TimeSeries& series, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << 't';
  for (int i = 0; i < series.n_nodes(); ++i)
    out << ",x_" << i;
  out << '\n';
  for (int t = 0; t < series.length(); ++t) {
    out << t;
    for (int i = 0; i < series.n_nodes(); ++i)
      out << ',' << series.states(t, i);
    out << '\n';
  }
}

TimeSeries load_series(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open series " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
      cells.emplace_back();
    return cells;
  };

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("series file is empty", 1);
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "t")
    throw ParseError("header must be t,x_0,...", 1);
  const std::size_t width = header.size();

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    const auto cells = split(line);
    if (cells.size() != width)
      throw ParseError("row " + std::to_string(rows.size()) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(width), line_no);
    std::vector<double> row(width - 1);
    double t = 0.0;
    if (!parse_double(cells[0], t))
      throw ParseError("row " + std::to_string(rows.size()) + ": non-numeric time", line_no);
    for (std::size_t c = 1; c < width; ++c)
      if (!parse_double(cells[c], row[c - 1]) || !std::isfinite(row[c - 1]))
        throw ParseError("row " + std::to_string(rows.size()) + ": bad value '" + cells[c] +
                         "'", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2)
    throw ParseError("series needs at least two time steps", line_no);

  TimeSeries series{Eigen::MatrixXd(rows.size(), width - 1)};
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t i = 0; i + 1 < width; ++i)
      series.states(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = rows[t][i];
  return series;
}

}  // namespace gso

#ifndef GSO_ORACLES_HPP
#define GSO_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "gso/graph.hpp"

// Slow, independent reference implementations used by the tests and the
// selftest subcommand. None of them call into the solver code paths.
namespace gso::oracle {

// Minimum per-spin SK energy over all 2^n spin vectors (n <= 24).
double sk_ground_state(const SKInstance& inst);

// Size of a maximum independent set by exhaustive search (n <= 24).
int max_independent_set(const Graph& g);

// Minimum of -sum x + alpha sum_edges x_i x_j over all subsets (n <= 24).
double min_penalized_set(const Graph& g, double alpha);

// Q by direct summation over all ordered vertex pairs.
double modularity_direct(const Graph& g, const std::vector<int>& labels);

// Best Q over every labelling with at most k labels (n <= 12).
double best_modularity(const Graph& g, int k);

// Coupled logistic maps, written as a plain loop over neighbour lists.
// Returns the states after each of `steps` updates, starting with x0.
std::vector<std::vector<double>> cml_trajectory(const Graph& g, const std::vector<double>& x0,
                                                int steps, double coupling, double lambda);

}  // namespace gso::oracle

#endif  // GSO_ORACLES_HPP

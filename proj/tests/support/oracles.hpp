#pragma once

// Brute-force reference implementations used by the test suites. None of
// these call into the library; they recompute every quantity from its
// textbook definition on small inputs.

#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

// Newman modularity (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) from a
// dense adjacency matrix. Loops contribute 2w to A_ii.
double NewmanModularity(int n, const std::vector<Edge>& edges, const std::vector<int>& labels);

// Calls visit(labels) for every set partition of {0..n-1} (restricted growth
// strings, so each partition appears once).
void ForEachPartition(int n, const std::function<void(const std::vector<int>&)>& visit);

// Highest Newman modularity over all set partitions.
double BestModularity(int n, const std::vector<Edge>& edges);

// Pair-agreement counts from an explicit loop over all i < j.
struct PairAgreement {
  std::int64_t same_both = 0;    // co-clustered in a and in b
  std::int64_t same_a_only = 0;
  std::int64_t same_b_only = 0;
  std::int64_t differ_both = 0;
};
PairAgreement CountAgreement(const std::vector<int>& a, const std::vector<int>& b);

// Hubert-Arabie ARI in the 2x2 pair-table form, with the degenerate
// conventions: zero denominator -> 1 if no pair disagrees, else 0.
double Ari(const std::vector<int>& a, const std::vector<int>& b);
// TP / sqrt((TP+FP)(TP+FN)); both sides pairless and identical -> 1, one
// side pairless -> 0.
double Fms(const std::vector<int>& a, const std::vector<int>& b);

// Logistic regression by plain Newton-Raphson with Gauss-Jordan solves.
// Rows of x are observations.
std::vector<double> NewtonLogistic(const std::vector<std::vector<double>>& x,
                                   const std::vector<double>& y, int max_iter = 100,
                                   double tol = 1e-12);

// Solves a * out = b by Gauss-Jordan elimination with partial pivoting.
std::vector<double> SolveLinear(std::vector<std::vector<double>> a, std::vector<double> b);

// Density 2E / (n(n-1)) counted from an adjacency matrix.
double Density(int n, const std::vector<std::pair<int, int>>& edges);
// Connected components from a transitive closure (Warshall).
int Components(int n, const std::vector<std::pair<int, int>>& edges);

// Whole-network bipartite group x cluster statistics evaluated from scratch.
// `member[g][c]` is the tie indicator. Numeric values and categories are
// indexed by group.
struct ErgmStats {
  double edges = 0.0;
  double nodecov = 0.0;
  double absdiff = 0.0;
  double match = 0.0;
};
ErgmStats FullStatistics(const std::vector<std::vector<bool>>& member,
                         const std::vector<double>& numeric,
                         const std::vector<std::string>& category);

}  // namespace oracle

#pragma once

#include <Eigen/Core>

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvmc/common.hpp"
#include "mvmc/ingest.hpp"

namespace mvmc::ergm {

struct GroupCovariates {
  std::string group;
  double sum_weights = 0.0;       // total weight over all three views
  double nonzero_features = 0.0;  // positive cells over all three views
  double ratio = 0.0;             // nonzero_features / sum_weights, in (0, 1]
  std::string modal_tactic;
  std::string modal_target;
  std::string modal_weapon;
  std::string region;
  std::string ideology;
};

// Per-group covariates of one year. Modal categories break ties toward the
// lexicographically first category. Region and ideology come from metadata.
std::vector<GroupCovariates> BuildCovariates(const ingest::YearSlice& slice,
                                             const ingest::MultiViewDataset& dataset);

// Same, with the vocabularies and metadata supplied directly.
std::vector<GroupCovariates> BuildCovariates(
    const ingest::YearSlice& slice,
    const std::array<std::vector<std::string>, kNumViews>& vocabularies,
    const std::map<std::string, ingest::GroupMetadata>& metadata);

enum class Attribute {
  kSumWeights,
  kNonzeroFeatures,
  kRatio,
  kModalTarget,
  kModalTactic,
  kModalWeapon,
  kRegion,
  kIdeology,
};

enum class TermKind {
  kEdges,       // intercept
  kNodeCovSum,  // x_group
  kAbsDiff,     // sum over cluster peers of |x_group - x_peer|
  kMatch,       // number of cluster peers sharing the attribute
};

struct Term {
  TermKind kind = TermKind::kEdges;
  Attribute attribute = Attribute::kSumWeights;

  std::string name() const;
  friend bool operator==(const Term&, const Term&) = default;
};

bool IsNumeric(Attribute attribute);
double NumericValue(const GroupCovariates& c, Attribute attribute);
const std::string& CategoryValue(const GroupCovariates& c, Attribute attribute);

// nodecov(sum_weights), absdiff(nonzero_features), absdiff(ratio), then match
// on modal target, tactic, weapon, region and ideology.
std::vector<Term> DefaultTerms();

std::optional<Term> ParseTerm(std::string_view name);

// Coefficients keyed by term name; absent terms count as 0.
using Coefficients = std::map<std::string, double>;

double Expit(double x);

struct LogOdds {
  double logit = 0.0;
  double probability = 0.5;
};

// Conditional log-odds that two groups share a cluster under the default
// eight-term model (no intercept).
LogOdds CoclusteringLogOdds(const GroupCovariates& a, const GroupCovariates& b,
                            const Coefficients& theta);

// Bipartite group x cluster network. A partition induces exactly one edge per
// group; general networks are allowed for simulation.
class BipartiteClusterNetwork {
 public:
  BipartiteClusterNetwork(int num_groups, int num_clusters);
  static BipartiteClusterNetwork FromLabels(std::span<const int> labels);

  int num_groups() const { return num_groups_; }
  int num_clusters() const { return num_clusters_; }
  bool HasEdge(int group, int cluster) const;
  void SetEdge(int group, int cluster, bool present);
  // Groups tied to `cluster`, ascending.
  const std::set<int>& members(int cluster) const;
  std::size_t num_edges() const;
  bool IsPartitionInduced() const;

 private:
  void Check(int group, int cluster) const;

  int num_groups_;
  int num_clusters_;
  std::vector<std::set<int>> members_;
};

// Change in each model statistic when (group, cluster) is switched on with the
// rest of the network held fixed. Peers exclude the group itself.
std::vector<double> ChangeStatistics(const BipartiteClusterNetwork& network, int group,
                                     int cluster, std::span<const Term> terms,
                                     std::span<const GroupCovariates> covariates);

struct DesignMatrix {
  Eigen::MatrixXd x;  // one row per (group, cluster) dyad
  Eigen::VectorXd y;
  std::vector<std::string> columns;
};

DesignMatrix BuildDesign(const BipartiteClusterNetwork& network, std::span<const Term> terms,
                         std::span<const GroupCovariates> covariates, bool include_intercept);

struct FitOptions {
  int max_iter = 50;
  double tol = 1e-8;
};

struct ErgmModel {
  std::vector<std::string> terms;
  Eigen::VectorXd theta;
  Eigen::VectorXd std_errors;
  double log_pseudo_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  int n_dyads = 0;
  int iterations = 0;

  Eigen::VectorXd z() const;
  Eigen::VectorXd p_values() const;
  Coefficients coefficients() const;
};

// Logistic regression by iteratively reweighted least squares. Throws
// EstimationError on a rank-deficient design (naming the first dependent
// column), on separation, or on non-convergence (with the step trace).
ErgmModel FitLogistic(const DesignMatrix& design, const FitOptions& options = {});

// Maximum pseudo-likelihood fit: logistic regression of dyad indicators on
// change statistics.
ErgmModel MpleFit(const BipartiteClusterNetwork& network, std::span<const Term> terms,
                  std::span<const GroupCovariates> covariates, bool include_intercept = false,
                  const FitOptions& options = {});

}  // namespace mvmc::ergm

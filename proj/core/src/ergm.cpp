#include "mvmc/ergm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvmc::ergm {
namespace {

constexpr std::array<std::pair<Attribute, std::string_view>, 8> kAttributeNames{{
    {Attribute::kSumWeights, "sum_weights"},
    {Attribute::kNonzeroFeatures, "nonzero_features"},
    {Attribute::kRatio, "ratio"},
    {Attribute::kModalTarget, "modal_target"},
    {Attribute::kModalTactic, "modal_tactic"},
    {Attribute::kModalWeapon, "modal_weapon"},
    {Attribute::kRegion, "region"},
    {Attribute::kIdeology, "ideology"},
}};

std::string_view AttributeName(Attribute a) {
  for (const auto& [attr, name] : kAttributeNames) {
    if (attr == a) return name;
  }
  return "?";
}

std::optional<Attribute> ParseAttribute(std::string_view name) {
  for (const auto& [attr, n] : kAttributeNames) {
    if (n == name) return attr;
  }
  return std::nullopt;
}

// Argmax column of one matrix row; the vocabulary is sorted, so the first
// maximum is the lexicographically first category.
std::string ModalCategory(const ingest::CountMatrix& m, Eigen::Index row,
                          const std::vector<std::string>& vocab) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < m.cols(); ++c) {
    if (m(row, c) > m(row, best)) best = c;
  }
  return vocab[static_cast<std::size_t>(best)];
}

// log(1 + exp(x)) without overflow.
double Softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double LogLikelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - Softplus(eta(i));
  return ll;
}

}  // namespace

std::vector<GroupCovariates> BuildCovariates(
    const ingest::YearSlice& slice,
    const std::array<std::vector<std::string>, kNumViews>& vocabularies,
    const std::map<std::string, ingest::GroupMetadata>& metadata) {
  std::vector<GroupCovariates> out;
  out.reserve(slice.num_groups());
  for (std::size_t g = 0; g < slice.num_groups(); ++g) {
    const auto row = static_cast<Eigen::Index>(g);
    GroupCovariates c;
    c.group = slice.groups[g];
    for (View view : kAllViews) {
      const auto& m = slice.matrix(view);
      if (m.cols() != static_cast<Eigen::Index>(vocabularies[ViewIndex(view)].size())) {
        throw ContractError("vocabulary does not match slice columns");
      }
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        c.sum_weights += static_cast<double>(m(row, col));
        if (m(row, col) > 0) c.nonzero_features += 1.0;
      }
    }
    if (c.sum_weights <= 0.0) {
      throw ContractError("group '" + c.group + "' has zero total weight");
    }
    c.ratio = c.nonzero_features / c.sum_weights;
    c.modal_tactic = ModalCategory(slice.matrix(View::kTactic), row,
                                   vocabularies[ViewIndex(View::kTactic)]);
    c.modal_target = ModalCategory(slice.matrix(View::kTarget), row,
                                   vocabularies[ViewIndex(View::kTarget)]);
    c.modal_weapon = ModalCategory(slice.matrix(View::kWeapon), row,
                                   vocabularies[ViewIndex(View::kWeapon)]);
    if (auto it = metadata.find(c.group); it != metadata.end()) {
      c.region = it->second.most_common_region;
      c.ideology = it->second.ideology;
    } else {
      c.region = ingest::kUnknownCategory;
      c.ideology = ingest::kUnknownCategory;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<GroupCovariates> BuildCovariates(const ingest::YearSlice& slice,
                                             const ingest::MultiViewDataset& dataset) {
  std::array<std::vector<std::string>, kNumViews> vocab;
  for (View v : kAllViews) vocab[ViewIndex(v)] = dataset.vocabulary(v);
  std::map<std::string, ingest::GroupMetadata> meta;
  for (const auto& g : slice.groups) meta[g] = dataset.metadata(g);
  return BuildCovariates(slice, vocab, meta);
}

std::string Term::name() const {
  switch (kind) {
    case TermKind::kEdges:
      return "edges";
    case TermKind::kNodeCovSum:
      return "nodecov." + std::string(AttributeName(attribute));
    case TermKind::kAbsDiff:
      return "absdiff." + std::string(AttributeName(attribute));
    case TermKind::kMatch:
      return "match." + std::string(AttributeName(attribute));
  }
  return "?";
}

bool IsNumeric(Attribute attribute) {
  return attribute == Attribute::kSumWeights || attribute == Attribute::kNonzeroFeatures ||
         attribute == Attribute::kRatio;
}

double NumericValue(const GroupCovariates& c, Attribute attribute) {
  switch (attribute) {
    case Attribute::kSumWeights:
      return c.sum_weights;
    case Attribute::kNonzeroFeatures:
      return c.nonzero_features;
    case Attribute::kRatio:
      return c.ratio;
    default:
      throw ContractError("attribute " + std::string(AttributeName(attribute)) +
                          " is categorical");
  }
}

const std::string& CategoryValue(const GroupCovariates& c, Attribute attribute) {
  switch (attribute) {
    case Attribute::kModalTarget:
      return c.modal_target;
    case Attribute::kModalTactic:
      return c.modal_tactic;
    case Attribute::kModalWeapon:
      return c.modal_weapon;
    case Attribute::kRegion:
      return c.region;
    case Attribute::kIdeology:
      return c.ideology;
    default:
      throw ContractError("attribute " + std::string(AttributeName(attribute)) + " is numeric");
  }
}

std::vector<Term> DefaultTerms() {
  return {
      {TermKind::kNodeCovSum, Attribute::kSumWeights},
      {TermKind::kAbsDiff, Attribute::kNonzeroFeatures},
      {TermKind::kAbsDiff, Attribute::kRatio},
      {TermKind::kMatch, Attribute::kModalTarget},
      {TermKind::kMatch, Attribute::kModalTactic},
      {TermKind::kMatch, Attribute::kModalWeapon},
      {TermKind::kMatch, Attribute::kRegion},
      {TermKind::kMatch, Attribute::kIdeology},
  };
}

std::optional<Term> ParseTerm(std::string_view name) {
  if (name == "edges") return Term{TermKind::kEdges, Attribute::kSumWeights};
  const auto dot = name.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const auto kind = name.substr(0, dot);
  const auto attr = ParseAttribute(name.substr(dot + 1));
  if (!attr) return std::nullopt;
  if (kind == "nodecov" && IsNumeric(*attr)) return Term{TermKind::kNodeCovSum, *attr};
  if (kind == "absdiff" && IsNumeric(*attr)) return Term{TermKind::kAbsDiff, *attr};
  if (kind == "match") return Term{TermKind::kMatch, *attr};
  return std::nullopt;
}

double Expit(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

bool Matches(const GroupCovariates& a, const GroupCovariates& b, Attribute attribute) {
  if (IsNumeric(attribute)) return NumericValue(a, attribute) == NumericValue(b, attribute);
  return CategoryValue(a, attribute) == CategoryValue(b, attribute);
}

}  // namespace

LogOdds CoclusteringLogOdds(const GroupCovariates& a, const GroupCovariates& b,
                            const Coefficients& theta) {
  LogOdds out;
  for (const auto& [name, coef] : theta) {
    const auto term = ParseTerm(name);
    if (!term) throw ContractError("unknown term '" + name + "'");
    switch (term->kind) {
      case TermKind::kEdges:
        break;  // the pairwise log-odds carry no intercept
      case TermKind::kNodeCovSum:
        out.logit += coef * (NumericValue(a, term->attribute) + NumericValue(b, term->attribute));
        break;
      case TermKind::kAbsDiff:
        out.logit +=
            coef * std::abs(NumericValue(a, term->attribute) - NumericValue(b, term->attribute));
        break;
      case TermKind::kMatch:
        if (Matches(a, b, term->attribute)) out.logit += coef;
        break;
    }
  }
  out.probability = Expit(out.logit);
  return out;
}

BipartiteClusterNetwork::BipartiteClusterNetwork(int num_groups, int num_clusters)
    : num_groups_(num_groups),
      num_clusters_(num_clusters),
      members_(static_cast<std::size_t>(std::max(num_clusters, 0))) {
  if (num_groups < 0 || num_clusters < 0) throw ContractError("negative network size");
}

BipartiteClusterNetwork BipartiteClusterNetwork::FromLabels(std::span<const int> labels) {
  int clusters = 0;
  for (int c : labels) {
    if (c < 0) throw ContractError("unlabeled node");
    clusters = std::max(clusters, c + 1);
  }
  BipartiteClusterNetwork net(static_cast<int>(labels.size()), clusters);
  for (std::size_t g = 0; g < labels.size(); ++g) net.SetEdge(static_cast<int>(g), labels[g], true);
  return net;
}

void BipartiteClusterNetwork::Check(int group, int cluster) const {
  if (group < 0 || group >= num_groups_ || cluster < 0 || cluster >= num_clusters_) {
    throw ContractError("dyad index out of range");
  }
}

bool BipartiteClusterNetwork::HasEdge(int group, int cluster) const {
  Check(group, cluster);
  return members_[static_cast<std::size_t>(cluster)].contains(group);
}

void BipartiteClusterNetwork::SetEdge(int group, int cluster, bool present) {
  Check(group, cluster);
  auto& m = members_[static_cast<std::size_t>(cluster)];
  if (present) {
    m.insert(group);
  } else {
    m.erase(group);
  }
}

const std::set<int>& BipartiteClusterNetwork::members(int cluster) const {
  if (cluster < 0 || cluster >= num_clusters_) throw ContractError("cluster out of range");
  return members_[static_cast<std::size_t>(cluster)];
}

std::size_t BipartiteClusterNetwork::num_edges() const {
  std::size_t total = 0;
  for (const auto& m : members_) total += m.size();
  return total;
}

bool BipartiteClusterNetwork::IsPartitionInduced() const {
  std::vector<int> degree(static_cast<std::size_t>(num_groups_), 0);
  for (const auto& m : members_) {
    for (int g : m) ++degree[static_cast<std::size_t>(g)];
  }
  return std::all_of(degree.begin(), degree.end(), [](int d) { return d == 1; });
}

std::vector<double> ChangeStatistics(const BipartiteClusterNetwork& network, int group,
                                     int cluster, std::span<const Term> terms,
                                     std::span<const GroupCovariates> covariates) {
  if (static_cast<int>(covariates.size()) != network.num_groups()) {
    throw ContractError("covariates must align with network groups");
  }
  (void)network.HasEdge(group, cluster);  // range check
  const auto& self = covariates[static_cast<std::size_t>(group)];
  const auto& peers = network.members(cluster);

  std::vector<double> delta;
  delta.reserve(terms.size());
  for (const auto& term : terms) {
    double d = 0.0;
    switch (term.kind) {
      case TermKind::kEdges:
        d = 1.0;
        break;
      case TermKind::kNodeCovSum:
        d = NumericValue(self, term.attribute);
        break;
      case TermKind::kAbsDiff: {
        const double x = NumericValue(self, term.attribute);
        for (int p : peers) {
          if (p != group) d += std::abs(x - NumericValue(covariates[static_cast<std::size_t>(p)], term.attribute));
        }
        break;
      }
      case TermKind::kMatch:
        for (int p : peers) {
          if (p != group && Matches(self, covariates[static_cast<std::size_t>(p)], term.attribute)) {
            d += 1.0;
          }
        }
        break;
    }
    delta.push_back(d);
  }
  return delta;
}

DesignMatrix BuildDesign(const BipartiteClusterNetwork& network, std::span<const Term> terms,
                         std::span<const GroupCovariates> covariates, bool include_intercept) {
  std::vector<Term> all;
  if (include_intercept) all.push_back({TermKind::kEdges, Attribute::kSumWeights});
  for (const auto& t : terms) {
    if (t.kind == TermKind::kEdges) {
      if (!include_intercept) all.push_back(t);
      continue;
    }
    if (t.kind != TermKind::kMatch && !IsNumeric(t.attribute)) {
      throw ContractError("term " + t.name() + " needs a numeric attribute");
    }
    all.push_back(t);
  }

  DesignMatrix design;
  const Eigen::Index rows =
      static_cast<Eigen::Index>(network.num_groups()) * network.num_clusters();
  design.x.resize(rows, static_cast<Eigen::Index>(all.size()));
  design.y.resize(rows);
  for (const auto& t : all) design.columns.push_back(t.name());

  Eigen::Index row = 0;
  for (int g = 0; g < network.num_groups(); ++g) {
    for (int c = 0; c < network.num_clusters(); ++c) {
      const auto delta = ChangeStatistics(network, g, c, all, covariates);
      for (std::size_t k = 0; k < delta.size(); ++k) {
        design.x(row, static_cast<Eigen::Index>(k)) = delta[k];
      }
      design.y(row) = network.HasEdge(g, c) ? 1.0 : 0.0;
      ++row;
    }
  }
  return design;
}

Eigen::VectorXd ErgmModel::z() const { return theta.cwiseQuotient(std_errors); }

Eigen::VectorXd ErgmModel::p_values() const {
  Eigen::VectorXd zz = z();
  Eigen::VectorXd p(zz.size());
  for (Eigen::Index i = 0; i < zz.size(); ++i) p(i) = std::erfc(std::abs(zz(i)) / std::sqrt(2.0));
  return p;
}

Coefficients ErgmModel::coefficients() const {
  Coefficients out;
  for (std::size_t k = 0; k < terms.size(); ++k) out[terms[k]] = theta(static_cast<Eigen::Index>(k));
  return out;
}

namespace {

void CheckRank(const DesignMatrix& design) {
  const Eigen::Index k = design.x.cols();
  Eigen::MatrixXd scaled = design.x;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double s = scaled.col(j).cwiseAbs().maxCoeff();
    if (s == 0.0) {
      throw EstimationError("rank-deficient design: term " + design.columns[static_cast<std::size_t>(j)] +
                            " is identically zero");
    }
    scaled.col(j) /= s;
  }
  for (Eigen::Index j = 1; j <= k; ++j) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled.leftCols(j));
    qr.setThreshold(1e-10);
    if (qr.rank() < j) {
      throw EstimationError("rank-deficient design: term " +
                            design.columns[static_cast<std::size_t>(j - 1)] +
                            " is collinear with earlier terms");
    }
  }
}

}  // namespace

ErgmModel FitLogistic(const DesignMatrix& design, const FitOptions& options) {
  const Eigen::Index n = design.x.rows();
  const Eigen::Index k = design.x.cols();
  if (k == 0) throw EstimationError("model has no terms");
  if (n <= k) throw EstimationError("fewer dyads than parameters");
  CheckRank(design);

  const auto& x = design.x;
  const auto& y = design.y;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd eta = x * beta;
  double ll = LogLikelihood(eta, y);
  std::vector<double> trace;
  bool converged = false;
  int iter = 0;

  auto hessian = [&](const Eigen::VectorXd& e) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = Expit(e(i));
      w(i) = p * (1.0 - p);
    }
    Eigen::MatrixXd h = x.transpose() * w.asDiagonal() * x;
    return h;
  };

  // Under separation the fitted probabilities run to 0 or 1 while one
  // coefficient grows without bound, so the Hessian decays towards singular
  // and the steps never settle.
  auto fail = [&](const std::string& fallback) {
    std::ostringstream msg;
    if (eta.cwiseAbs().maxCoeff() > 20.0) {
      Eigen::Index worst = 0;
      double worst_effect = -1.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::VectorXd centered = x.col(j).array() - x.col(j).mean();
        const double effect =
            std::abs(beta(j)) * std::sqrt(centered.squaredNorm() / static_cast<double>(n));
        if (effect > worst_effect) {
          worst_effect = effect;
          worst = j;
        }
      }
      msg << "perfect or quasi-complete separation on term "
          << design.columns[static_cast<std::size_t>(worst)] << " (" << fallback << ")";
    } else {
      msg << fallback;
    }
    msg << "; max |step| per iteration:";
    for (double c : trace) msg << ' ' << c;
    throw EstimationError(msg.str());
  };

  while (iter < options.max_iter) {
    ++iter;
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) resid(i) = y(i) - Expit(eta(i));
    const Eigen::MatrixXd h = hessian(eta);
    const Eigen::VectorXd grad = x.transpose() * resid;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      fail("information matrix became singular at iteration " + std::to_string(iter));
    }
    // Step halving keeps the pseudo-likelihood non-decreasing.
    double t = 1.0;
    Eigen::VectorXd next = beta + step;
    Eigen::VectorXd next_eta = x * next;
    double next_ll = LogLikelihood(next_eta, y);
    for (int h_iter = 0; h_iter < 30 && next_ll < ll - 1e-12 * std::abs(ll); ++h_iter) {
      t *= 0.5;
      next = beta + t * step;
      next_eta = x * next;
      next_ll = LogLikelihood(next_eta, y);
    }
    const double change = (t * step).cwiseAbs().maxCoeff();
    trace.push_back(change);
    beta = std::move(next);
    eta = std::move(next_eta);
    ll = next_ll;
    if (change < options.tol) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    fail("IRLS did not converge in " + std::to_string(options.max_iter) + " iterations");
  }

  ErgmModel model;
  model.terms = design.columns;
  model.theta = beta;
  const Eigen::MatrixXd h = hessian(eta);
  const Eigen::MatrixXd cov = h.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  model.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  model.log_pseudo_likelihood = ll;
  model.n_dyads = static_cast<int>(n);
  model.iterations = iter;
  model.aic = 2.0 * static_cast<double>(k) - 2.0 * ll;
  model.bic = static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * ll;
  return model;
}

ErgmModel MpleFit(const BipartiteClusterNetwork& network, std::span<const Term> terms,
                  std::span<const GroupCovariates> covariates, bool include_intercept,
                  const FitOptions& options) {
  if (network.num_groups() < 2 || network.num_clusters() < 2) {
    throw EstimationError("pseudo-likelihood fit needs >= 2 groups and >= 2 clusters");
  }
  return FitLogistic(BuildDesign(network, terms, covariates, include_intercept), options);
}

}  // namespace mvmc::ergm

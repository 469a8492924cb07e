#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mvmc/ergm.hpp"
#include "oracles.hpp"
#include "worked_example.hpp"

using namespace mvmc;
using namespace mvmc::ergm;

namespace {

std::vector<GroupCovariates> RandomCovariates(int n, std::mt19937_64& rng) {
  const std::vector<std::string> cats{"a", "b", "c"};
  std::vector<GroupCovariates> out;
  for (int g = 0; g < n; ++g) {
    GroupCovariates c;
    c.group = "g" + std::to_string(g);
    c.sum_weights = 3.0 + static_cast<double>(rng() % 60);
    c.nonzero_features = 3.0 + static_cast<double>(rng() % 3);
    c.ratio = c.nonzero_features / c.sum_weights;
    c.modal_target = cats[rng() % 3];
    c.modal_tactic = cats[rng() % 3];
    c.modal_weapon = cats[rng() % 3];
    c.region = cats[rng() % 2];
    c.ideology = cats[rng() % 3];
    out.push_back(c);
  }
  return out;
}

std::vector<std::vector<bool>> Membership(const BipartiteClusterNetwork& net) {
  std::vector<std::vector<bool>> m(static_cast<std::size_t>(net.num_groups()),
                                   std::vector<bool>(static_cast<std::size_t>(net.num_clusters())));
  for (int g = 0; g < net.num_groups(); ++g) {
    for (int c = 0; c < net.num_clusters(); ++c) m[g][c] = net.HasEdge(g, c);
  }
  return m;
}

double OracleStat(const oracle::ErgmStats& s, const Term& t) {
  switch (t.kind) {
    case TermKind::kEdges: return s.edges;
    case TermKind::kNodeCovSum: return s.nodecov;
    case TermKind::kAbsDiff: return s.absdiff;
    case TermKind::kMatch: return s.match;
  }
  return 0.0;
}

// Full-network statistic for one term from the brute-force evaluator.
double FullStat(const BipartiteClusterNetwork& net, const Term& t,
                const std::vector<GroupCovariates>& cov) {
  std::vector<double> numeric;
  std::vector<std::string> category;
  for (const auto& c : cov) {
    numeric.push_back(IsNumeric(t.attribute) ? NumericValue(c, t.attribute) : 0.0);
    category.push_back(IsNumeric(t.attribute) ? std::to_string(NumericValue(c, t.attribute))
                                              : CategoryValue(c, t.attribute));
  }
  return OracleStat(oracle::FullStatistics(Membership(net), numeric, category), t);
}

}  // namespace

TEST(Covariates, SingleEventGroup) {
  ingest::YearSlice s;
  s.groups = {"G"};
  std::array<std::vector<std::string>, kNumViews> vocab{
      std::vector<std::string>{"t1", "t2"}, std::vector<std::string>{"x"},
      std::vector<std::string>{"w1", "w2"}};
  s.views[0] = ingest::CountMatrix{{0, 1}};
  s.views[1] = ingest::CountMatrix{{1}};
  s.views[2] = ingest::CountMatrix{{1, 0}};
  const auto c = BuildCovariates(s, vocab, {});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].sum_weights, 3.0);
  EXPECT_EQ(c[0].nonzero_features, 3.0);
  EXPECT_EQ(c[0].ratio, 1.0);
  EXPECT_EQ(c[0].modal_tactic, "t2");
  EXPECT_EQ(c[0].modal_weapon, "w1");
  EXPECT_EQ(c[0].region, ingest::kUnknownCategory);
}

TEST(Covariates, RatioFromCountsAndModalTies) {
  // 23 positive cells summing to 325, spread over the three views.
  ingest::YearSlice s;
  s.groups = {"L"};
  std::array<std::vector<std::string>, kNumViews> vocab;
  const std::vector<int> widths{8, 8, 7};
  std::int64_t remaining = 325;
  for (std::size_t v = 0; v < 3; ++v) {
    s.views[v].resize(1, widths[v]);
    for (int c = 0; c < widths[v]; ++c) {
      vocab[v].push_back("c" + std::to_string(c));
      s.views[v](0, c) = (v == 2 && c == widths[v] - 1) ? remaining : 14;
      remaining -= s.views[v](0, c);
    }
  }
  std::map<std::string, ingest::GroupMetadata> meta{{"L", {"L", "Left & Ethno", "South Asia"}}};
  const auto c = BuildCovariates(s, vocab, meta);
  EXPECT_EQ(c[0].sum_weights, 325.0);
  EXPECT_EQ(c[0].nonzero_features, 23.0);
  EXPECT_NEAR(c[0].ratio, 0.0708, 5e-5);
  EXPECT_EQ(c[0].modal_tactic, "c0");  // all tied, lexicographically first wins
  EXPECT_EQ(c[0].ideology, "Left & Ethno");
}

TEST(LogOdds, WorkedExamples) {
  const auto theta = worked::Theta2005();
  const auto eln_ltte = CoclusteringLogOdds(worked::Eln(), worked::Ltte(), theta);
  EXPECT_NEAR(eln_ltte.logit, -7.30, 0.01);
  EXPECT_NEAR(eln_ltte.probability, 6.7e-4, 0.1e-4);
  const auto ji_ltte = CoclusteringLogOdds(worked::Ji(), worked::Ltte(), theta);
  EXPECT_NEAR(ji_ltte.logit, -7.15, 0.01);
}

TEST(LogOdds, SumTermOnly) {
  const Coefficients theta{{"nodecov.sum_weights", -0.0108}};
  GroupCovariates a, b;
  a.sum_weights = 3;
  b.sum_weights = 5;
  const auto r = CoclusteringLogOdds(a, b, theta);
  EXPECT_NEAR(r.logit, -0.0864, 1e-12);
  EXPECT_NEAR(r.probability, 0.478, 5e-4);
}

TEST(LogOdds, SymmetricAndMonotoneInRatio) {
  const auto theta = worked::Theta2005();
  const auto a = worked::Ji();
  auto b = worked::Ltte();
  EXPECT_EQ(CoclusteringLogOdds(a, b, theta).logit, CoclusteringLogOdds(b, a, theta).logit);
  double previous = CoclusteringLogOdds(a, b, theta).logit;
  for (double r : {0.05, 0.03, 0.01}) {
    b.ratio = r;  // moves further from a.ratio = 0.259
    const double now = CoclusteringLogOdds(a, b, theta).logit;
    EXPECT_LT(now, previous);
    previous = now;
  }
}

TEST(LogOdds, UnknownTermRejected) {
  EXPECT_THROW(CoclusteringLogOdds(worked::Ji(), worked::Ltte(), {{"bogus", 1.0}}), ContractError);
}

TEST(Expit, Identities) {
  EXPECT_EQ(Expit(0.0), 0.5);
  for (double x : {0.1, 1.0, 7.3, 30.0, 700.0}) {
    EXPECT_NEAR(Expit(-x), 1.0 - Expit(x), 1e-15);
  }
}

TEST(Terms, NamesRoundTrip) {
  for (const auto& t : DefaultTerms()) EXPECT_EQ(ParseTerm(t.name()), t);
  EXPECT_EQ(DefaultTerms().size(), 8u);
  EXPECT_EQ(ParseTerm("edges")->kind, TermKind::kEdges);
  EXPECT_FALSE(ParseTerm("absdiff.region").has_value());
  EXPECT_FALSE(ParseTerm("nodecov").has_value());
}

TEST(Network, PartitionInduced) {
  const auto net = BipartiteClusterNetwork::FromLabels(std::vector<int>{0, 1, 1, 2});
  EXPECT_EQ(net.num_groups(), 4);
  EXPECT_EQ(net.num_clusters(), 3);
  EXPECT_TRUE(net.IsPartitionInduced());
  EXPECT_EQ(net.num_edges(), 4u);
  auto general = net;
  general.SetEdge(0, 2, true);
  EXPECT_FALSE(general.IsPartitionInduced());
  EXPECT_THROW(general.SetEdge(4, 0, true), ContractError);
}

TEST(ChangeStatistics, EmptyClusterAndPeerCounts) {
  std::mt19937_64 rng(1);
  auto cov = RandomCovariates(4, rng);
  cov[0].ideology = cov[1].ideology = cov[2].ideology = "same";
  BipartiteClusterNetwork net(4, 2);
  net.SetEdge(0, 0, true);
  net.SetEdge(1, 0, true);
  const auto terms = DefaultTerms();
  const auto d = ChangeStatistics(net, 2, 1, terms, cov);
  EXPECT_EQ(d[0], cov[2].sum_weights);
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_EQ(d[k], 0.0) << terms[k].name();
  const auto match_ideology = std::vector<Term>{*ParseTerm("match.ideology")};
  EXPECT_EQ(ChangeStatistics(net, 2, 0, match_ideology, cov)[0], 2.0);
}

TEST(ChangeStatistics, MatchFullRecount) {
  std::mt19937_64 rng(19);
  std::vector<Term> terms = DefaultTerms();
  terms.push_back(*ParseTerm("edges"));
  terms.push_back(*ParseTerm("nodecov.ratio"));
  terms.push_back(*ParseTerm("absdiff.sum_weights"));
  for (int trial = 0; trial < 30; ++trial) {
    const auto cov = RandomCovariates(6, rng);
    BipartiteClusterNetwork net(6, 3);
    for (int g = 0; g < 6; ++g) {
      for (int c = 0; c < 3; ++c) net.SetEdge(g, c, rng() % 3 == 0);
    }
    for (int g = 0; g < 6; ++g) {
      for (int c = 0; c < 3; ++c) {
        const auto delta = ChangeStatistics(net, g, c, terms, cov);
        auto plus = net;
        plus.SetEdge(g, c, true);
        auto minus = net;
        minus.SetEdge(g, c, false);
        for (std::size_t k = 0; k < terms.size(); ++k) {
          EXPECT_NEAR(delta[k], FullStat(plus, terms[k], cov) - FullStat(minus, terms[k], cov), 1e-12)
              << terms[k].name();
        }
      }
    }
  }
}

TEST(ChangeStatistics, DyadIndependentTermsIgnoreOtherEdges) {
  std::mt19937_64 rng(3);
  const auto cov = RandomCovariates(5, rng);
  const std::vector<Term> terms{*ParseTerm("edges"), *ParseTerm("nodecov.sum_weights"),
                                *ParseTerm("nodecov.nonzero_features")};
  BipartiteClusterNetwork net(5, 3);
  const auto before = ChangeStatistics(net, 1, 2, terms, cov);
  net.SetEdge(0, 2, true);
  net.SetEdge(3, 2, true);
  net.SetEdge(1, 0, true);
  EXPECT_EQ(ChangeStatistics(net, 1, 2, terms, cov), before);
}

TEST(Mple, MatchesNewtonOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 60;
    const auto cov = RandomCovariates(n, rng);
    std::vector<int> labels(n);
    for (int g = 0; g < n; ++g) labels[g] = static_cast<int>(rng() % 4);
    const auto net = BipartiteClusterNetwork::FromLabels(labels);
    const std::vector<Term> terms{*ParseTerm("nodecov.sum_weights"),
                                  *ParseTerm("absdiff.nonzero_features"),
                                  *ParseTerm("absdiff.ratio")};
    const auto model = MpleFit(net, terms, cov, true);

    // Rebuild the design independently from full recounts.
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int g = 0; g < n; ++g) {
      for (int c = 0; c < net.num_clusters(); ++c) {
        auto plus = net;
        plus.SetEdge(g, c, true);
        auto minus = net;
        minus.SetEdge(g, c, false);
        std::vector<double> row{1.0};
        for (const auto& t : terms) row.push_back(FullStat(plus, t, cov) - FullStat(minus, t, cov));
        x.push_back(row);
        y.push_back(net.HasEdge(g, c) ? 1.0 : 0.0);
      }
    }
    const auto beta = oracle::NewtonLogistic(x, y);
    ASSERT_EQ(model.theta.size(), 4);
    EXPECT_EQ(model.terms.front(), "edges");
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(model.theta(k), beta[k], 1e-6) << model.terms[k];
    const int k = static_cast<int>(model.theta.size());
    EXPECT_NEAR(model.aic, 2.0 * k - 2.0 * model.log_pseudo_likelihood, 1e-9);
    EXPECT_NEAR(model.bic, k * std::log(model.n_dyads) - 2.0 * model.log_pseudo_likelihood, 1e-9);
    EXPECT_EQ(model.n_dyads, n * net.num_clusters());
  }
}

TEST(Mple, StandardErrorsFromInverseInformation) {
  std::mt19937_64 rng(29);
  const auto cov = RandomCovariates(80, rng);
  std::vector<int> labels(80);
  for (auto& l : labels) l = static_cast<int>(rng() % 3);
  const auto net = BipartiteClusterNetwork::FromLabels(labels);
  const std::vector<Term> terms{*ParseTerm("nodecov.sum_weights")};
  const auto model = MpleFit(net, terms, cov, true);
  const auto design = BuildDesign(net, terms, cov, true);
  std::vector<std::vector<double>> info(2, std::vector<double>(2, 0.0));
  for (Eigen::Index i = 0; i < design.x.rows(); ++i) {
    const double p = Expit(design.x.row(i).dot(model.theta));
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) info[a][b] += p * (1 - p) * design.x(i, a) * design.x(i, b);
    }
  }
  const double det = info[0][0] * info[1][1] - info[0][1] * info[1][0];
  EXPECT_NEAR(model.std_errors(0), std::sqrt(info[1][1] / det), 1e-9);
  EXPECT_NEAR(model.std_errors(1), std::sqrt(info[0][0] / det), 1e-9);
  const auto z = model.z();
  const auto p = model.p_values();
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(p(k), std::erfc(std::abs(z(k)) / std::sqrt(2.0)), 1e-15);
  }
}

TEST(Mple, ConstantCovariateIsRankDeficient) {
  std::mt19937_64 rng(2);
  auto cov = RandomCovariates(20, rng);
  for (auto& c : cov) c.sum_weights = 10.0;
  std::vector<int> labels(20);
  for (int g = 0; g < 20; ++g) labels[g] = g % 3;
  const auto net = BipartiteClusterNetwork::FromLabels(labels);
  const std::vector<Term> terms{*ParseTerm("nodecov.sum_weights"), *ParseTerm("absdiff.ratio")};
  try {
    MpleFit(net, terms, cov, true);
    FAIL() << "expected EstimationError";
  } catch (const EstimationError& e) {
    EXPECT_NE(std::string(e.what()).find("nodecov.sum_weights"), std::string::npos) << e.what();
  }
  const std::vector<Term> absdiff{*ParseTerm("absdiff.sum_weights")};
  EXPECT_THROW(MpleFit(net, absdiff, cov, true), EstimationError);
}

TEST(Mple, SeparationNamesTerm) {
  // Groups sharing a region always share a cluster: match.region separates.
  std::mt19937_64 rng(6);
  auto cov = RandomCovariates(30, rng);
  std::vector<int> labels(30);
  for (int g = 0; g < 30; ++g) {
    labels[g] = g % 3;
    cov[g].region = "r" + std::to_string(g % 3);
  }
  const auto net = BipartiteClusterNetwork::FromLabels(labels);
  const std::vector<Term> terms{*ParseTerm("nodecov.sum_weights"), *ParseTerm("match.region")};
  try {
    MpleFit(net, terms, cov, true);
    FAIL() << "expected EstimationError";
  } catch (const EstimationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("separation"), std::string::npos) << what;
    EXPECT_NE(what.find("match.region"), std::string::npos) << what;
  }
}

TEST(Mple, NeedsTwoGroupsAndClusters) {
  std::mt19937_64 rng(1);
  const auto cov = RandomCovariates(3, rng);
  const auto net = BipartiteClusterNetwork::FromLabels(std::vector<int>{0, 0, 0});
  EXPECT_THROW(MpleFit(net, DefaultTerms(), cov), EstimationError);
}

TEST(Mple, RecoversKnownDyadIndependentCoefficients) {
  std::mt19937_64 rng(41);
  const int groups = 300;
  const int clusters = 5;
  const auto cov = RandomCovariates(groups, rng);
  const std::vector<Term> terms{*ParseTerm("nodecov.sum_weights"), *ParseTerm("nodecov.ratio")};
  const std::vector<double> truth{-1.0, 0.02, 1.5};  // edges, sum_weights, ratio
  BipartiteClusterNetwork net(groups, clusters);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int g = 0; g < groups; ++g) {
    const double eta = truth[0] + truth[1] * cov[g].sum_weights + truth[2] * cov[g].ratio;
    for (int c = 0; c < clusters; ++c) net.SetEdge(g, c, u(rng) < Expit(eta));
  }
  const auto model = MpleFit(net, terms, cov, true);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(model.theta(k) - truth[k]), 3.0 * model.std_errors(k)) << model.terms[k];
  }
}

#include "mvmc/louvain.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace mvmc {
namespace {

// Gains closer than this are treated as ties; a move must beat staying put by
// more than this. Keeps floating-point noise from cycling nodes.
constexpr double kGainTolerance = 1e-12;

constexpr int kRestarts = 8;

class LevelOptimizer {
 public:
  LevelOptimizer(const std::vector<WeightedGraph>& views, std::span<const double> gammas,
                 std::span<const double> weights)
      : views_(views),
        gammas_(gammas),
        weights_(weights),
        m_(views.size()),
        n_(views.front().num_nodes()),
        community_(static_cast<std::size_t>(n_)),
        size_(static_cast<std::size_t>(n_), 1),
        tot_(static_cast<std::size_t>(n_) * m_, 0.0),
        link_(static_cast<std::size_t>(n_) * m_, 0.0),
        touched_flag_(static_cast<std::size_t>(n_), false) {
    std::iota(community_.begin(), community_.end(), 0);
    for (int u = 0; u < n_; ++u) {
      for (std::size_t v = 0; v < m_; ++v) tot_[Slot(u, v)] = views_[v].degree(u);
    }
    for (std::size_t v = 0; v < m_; ++v) {
      scale_.push_back(views_[v].total_weight() > 0.0
                           ? gammas_[v] / (2.0 * views_[v].total_weight())
                           : 0.0);
    }
  }

  // One pass over all nodes in `order`. Returns the number of moves.
  int Sweep(std::span<const int> order) {
    int moves = 0;
    for (int u : order) {
      if (MoveNode(u)) ++moves;
    }
    return moves;
  }

  const std::vector<int>& community() const { return community_; }

 private:
  std::size_t Slot(int c, std::size_t v) const { return static_cast<std::size_t>(c) * m_ + v; }

  double Gain(int u, int c) const {
    double gain = 0.0;
    for (std::size_t v = 0; v < m_; ++v) {
      if (weights_[v] == 0.0 || scale_[v] == 0.0) continue;
      gain += weights_[v] * 2.0 *
              (link_[Slot(c, v)] - scale_[v] * views_[v].degree(u) * tot_[Slot(c, v)]);
    }
    return gain;
  }

  bool MoveNode(int u) {
    const int old = community_[static_cast<std::size_t>(u)];

    // Link weight from u to each neighbouring community, per view.
    touched_.clear();
    auto touch = [&](int c) {
      if (!touched_flag_[static_cast<std::size_t>(c)]) {
        touched_flag_[static_cast<std::size_t>(c)] = true;
        touched_.push_back(c);
      }
    };
    touch(old);
    for (std::size_t v = 0; v < m_; ++v) {
      for (const auto& nb : views_[v].neighbors(u)) {
        const int c = community_[static_cast<std::size_t>(nb.node)];
        touch(c);
        link_[Slot(c, v)] += nb.weight;
      }
    }

    // Take u out of its community.
    for (std::size_t v = 0; v < m_; ++v) tot_[Slot(old, v)] -= views_[v].degree(u);
    --size_[static_cast<std::size_t>(old)];

    // An empty community is a candidate when leaving `old` does not empty it.
    if (size_[static_cast<std::size_t>(old)] > 0) {
      auto it = std::find(size_.begin(), size_.end(), 0);
      if (it != size_.end()) touch(static_cast<int>(it - size_.begin()));
    }

    std::sort(touched_.begin(), touched_.end());
    const double stay = Gain(u, old);
    int best = old;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int c : touched_) {
      const double g = Gain(u, c);
      if (g > best_gain + kGainTolerance) {
        best_gain = g;
        best = c;
      }
    }
    if (!(best_gain > stay + kGainTolerance)) best = old;

    for (std::size_t v = 0; v < m_; ++v) tot_[Slot(best, v)] += views_[v].degree(u);
    ++size_[static_cast<std::size_t>(best)];
    community_[static_cast<std::size_t>(u)] = best;

    for (int c : touched_) {
      touched_flag_[static_cast<std::size_t>(c)] = false;
      for (std::size_t v = 0; v < m_; ++v) link_[Slot(c, v)] = 0.0;
    }
    return best != old;
  }

  const std::vector<WeightedGraph>& views_;
  std::span<const double> gammas_;
  std::span<const double> weights_;
  std::size_t m_;
  int n_;
  std::vector<int> community_;
  std::vector<int> size_;
  std::vector<double> tot_;
  std::vector<double> link_;
  std::vector<double> scale_;
  std::vector<int> touched_;
  std::vector<bool> touched_flag_;
};

double LevelModularity(const std::vector<WeightedGraph>& views, std::span<const int> labels,
                       std::span<const double> gammas, std::span<const double> weights) {
  double q = 0.0;
  for (std::size_t v = 0; v < views.size(); ++v) {
    if (weights[v] != 0.0) q += weights[v] * ViewModularity(views[v], labels, gammas[v]);
  }
  return q;
}

LouvainResult SinglePass(const MultiViewGraphs& graphs, std::span<const double> gammas,
                         std::span<const double> weights, std::uint64_t seed) {
  const int n = graphs.num_nodes();
  LouvainResult result;
  result.labels.resize(static_cast<std::size_t>(n));
  std::iota(result.labels.begin(), result.labels.end(), 0);
  if (n == 0) return result;

  std::mt19937_64 rng(seed);
  std::vector<WeightedGraph> level = graphs.views();
  // node of the original graph -> node of the current level
  std::vector<int> membership(static_cast<std::size_t>(n));
  std::iota(membership.begin(), membership.end(), 0);

  result.q_trace.push_back(LevelModularity(level, result.labels, gammas, weights));

  for (;;) {
    const int level_n = level.front().num_nodes();
    LevelOptimizer opt(level, gammas, weights);
    std::vector<int> order(static_cast<std::size_t>(level_n));
    std::iota(order.begin(), order.end(), 0);

    bool moved_at_level = false;
    for (;;) {
      std::shuffle(order.begin(), order.end(), rng);
      const int moves = opt.Sweep(order);
      if (moves == 0) break;
      moved_at_level = true;
      result.q_trace.push_back(LevelModularity(level, opt.community(), gammas, weights));
    }
    if (!moved_at_level) break;
    ++result.levels;

    const Labels dense = Canonicalize(opt.community());
    const int num_communities = NumClusters(dense);
    for (auto& m : membership) m = dense[static_cast<std::size_t>(m)];
    for (auto& g : level) g = g.Aggregate(dense, num_communities);
    if (num_communities == level_n) break;
  }

  result.labels = Canonicalize(membership);
  return result;
}

}  // namespace

LouvainResult Louvain(const MultiViewGraphs& graphs, std::span<const double> gammas,
                      std::span<const double> weights, std::uint64_t seed) {
  if (gammas.size() != graphs.num_views() || weights.size() != graphs.num_views()) {
    throw ContractError("need one gamma and one weight per view");
  }
  // A single greedy pass lands in a poor local optimum on a few percent of
  // small graphs, so keep the best of several independently ordered passes.
  LouvainResult best;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRestarts; ++r) {
    LouvainResult run = SinglePass(graphs, gammas, weights,
                                   DeriveSeed(seed, static_cast<std::uint64_t>(r)));
    const double q = LevelModularity(graphs.views(), run.labels, gammas, weights);
    if (q > best_q + kGainTolerance) {
      best_q = q;
      best = std::move(run);
    }
  }
  return best;
}

LouvainResult Louvain(const WeightedGraph& graph, std::uint64_t seed) {
  const MultiViewGraphs graphs({graph});
  const double one[] = {1.0};
  return Louvain(graphs, one, one, seed);
}

}  // namespace mvmc

// Copyright 2026 The WDC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wdc/eval/elo.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "wdc/error.h"

namespace wdc::eval {
namespace {

constexpr double kScale = std::numbers::ln10 / 400.0;

// log(1 + e^x) without overflow.
double Softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Win counts among the arms of one group: wins(i, j) = times i beat j.
struct WinMatrix {
  int k = 0;
  Eigen::MatrixXd wins;
  double total = 0.0;
};

double Objective(const WinMatrix& m, const Eigen::VectorXd& r) {
  double s = 0.0;
  for (int i = 0; i < m.k; ++i) {
    for (int j = 0; j < m.k; ++j) {
      if (m.wins(i, j) > 0) s += m.wins(i, j) * Softplus(kScale * (r[j] - r[i]));
    }
  }
  return s / m.total;
}

void GradientAndHessian(const WinMatrix& m, const Eigen::VectorXd& r, Eigen::VectorXd& g,
                        Eigen::MatrixXd& h) {
  g.setZero(m.k);
  h.setZero(m.k, m.k);
  for (int i = 0; i < m.k; ++i) {
    for (int j = i + 1; j < m.k; ++j) {
      const double n = m.wins(i, j) + m.wins(j, i);
      if (n == 0) continue;
      const double p = WinProbability(r[i], r[j]);
      const double gi = kScale * (n * p - m.wins(i, j)) / m.total;
      g[i] += gi;
      g[j] -= gi;
      const double c = kScale * kScale * n * p * (1 - p) / m.total;
      h(i, i) += c;
      h(j, j) += c;
      h(i, j) -= c;
      h(j, i) -= c;
    }
  }
}

struct GroupFit {
  Eigen::VectorXd scores;  // mean zero
  double gradient_norm = 0.0;
  int iterations = 0;
};

// Damped Newton on the cross-entropy of one group whose win graph is
// strongly connected, so the optimum is finite. The Hessian is singular
// along the all-ones direction (adding a constant changes nothing); a
// rank-one term fixes that gauge and keeps steps mean-free.
GroupFit FitGroup(const WinMatrix& m, const EloConfig& cfg, std::vector<double>* trace) {
  GroupFit fit;
  fit.scores = Eigen::VectorXd::Zero(m.k);
  if (m.k < 2) return fit;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  double f = Objective(m, fit.scores);
  if (trace) trace->push_back(f);
  for (; fit.iterations < cfg.max_iterations; ++fit.iterations) {
    GradientAndHessian(m, fit.scores, g, h);
    fit.gradient_norm = g.norm();
    if (fit.gradient_norm <= cfg.tolerance) break;
    const double gauge = h.trace() / (static_cast<double>(m.k) * m.k);
    h.array() += gauge;
    const Eigen::VectorXd d = -h.ldlt().solve(g);
    const double slope = g.dot(d);
    if (!(slope < 0)) break;
    double t = 1.0, f_new = f;
    Eigen::VectorXd r_new;
    for (; t > 1e-12; t *= 0.5) {
      r_new = fit.scores + t * d;
      f_new = Objective(m, r_new);
      if (f_new <= f + 1e-4 * t * slope) break;
    }
    if (t <= 1e-12 || !(f_new < f)) break;  // rounding floor reached
    fit.scores = r_new;
    f = f_new;
    if (trace) trace->push_back(f);
  }
  GradientAndHessian(m, fit.scores, g, h);
  fit.gradient_norm = g.norm();
  fit.scores.array() -= fit.scores.mean();
  return fit;
}

int Find(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

double WinProbability(double r_a, double r_b) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

int EloState::Index(const std::string& arm) const {
  const auto it = std::lower_bound(arms.begin(), arms.end(), arm);
  return it != arms.end() && *it == arm ? static_cast<int>(it - arms.begin()) : -1;
}

double EloState::Score(const std::string& arm) const {
  const int i = Index(arm);
  if (i < 0) throw ValueError("unknown arm " + arm);
  return scores[i];
}

int EloState::Count(const std::string& arm) const {
  const int i = Index(arm);
  return i < 0 ? 0 : counts[i];
}

EloState FitElo(const std::vector<RatingRecord>& ratings, const EloConfig& cfg,
                const std::vector<std::string>& extra_arms) {
  if (!(cfg.cap > 0) || !(cfg.tolerance > 0) || cfg.max_iterations < 1) {
    throw ValueError("invalid Elo configuration");
  }
  EloState st;
  std::set<std::string> arm_set(extra_arms.begin(), extra_arms.end());
  size_t rated = 0;
  for (const RatingRecord& r : ratings) {
    r.Validate();
    if (r.golden) {
      GoldenSummary& s = st.golden_by_rater[r.rater_id];
      ++s.total;
      if (!r.GoldenPassed()) ++s.failed;
      continue;
    }
    arm_set.insert(r.arm_a);
    arm_set.insert(r.arm_b);
    ++rated;
  }
  if (rated == 0) throw ValueError("no non-golden ratings to fit");
  st.arms.assign(arm_set.begin(), arm_set.end());
  const int n = static_cast<int>(st.arms.size());
  st.scores.assign(n, cfg.mean);
  st.counts.assign(n, 0);

  Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(n, n);
  for (const RatingRecord& r : ratings) {
    if (r.golden) continue;
    const int w = st.Index(r.chosen_arm()), l = st.Index(r.other_arm());
    wins(w, l) += 1;
    ++st.counts[w];
    ++st.counts[l];
  }

  // Connected components of the comparison graph.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (wins(i, j) > 0) parent[Find(parent, i)] = Find(parent, j);
    }
  }
  // Reachability in the win graph (winner -> loser).
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (int j = 0; j < n; ++j) reach[i][j] |= wins(i, j) > 0;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) reach[i][j] |= reach[k][j];
    }
  }

  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (Find(parent, i) == i) roots.push_back(i);
  }
  st.components = static_cast<int>(roots.size());
  if (st.components > 1) {
    st.warnings.push_back("comparison graph has " + std::to_string(st.components) +
                          " disconnected groups; each is anchored to mean " +
                          std::to_string(cfg.mean) + " separately");
  }

  for (int root : roots) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (Find(parent, i) == root) members.push_back(i);
    }
    // Strongly connected groups, each labelled by its first member.
    std::vector<int> scc(n, -1);
    std::vector<int> heads;
    for (int i : members) {
      if (scc[i] >= 0) continue;
      heads.push_back(i);
      for (int j : members) {
        if (reach[i][j] && reach[j][i]) scc[j] = i;
      }
    }
    std::vector<double> score(n, 0.0);
    for (int head : heads) {
      std::vector<int> idx;
      for (int i : members) {
        if (scc[i] == head) idx.push_back(i);
      }
      WinMatrix m;
      m.k = static_cast<int>(idx.size());
      m.wins.resize(m.k, m.k);
      for (int a = 0; a < m.k; ++a) {
        for (int b = 0; b < m.k; ++b) m.wins(a, b) = wins(idx[a], idx[b]);
      }
      m.total = m.wins.sum();
      if (m.total == 0) continue;
      const bool joint = heads.size() == 1 && roots.size() == 1;
      const GroupFit fit = FitGroup(m, cfg, joint ? &st.objective_trace : nullptr);
      for (int a = 0; a < m.k; ++a) score[idx[a]] = fit.scores[a];
      st.gradient_norm = std::max(st.gradient_norm, fit.gradient_norm);
      st.iterations += fit.iterations;
    }
    if (heads.size() > 1) {
      // Longest path from the top of the condensation, in cap steps.
      std::vector<int> level(n, 0);
      for (size_t pass = 0; pass < heads.size(); ++pass) {
        for (int i : members) {
          for (int j : members) {
            if (wins(i, j) > 0 && scc[i] != scc[j]) {
              level[scc[j]] = std::max(level[scc[j]], level[scc[i]] + 1);
            }
          }
        }
      }
      for (int i : members) score[i] -= cfg.cap * level[scc[i]];
      st.warnings.push_back(std::to_string(heads.size()) +
                            " groups of arms never lose to the groups below them; score gaps "
                            "between groups are clamped at " +
                            std::to_string(cfg.cap));
    }
    double mean = 0.0;
    for (int i : members) mean += score[i];
    mean /= static_cast<double>(members.size());
    for (int i : members) st.scores[i] = cfg.mean + score[i] - mean;
  }
  st.cross_entropy = CrossEntropy(ratings, st);
  return st;
}

double CrossEntropy(const std::vector<RatingRecord>& ratings, const EloState& state) {
  double s = 0.0;
  size_t n = 0;
  for (const RatingRecord& r : ratings) {
    if (r.golden) continue;
    s += Softplus(kScale * (state.Score(r.other_arm()) - state.Score(r.chosen_arm())));
    ++n;
  }
  if (n == 0) throw ValueError("no non-golden ratings");
  return s / static_cast<double>(n);
}

EloInterval BootstrapElo(const std::vector<RatingRecord>& ratings, const EloConfig& cfg,
                         int resamples, double level, uint64_t seed) {
  if (resamples < 1) throw ValueError("need at least one bootstrap resample");
  if (!(level > 0 && level < 1)) throw ValueError("interval level must be in (0, 1)");
  const EloState full = FitElo(ratings, cfg);
  std::vector<RatingRecord> pool;
  for (const RatingRecord& r : ratings) {
    if (!r.golden) pool.push_back(r);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  const size_t n = full.arms.size();
  std::vector<std::vector<double>> samples(n);
  std::vector<RatingRecord> draw(pool.size());
  for (int b = 0; b < resamples; ++b) {
    for (RatingRecord& r : draw) r = pool[pick(rng)];
    const EloState s = FitElo(draw, cfg, full.arms);
    for (size_t i = 0; i < n; ++i) samples[i].push_back(s.scores[i]);
  }
  auto quantile = [](std::vector<double>& v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  EloInterval out;
  out.arms = full.arms;
  for (size_t i = 0; i < n; ++i) {
    out.lo.push_back(quantile(samples[i], 0.5 * (1 - level)));
    out.hi.push_back(quantile(samples[i], 1 - 0.5 * (1 - level)));
  }
  return out;
}

}  // namespace wdc::eval

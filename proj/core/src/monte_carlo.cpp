// Copyright 2026 The Semistable Authors.
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

#include "semistable/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "semistable/ks.hpp"
#include "semistable/numeric.hpp"

namespace semistable::mc {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

// Runs fn(replicate_index) over [0, count) on a small pool. Replicates are
// independent and seeded by index, so the partition is irrelevant.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  threads = std::min<std::int64_t>(resolve_threads(threads), count);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ThinnedSampler::ThinnedSampler(const dist::SizePmf& f_w, double q)
    : family_(f_w.family()), r_(f_w.r()) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("thinned sampler requires q in (0,1)");
  }
  switch (family_) {
    case dist::Family::Geometric:
    case dist::Family::NegativeBinomial: {
      cq_ = dist::thinned_ratio(f_w.c(), q);
      zero_prob_ = (1.0 - q) * (1.0 - f_w.c()) / (1.0 - f_w.c() * (1.0 - q));
      break;
    }
    case dist::Family::Tabulated: {
      std::int64_t s_cap = f_w.support_max();
      auto thinned = dist::thin_pmf(f_w, q, s_cap);
      cum_.resize(thinned.atoms.size());
      double running = 0.0;
      for (std::size_t s = 0; s < thinned.atoms.size(); ++s) {
        running += thinned.atoms[s];
        cum_[s] = running;
      }
      break;
    }
  }
}

std::int64_t ThinnedSampler::sample(Rng& rng) const {
  switch (family_) {
    case dist::Family::Geometric: {
      if (rng.next_unit() < zero_prob_) return 0;
      return sample_geometric_ge1(rng, cq_);
    }
    case dist::Family::NegativeBinomial: {
      std::int64_t total = 0;
      // W_q is the independent sum of r thinned geometric components.
      for (int j = 0; j < r_; ++j) {
        if (rng.next_unit() < zero_prob_) continue;
        total += sample_geometric_ge1(rng, cq_);
      }
      return total;
    }
    case dist::Family::Tabulated: {
      double u = rng.next_unit();
      auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
      if (it == cum_.end()) return std::int64_t(cum_.size()) - 1;
      return std::int64_t(it - cum_.begin());
    }
  }
  return 0;
}

void McConfig::validate() const {
  if (replicates < 100) {
    throw std::invalid_argument("at least 100 replicates are required");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("q must lie in (0,1)");
  }
  if (w < 1) throw std::invalid_argument("w must be >= 1");
}

double McContext::comparison_cdf(double x, std::int64_t w) const {
  if (w % 2 == 0) return inverter.cdf(x - zeta);
  return 1.0 - inverter.cdf(-x - zeta);
}

namespace {

struct ReplicateStatistic {
  // Statistic of one replicate at sample size n_samples: scale * (f_hat -
  // center). run_level uses center = f_W(w) for alpha in (1,2) and 0 for
  // alpha in (0,1).
  static double compute(const ThinnedSampler& sampler, Rng& rng,
                        std::uint64_t n_samples, double q, std::int64_t w,
                        double scale, double center) {
    std::vector<std::uint64_t> hist(64, 0);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
      std::int64_t s = sampler.sample(rng);
      if (std::size_t(s) >= hist.size()) hist.resize(std::size_t(s) + 1, 0);
      ++hist[std::size_t(s)];
    }
    double f_hat = est::estimate_fw_from_histogram(hist, q, w, n_samples);
    return scale * (f_hat - center);
  }
};

}  // namespace

std::vector<double> run_level(const McConfig& config, const Schedule& schedule,
                              int n, est::Regime regime) {
  config.validate();
  if (regime != est::Regime::SemiStable01 &&
      regime != est::Regime::SemiStable12) {
    throw std::invalid_argument(
        "level replication requires a semi-stable regime");
  }
  const auto& level = schedule.at_n(n);
  double d_n = std::exp(std::log(double(level.k)) - level.log_a);
  double center = regime == est::Regime::SemiStable12
                      ? config.f_w.pmf(config.w)
                      : 0.0;
  ThinnedSampler sampler(config.f_w, config.q);
  std::vector<double> stats(std::size_t(config.replicates));
  parallel_for(config.replicates, config.threads, [&](std::int64_t rep) {
    Rng rng(derive_seed(config.master_seed,
                        {std::uint64_t(n), std::uint64_t(rep)}));
    stats[std::size_t(rep)] = ReplicateStatistic::compute(
        sampler, rng, level.k, config.q, config.w, d_n, center);
  });
  return stats;
}

double ks_compare(const std::vector<double>& stats, const McContext& ctx,
                  std::int64_t w) {
  return ks_statistic(stats,
                      [&](double x) { return ctx.comparison_cdf(x, w); });
}

double gaussian_regime_check(const dist::SizePmf& f_w, double q,
                             std::int64_t w, std::int64_t n_samples,
                             std::int64_t replicates, std::uint64_t seed,
                             int threads) {
  auto rqw = est::compute_rqw(f_w, q, w);
  if (!rqw.is_finite()) {
    throw std::invalid_argument(
        "Gaussian-regime check requires finite R_{q,w}");
  }
  double f_true = f_w.pmf(w);
  double asymptotic_var = rqw.value - f_true * f_true;
  ThinnedSampler sampler(f_w, q);
  double scale = std::sqrt(double(n_samples));
  std::vector<double> stats(std::size_t(replicates));
  parallel_for(replicates, threads, [&](std::int64_t rep) {
    Rng rng(derive_seed(seed, {0xfeedULL, std::uint64_t(rep)}));
    stats[std::size_t(rep)] = ReplicateStatistic::compute(
        sampler, rng, std::uint64_t(n_samples), q, w, scale, f_true);
  });
  double mean = 0.0;
  for (double s : stats) mean += s;
  mean /= double(replicates);
  double var = 0.0;
  for (double s : stats) var += (s - mean) * (s - mean);
  var /= double(replicates - 1);
  return var / asymptotic_var;
}

McReport run_experiment(const McConfig& config,
                        std::vector<std::vector<double>>* raw_stats) {
  config.validate();
  auto regime_report = est::classify_regime(config.f_w, config.q, config.w);
  if (regime_report.regime != est::Regime::SemiStable01 &&
      regime_report.regime != est::Regime::SemiStable12) {
    throw std::invalid_argument(
        "replicate experiments require a semi-stable regime");
  }
  auto taildec = dist::extract_tail_decomposition(config.f_w, config.q);
  int deepest = config.levels.empty()
                    ? 1
                    : *std::max_element(config.levels.begin(),
                                        config.levels.end());
  ScheduleOptions sched_opts;
  sched_opts.budget = config.budget;
  Schedule schedule = build_schedule(config.f_w, taildec, config.q, config.w,
                                     deepest + 1, sched_opts);

  law::SemiStableLaw law(taildec.nu, regime_report.beta, taildec.c1);
  law::CdfInverter::Options inv_opts;
  inv_opts.tol = config.comparison_tol;
  McContext ctx(law, inv_opts);

  McReport report;
  report.regime = est::regime_name(regime_report.regime);
  report.alpha = *regime_report.alpha;
  report.zeta = ctx.zeta;
  report.master_seed = config.master_seed;

  for (int n : config.levels) {
    bool available = false;
    for (const auto& l : schedule.levels) available |= (l.n == n);
    if (!available) {
      report.partial = true;
      continue;
    }
    auto stats = run_level(config, schedule, n, regime_report.regime);
    LevelReport lr;
    lr.n = n;
    lr.k = schedule.at_n(n).k;
    lr.ks = ks_compare(stats, ctx, config.w);
    std::vector<double> sorted(stats);
    std::sort(sorted.begin(), sorted.end());
    lr.stat_median = sorted[sorted.size() / 2];
    double mean = 0.0;
    for (double s : stats) mean += s;
    lr.stat_mean = mean / double(stats.size());
    lr.mc_standard_error = 1.0 / std::sqrt(double(stats.size()));
    report.levels.push_back(lr);
    if (raw_stats) raw_stats->push_back(std::move(stats));
  }

  if (!config.off_subsequence_ns.empty()) {
    report.probes = compactness_probe(config, schedule, ctx);
  }
  return report;
}

std::vector<ProbeRow> compactness_probe(const McConfig& config,
                                        const Schedule& schedule,
                                        const McContext& ctx,
                                        int lambda_grid) {
  if (config.off_subsequence_ns.empty()) {
    throw std::invalid_argument("no off-subsequence sample sizes given");
  }
  lambda_grid = std::max(lambda_grid, 2);
  double alpha = ctx.law.alpha();
  double period = ctx.law.period_c();

  // Quantile centering keeps the reference family at lambda powers of
  // (-1)^{-w} Y; the sign is applied to evaluation points.
  std::vector<double> lambdas(std::size_t(lambda_grid));
  std::vector<law::CdfInverter> inverters;
  inverters.reserve(lambdas.size());
  law::CdfInverter::Options inv_opts;
  inv_opts.tol = config.comparison_tol;
  for (int i = 0; i < lambda_grid; ++i) {
    double lam = 1.0 + (period - 1.0) * double(i) / double(lambda_grid - 1);
    lambdas[std::size_t(i)] = lam;
    inverters.emplace_back(law::lambda_power(ctx.law, lam), inv_opts);
  }
  auto family_cdf = [&](std::size_t i, double x) {
    if (config.w % 2 == 0) return inverters[i].cdf(x);
    return 1.0 - inverters[i].cdf(-x);
  };

  ThinnedSampler sampler(config.f_w, config.q);
  std::vector<ProbeRow> rows;
  for (std::uint64_t n_samples : config.off_subsequence_ns) {
    // p_N with k_{p_N} <= N < k_{p_N + 1}.
    const ScheduleLevel* p_level = nullptr;
    for (const auto& l : schedule.levels) {
      if (l.k <= n_samples) p_level = &l;
    }
    if (!p_level) {
      throw std::invalid_argument(
          "off-subsequence N below the first schedule level");
    }
    double lambda_n = double(n_samples) / double(p_level->k);
    double a_n = std::pow(lambda_n, 1.0 / alpha) * p_level->a;
    double b_n = std::pow(lambda_n, 1.0 - 1.0 / alpha) * p_level->b /
                 p_level->a;

    std::vector<double> stats(std::size_t(config.replicates));
    parallel_for(config.replicates, config.threads, [&](std::int64_t rep) {
      Rng rng(derive_seed(config.master_seed,
                          {0xabcdULL, n_samples, std::uint64_t(rep)}));
      std::vector<std::uint64_t> hist(64, 0);
      for (std::uint64_t i = 0; i < n_samples; ++i) {
        std::int64_t s = sampler.sample(rng);
        if (std::size_t(s) >= hist.size()) hist.resize(std::size_t(s) + 1, 0);
        ++hist[std::size_t(s)];
      }
      double f_hat = est::estimate_fw_from_histogram(hist, config.q, config.w,
                                                     n_samples);
      stats[std::size_t(rep)] =
          double(n_samples) * f_hat / a_n - b_n;
    });

    ProbeRow row;
    row.n_samples = n_samples;
    row.p_n = p_level->n;
    row.lambda = lambda_n;
    row.ks_best = 2.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      double d = ks_statistic(stats, [&](double x) { return family_cdf(i, x); });
      if (i == 0) row.ks_lambda1 = d;
      if (d < row.ks_best) {
        row.ks_best = d;
        row.lambda_best = lambdas[i];
      }
    }

    // Tail-envelope diagnostic at the empirical 90th percentile.
    std::vector<double> sorted(stats);
    std::sort(sorted.begin(), sorted.end());
    row.tail_x = sorted[std::size_t(0.9 * double(sorted.size()))];
    double emp = 0.0;
    for (double s : stats) emp += (s > row.tail_x) ? 1.0 : 0.0;
    emp /= double(stats.size());
    row.tail_empirical = emp;
    row.tail_mc_allowance =
        3.0 * std::sqrt(emp * (1.0 - emp) / double(stats.size()));
    double sup_tail = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      sup_tail = std::max(sup_tail, 1.0 - family_cdf(i, row.tail_x));
    }
    row.tail_sup_theoretical = sup_tail;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace semistable::mc

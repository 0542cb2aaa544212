#pragma once

// Monte Carlo crossing estimation.
//
// One sample opens each in-domain site independently with probability p
// (uniforms come from the counter-based mixer, keyed by site index) and asks
// for an open path from an open ax-site to an open bc-site. Samples are
// data-parallel over the sample index; counts are aggregated per chunk, so
// results are identical for every worker count.

#include <cstdint>
#include <thread>
#include <vector>

#include "cardylab/domain.hpp"
#include "cardylab/errors.hpp"
#include "cardylab/rng.hpp"
#include "cardylab/stats.hpp"

namespace cardylab {

struct SamplingPlan {
  double p = 0.5;
  std::uint64_t seed = 42;
  std::uint64_t n_samples = 1;
};

inline void validate(const SamplingPlan& plan) {
  if (!(plan.p >= 0.0 && plan.p <= 1.0)) {
    throw precondition_error("sampling plan: p must lie in [0, 1]");
  }
  if (plan.n_samples == 0) {
    throw precondition_error("sampling plan: sample count must be positive");
  }
}

struct CrossingEstimate {
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Reusable per-worker buffers.
struct CrossingScratch {
  std::vector<std::uint8_t> open;
  std::vector<std::uint8_t> visited;
  std::vector<std::int32_t> queue;
};

// One sample: breadth-first search over open sites from the open ax-sites,
// succeeding when it dequeues a bc-site. Both path endpoints are open by
// construction (only open sites enter the queue).
inline bool sample_crossing(const SiteClassification& cls, double p, SampleKey key,
                            CrossingScratch& scratch) {
  const auto n = static_cast<std::int32_t>(cls.sites.size());
  scratch.open.resize(static_cast<std::size_t>(n));
  scratch.visited.assign(static_cast<std::size_t>(n), 0);
  scratch.queue.clear();
  for (std::int32_t v = 0; v < n; ++v) {
    scratch.open[v] = site_uniform(key, cls.sites[v]) < p ? 1 : 0;
  }
  for (const std::int32_t v : cls.arc_sites[static_cast<int>(Arc::ax)]) {
    if (scratch.open[v]) {
      scratch.visited[v] = 1;
      scratch.queue.push_back(v);
    }
  }
  constexpr auto bc = static_cast<std::int8_t>(Arc::bc);
  for (std::size_t head = 0; head < scratch.queue.size(); ++head) {
    const std::int32_t v = scratch.queue[head];
    if (cls.label[v] == bc) return true;
    for (std::int32_t e = cls.adj_offsets[v]; e < cls.adj_offsets[v + 1]; ++e) {
      const std::int32_t u = cls.adj[e];
      if (scratch.open[u] && !scratch.visited[u]) {
        scratch.visited[u] = 1;
        scratch.queue.push_back(u);
      }
    }
  }
  return false;
}

inline bool sample_crossing(const SiteClassification& cls, double p, std::uint64_t seed,
                            std::uint64_t sample_idx) {
  CrossingScratch scratch;
  return sample_crossing(cls, p, sample_key(seed, sample_idx), scratch);
}

namespace detail {

inline std::uint64_t count_crossings(const SiteClassification& cls, double p,
                                     std::uint64_t seed, std::uint64_t begin,
                                     std::uint64_t end, std::uint8_t* indicators) {
  CrossingScratch scratch;
  std::uint64_t successes = 0;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const bool hit = sample_crossing(cls, p, sample_key(seed, idx), scratch);
    successes += hit ? 1 : 0;
    if (indicators) indicators[idx] = hit ? 1 : 0;
  }
  return successes;
}

}  // namespace detail

// Runs the plan and wraps the success count in a Wilson 95% interval.
// The optional indicators buffer (length n_samples) records each sample.
// threads <= 0 selects hardware concurrency; the result is byte-for-byte
// independent of the worker count because per-chunk counts are summed in
// chunk order and each indicator lands at its own sample index.
inline CrossingEstimate estimate(const SiteClassification& cls, const SamplingPlan& plan,
                                 int threads = 1, std::uint8_t* indicators = nullptr) {
  validate(plan);
  const std::uint64_t n = plan.n_samples;
  auto workers = static_cast<std::uint64_t>(
      threads <= 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads);
  workers = std::min<std::uint64_t>(std::min<std::uint64_t>(workers, 64), n);

  std::vector<std::uint64_t> counts(workers, 0);
  const std::uint64_t chunk = (n + workers - 1) / workers;
  if (workers == 1) {
    counts[0] = detail::count_crossings(cls, plan.p, plan.seed, 0, n, indicators);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(n, lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        counts[w] = detail::count_crossings(cls, plan.p, plan.seed, lo, hi, indicators);
      });
    }
    for (auto& t : pool) t.join();
  }

  CrossingEstimate est;
  est.n = n;
  for (const std::uint64_t c : counts) est.successes += c;
  est.p_hat = static_cast<double>(est.successes) / static_cast<double>(n);
  const Interval ci = wilson_interval(est.successes, n);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

struct CoupledResult {
  CrossingEstimate a, b;
  std::vector<std::uint8_t> indicators_a, indicators_b;
  std::uint64_t agreement = 0;  // samples with equal indicators
};

// Runs the same plan on two classifications that must agree site-for-site
// (index sets, adjacency, labels). Shared site indices mean shared uniforms,
// so agreement per sample is exact whenever the structures truly coincide.
inline CoupledResult coupled_estimate(const SiteClassification& cls_a,
                                      const SiteClassification& cls_b,
                                      const SamplingPlan& plan, int threads = 1) {
  if (const std::string mismatch = compare_structure(cls_a, cls_b); !mismatch.empty()) {
    throw precondition_error("coupled_estimate: " + mismatch);
  }
  validate(plan);
  CoupledResult r;
  r.indicators_a.resize(plan.n_samples);
  r.indicators_b.resize(plan.n_samples);
  r.a = estimate(cls_a, plan, threads, r.indicators_a.data());
  r.b = estimate(cls_b, plan, threads, r.indicators_b.data());
  for (std::uint64_t s = 0; s < plan.n_samples; ++s) {
    r.agreement += r.indicators_a[s] == r.indicators_b[s] ? 1 : 0;
  }
  return r;
}

}  // namespace cardylab

#include "mrgan/geometry_score.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "mrgan/error.hpp"
#include "mrgan/landmarks.hpp"
#include "mrgan/witness.hpp"

namespace mrgan {

MrltProfile mrlt(const PersistenceIntervals& intervals, std::size_t i_max) {
  require(i_max >= 1, "mrlt needs at least one bin");
  MrltProfile out;
  out.values.assign(i_max, 0.0);
  const double a = intervals.alpha_max;
  if (a <= 0.0) {
    out.values[0] = 1.0;  // zero-length filtration: no holes ever
    return out;
  }

  // sweep the alive-count over the half-open lifetimes [birth, death)
  std::vector<std::pair<double, int>> events;
  events.reserve(intervals.intervals.size() * 2);
  for (const PersistenceInterval& iv : intervals.intervals) {
    require(iv.birth >= 0.0 && iv.birth <= iv.death && iv.death <= a,
            "interval outside [0, alpha_max]");
    if (iv.death > iv.birth) {
      events.push_back({iv.birth, +1});
      events.push_back({iv.death, -1});
    }
  }
  std::sort(events.begin(), events.end());

  double prev = 0.0;
  std::size_t alive = 0;
  std::size_t e = 0;
  while (e < events.size()) {
    const double t = events[e].first;
    if (t > prev) {
      out.values[std::min(alive, i_max - 1)] += (t - prev) / a;
      prev = t;
    }
    while (e < events.size() && events[e].first == t) {
      if (events[e].second > 0)
        ++alive;
      else
        --alive;
      ++e;
    }
  }
  if (prev < a) out.values[std::min(alive, i_max - 1)] += (a - prev) / a;
  return out;
}

namespace {

MrltProfile repeat_profile(const Dataset& data, const GsParams& p,
                           std::size_t repeat) {
  Rng rng = Rng(p.seed).split(repeat + 1);
  std::vector<std::size_t> lm =
      select_landmarks_maxmin(data.samples, p.landmarks, rng);

  double max_sq = 0.0;
  const std::size_t d = data.dim();
  for (std::size_t i = 0; i < lm.size(); ++i)
    for (std::size_t j = i + 1; j < lm.size(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff =
            data.samples.at(lm[i], c) - data.samples.at(lm[j], c);
        s += diff * diff;
      }
      max_sq = std::max(max_sq, s);
    }
  const double alpha_max = p.gamma * std::sqrt(max_sq);

  WitnessComplex cx =
      witness_filtration(data.samples, lm, alpha_max, p.steps);
  PersistenceIntervals iv = persistence_h1(cx);
  return mrlt(iv, p.i_max);
}

}  // namespace

MrltProfile dataset_mrlt_mean(const Dataset& data, const GsParams& p) {
  require(data.size() >= 1, "geometry score needs a non-empty dataset");
  require(p.repeats >= 1, "geometry score needs repeats >= 1");
  require(p.gamma > 0.0, "gamma must be positive");

  // repeats are independent; run them on a small pool and reduce in repeat
  // order so the average is deterministic regardless of scheduling
  std::vector<MrltProfile> per_repeat(p.repeats);
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            p.repeats);
  if (workers <= 1) {
    for (std::size_t r = 0; r < p.repeats; ++r)
      per_repeat[r] = repeat_profile(data, p, r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        while (true) {
          const std::size_t r = next.fetch_add(1);
          if (r >= p.repeats) return;
          per_repeat[r] = repeat_profile(data, p, r);
        }
      });
    for (std::thread& t : pool) t.join();
  }

  MrltProfile mean;
  mean.values.assign(p.i_max, 0.0);
  for (std::size_t r = 0; r < p.repeats; ++r)
    for (std::size_t i = 0; i < p.i_max; ++i)
      mean.values[i] += per_repeat[r].values[i];
  for (double& v : mean.values) v /= static_cast<double>(p.repeats);
  return mean;
}

GsReport geometry_score_report(const Dataset& real, const Dataset& gen,
                               const GsParams& p) {
  require(real.dim() == gen.dim(),
          "geometry score needs datasets of equal dimension");
  GsReport rep;
  rep.params = p;
  rep.mrlt_real = dataset_mrlt_mean(real, p);
  rep.mrlt_gen = dataset_mrlt_mean(gen, p);
  double gs = 0.0;
  for (std::size_t i = 0; i < p.i_max; ++i) {
    const double diff = rep.mrlt_real.values[i] - rep.mrlt_gen.values[i];
    gs += diff * diff;
  }
  rep.gs = gs;
  return rep;
}

double geometry_score(const Dataset& real, const Dataset& gen,
                      const GsParams& p) {
  return geometry_score_report(real, gen, p).gs;
}

std::string gs_report_json(const GsReport& report) {
  nlohmann::json j;
  j["gs"] = report.gs;
  j["repeats"] = report.params.repeats;
  j["landmarks"] = report.params.landmarks;
  j["gamma"] = report.params.gamma;
  j["i_max"] = report.params.i_max;
  j["mrlt_real"] = report.mrlt_real.values;
  j["mrlt_gen"] = report.mrlt_gen.values;
  return j.dump(2);
}

}  // namespace mrgan

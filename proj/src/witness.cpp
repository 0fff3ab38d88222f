#include "mrgan/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mrgan/error.hpp"

namespace mrgan {

namespace {

// A witness can only place a simplex at time <= alpha_max when all of the
// simplex's vertices lie within d_k(w) + alpha_max of w, so each witness
// proposes candidate simplices from its few nearest landmarks only.
struct WitnessView {
  std::vector<double> dist;        // distance to every landmark
  std::vector<std::size_t> order;  // landmark ids sorted by (distance, id)
};

std::size_t edge_key(std::size_t a, std::size_t b, std::size_t L) {
  return a * L + b;
}

std::size_t tri_key(std::size_t a, std::size_t b, std::size_t c,
                    std::size_t L) {
  return (a * L + b) * L + c;
}

void propose(std::unordered_map<std::size_t, double>& times, std::size_t key,
             double t) {
  auto it = times.find(key);
  if (it == times.end())
    times.emplace(key, t);
  else if (t < it->second)
    it->second = t;
}

double snap_up(double t, double alpha_max, std::size_t steps) {
  if (t <= 0.0) return 0.0;
  const double step = alpha_max / static_cast<double>(steps);
  const double s = std::ceil(t / step - 1e-12);
  // the top grid level is alpha_max itself, never steps * step, which can
  // overshoot alpha_max by one ulp
  if (s >= static_cast<double>(steps)) return alpha_max;
  return s * step;
}

}  // namespace

WitnessComplex witness_filtration(const Tensor& points,
                                  const std::vector<std::size_t>& landmarks,
                                  double alpha_max, std::size_t steps) {
  require(points.rank() == 2, "witness filtration expects a {n, d} matrix");
  require(steps >= 1, "witness filtration needs steps >= 1");
  require(alpha_max >= 0.0, "alpha_max must be non-negative");
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  const std::size_t L = landmarks.size();
  require(L >= 1, "witness filtration needs at least one landmark");
  for (std::size_t l : landmarks)
    require(l < n, "landmark index out of range");

  // collapse to a single vertex when every landmark shares one position
  bool all_same = true;
  for (std::size_t i = 1; i < L && all_same; ++i)
    for (std::size_t c = 0; c < d; ++c)
      if (points.at(landmarks[i], c) != points.at(landmarks[0], c)) {
        all_same = false;
        break;
      }
  WitnessComplex out;
  out.alpha_max = alpha_max;
  if (all_same || L == 1) {
    out.vertex_count = 1;
    return out;
  }
  out.vertex_count = L;

  std::unordered_map<std::size_t, double> edge_times;
  std::unordered_map<std::size_t, double> tri_times;

  WitnessView view;
  view.dist.resize(L);
  view.order.resize(L);
  std::vector<std::size_t> cand;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t l = 0; l < L; ++l) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = points.at(w, c) - points.at(landmarks[l], c);
        s += diff * diff;
      }
      view.dist[l] = std::sqrt(s);
      view.order[l] = l;
    }
    std::sort(view.order.begin(), view.order.end(),
              [&view](std::size_t a, std::size_t b) {
                if (view.dist[a] != view.dist[b])
                  return view.dist[a] < view.dist[b];
                return a < b;
              });

    // edges: vertices must lie within d_2(w) + alpha_max
    const double r2 = view.dist[view.order[1]] + alpha_max;
    cand.clear();
    for (std::size_t l : view.order) {
      if (view.dist[l] > r2) break;
      cand.push_back(l);
    }
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t j = i + 1; j < cand.size(); ++j) {
        std::size_t a = cand[i], b = cand[j];
        if (a > b) std::swap(a, b);
        const double far = std::max(view.dist[a], view.dist[b]);
        const double t = std::max(0.0, far - view.dist[view.order[1]]);
        if (t <= alpha_max) propose(edge_times, edge_key(a, b, L), t);
      }

    // triangles: vertices must lie within d_3(w) + alpha_max
    if (L >= 3) {
      const double r3 = view.dist[view.order[2]] + alpha_max;
      cand.clear();
      for (std::size_t l : view.order) {
        if (view.dist[l] > r3) break;
        cand.push_back(l);
      }
      std::sort(cand.begin(), cand.end());
      for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j)
          for (std::size_t k = j + 1; k < cand.size(); ++k) {
            const std::size_t a = cand[i], b = cand[j], c = cand[k];
            const double far = std::max({view.dist[a], view.dist[b],
                                         view.dist[c]});
            const double t =
                std::max(0.0, far - view.dist[view.order[2]]);
            if (t <= alpha_max) propose(tri_times, tri_key(a, b, c, L), t);
          }
    }
  }

  // snap edge times up onto the grid
  for (auto& [key, t] : edge_times) t = snap_up(t, alpha_max, steps);

  for (const auto& [key, t] : edge_times) {
    Simplex s;
    s.dim = 1;
    s.v = {key / L, key % L, 0};
    s.time = t;
    out.simplices.push_back(s);
  }

  // triangles snap too, then are pulled up to their slowest edge; a missing
  // edge means the triangle never legally appears and is dropped
  for (const auto& [key, raw] : tri_times) {
    const std::size_t a = key / (L * L);
    const std::size_t b = (key / L) % L;
    const std::size_t c = key % L;
    double t = snap_up(raw, alpha_max, steps);
    bool ok = true;
    for (const auto& [ea, eb] : {std::pair{a, b}, std::pair{a, c},
                                 std::pair{b, c}}) {
      auto it = edge_times.find(edge_key(ea, eb, L));
      if (it == edge_times.end()) {
        ok = false;
        break;
      }
      t = std::max(t, it->second);
    }
    if (!ok || t > alpha_max) continue;
    Simplex s;
    s.dim = 2;
    s.v = {a, b, c};
    s.time = t;
    out.simplices.push_back(s);
  }

  std::sort(out.simplices.begin(), out.simplices.end(),
            [](const Simplex& x, const Simplex& y) {
              if (x.time != y.time) return x.time < y.time;
              if (x.dim != y.dim) return x.dim < y.dim;
              return x.v < y.v;
            });
  return out;
}

}  // namespace mrgan

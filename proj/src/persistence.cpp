#include "mrgan/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "mrgan/error.hpp"

namespace mrgan {

namespace {

// symmetric difference of two ascending index lists (Z/2 column addition)
std::vector<std::uint32_t> xor_columns(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      out.push_back(a[i++]);
    else if (b[j] < a[i])
      out.push_back(b[j++]);
    else {
      ++i;
      ++j;
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return out;
}

}  // namespace

PersistenceIntervals persistence_h1(const WitnessComplex& complex) {
  const std::size_t nv = complex.vertex_count;
  require(nv >= 1, "complex needs at least one vertex");

  // global filtration order: vertices first (all at time 0), then the
  // already-sorted edges and triangles
  const std::size_t ns = complex.simplices.size();
  std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> edge_index;
  for (std::size_t s = 0; s < ns; ++s) {
    const Simplex& sx = complex.simplices[s];
    if (s > 0) {
      const Simplex& prev = complex.simplices[s - 1];
      const bool ordered =
          prev.time < sx.time ||
          (prev.time == sx.time &&
           (prev.dim < sx.dim || (prev.dim == sx.dim && prev.v <= sx.v)));
      require(ordered, "complex simplices must be sorted by (time, dim, v)");
    }
    require(sx.dim == 1 || sx.dim == 2, "complex may only hold edges and "
                                        "triangles beyond its vertices");
    require(sx.time >= 0.0 && sx.time <= complex.alpha_max,
            "simplex time outside [0, alpha_max]");
    if (sx.dim == 1) {
      require(sx.v[0] < sx.v[1] && sx.v[1] < nv, "bad edge vertex ids");
      edge_index[{sx.v[0], sx.v[1]}] = static_cast<std::uint32_t>(nv + s);
    } else {
      require(sx.v[0] < sx.v[1] && sx.v[1] < sx.v[2] && sx.v[2] < nv,
              "bad triangle vertex ids");
    }
  }

  const std::size_t total = nv + ns;
  std::vector<std::vector<std::uint32_t>> column(total);
  for (std::size_t s = 0; s < ns; ++s) {
    const Simplex& sx = complex.simplices[s];
    std::vector<std::uint32_t>& col = column[nv + s];
    if (sx.dim == 1) {
      col = {static_cast<std::uint32_t>(sx.v[0]),
             static_cast<std::uint32_t>(sx.v[1])};
    } else {
      auto at = [&](std::size_t a, std::size_t b) {
        auto it = edge_index.find({a, b});
        require(it != edge_index.end(),
                "triangle references an edge missing from the filtration");
        require(complex.simplices[it->second - nv].time <= sx.time,
                "triangle appears before one of its edges");
        return it->second;
      };
      col = {at(sx.v[0], sx.v[1]), at(sx.v[0], sx.v[2]),
             at(sx.v[1], sx.v[2])};
      std::sort(col.begin(), col.end());
    }
  }

  // standard left-to-right reduction; pivot = largest index in the column
  const std::uint32_t kNone = 0xffffffffu;
  std::vector<std::uint32_t> owner_of_pivot(total, kNone);
  std::vector<bool> killed(total, false);
  PersistenceIntervals out;
  out.alpha_max = complex.alpha_max;

  for (std::size_t j = 0; j < total; ++j) {
    std::vector<std::uint32_t>& col = column[j];
    while (!col.empty() && owner_of_pivot[col.back()] != kNone)
      col = xor_columns(col, column[owner_of_pivot[col.back()]]);
    if (col.empty()) continue;
    const std::uint32_t piv = col.back();
    owner_of_pivot[piv] = static_cast<std::uint32_t>(j);
    killed[piv] = true;
    if (j >= nv && complex.simplices[j - nv].dim == 2) {
      // the pivot is an edge whose cycle this triangle fills
      const Simplex& birth_s = complex.simplices[piv - nv];
      const Simplex& death_s = complex.simplices[j - nv];
      out.intervals.push_back({birth_s.time, death_s.time});
    }
  }

  // edges that created a cycle nothing ever filled survive to alpha_max
  for (std::size_t s = 0; s < ns; ++s) {
    const std::size_t j = nv + s;
    if (complex.simplices[s].dim == 1 && column[j].empty() && !killed[j])
      out.intervals.push_back({complex.simplices[s].time, complex.alpha_max});
  }

  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const PersistenceInterval& a, const PersistenceInterval& b) {
              if (a.birth != b.birth) return a.birth < b.birth;
              return a.death < b.death;
            });
  return out;
}

}  // namespace mrgan

#include "mrgan/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mrgan/error.hpp"

namespace mrgan {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<std::size_t> strided_rows(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (n <= cap) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }
  idx.resize(cap);
  for (std::size_t i = 0; i < cap; ++i) idx[i] = i * n / cap;
  return idx;
}

/// Dominant eigenvector of the symmetric matrix c ({d, d}); deterministic
/// start along the largest diagonal entry. Returns a unit vector, or a zero
/// vector when c has no energy left (then the caller falls back to a
/// coordinate axis).
std::vector<double> dominant_direction(const std::vector<double>& c, std::size_t d) {
  std::size_t start = 0;
  for (std::size_t i = 1; i < d; ++i)
    if (c[i * d + i] > c[start * d + start]) start = i;
  if (!(c[start * d + start] > 0.0)) return std::vector<double>(d, 0.0);

  std::vector<double> v(d, 0.0), w(d, 0.0);
  v[start] = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += c[i * d + j] * v[j];
      w[i] = s;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) return std::vector<double>(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
  }
  return v;
}

}  // namespace

Tensor scatter_projection(const Tensor& real, std::size_t max_rows) {
  require(real.rank() == 2 && real.shape[0] >= 1, "scatter needs a {n, d} sample matrix");
  const std::size_t d = real.shape[1];
  Tensor basis = Tensor::zeros({d, 2});
  if (d <= 2) {
    basis.at(0, 0) = 1.0;
    if (d == 2) basis.at(1, 1) = 1.0;
    return basis;
  }

  const std::vector<std::size_t> rows = strided_rows(real.shape[0], max_rows);
  const std::size_t n = rows.size();
  std::vector<double> mean(d, 0.0);
  for (std::size_t r : rows)
    for (std::size_t j = 0; j < d; ++j) mean[j] += real.at(r, j);
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> cov(d * d, 0.0);
  for (std::size_t r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = real.at(r, i) - mean[i];
      for (std::size_t j = i; j < d; ++j)
        cov[i * d + j] += xi * (real.at(r, j) - mean[j]);
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= static_cast<double>(n);
      cov[j * d + i] = cov[i * d + j];
    }

  for (std::size_t axis = 0; axis < 2; ++axis) {
    std::vector<double> v = dominant_direction(cov, d);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (!(norm > 0.0)) {
      // Degenerate cloud: fall back to the first unused coordinate axis.
      v.assign(d, 0.0);
      v[axis] = 1.0;
    }
    for (std::size_t i = 0; i < d; ++i) basis.at(i, axis) = v[i];

    // Deflate: remove the captured component lambda * v v^T.
    double lambda = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += cov[i * d + j] * v[j];
      lambda += v[i] * s;
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) cov[i * d + j] -= lambda * v[i] * v[j];
  }
  return basis;
}

std::string scatter_svg(const Tensor& real, const Tensor& generated,
                        const ScatterOptions& options) {
  require(real.rank() == 2 && generated.rank() == 2, "scatter needs {n, d} sample matrices");
  require(real.shape[1] == generated.shape[1],
          "real and generated samples must share a dimension");
  require(options.width >= 100 && options.height >= 100, "scatter canvas too small");
  require(options.max_points >= 1, "scatter needs max_points >= 1");

  const Tensor basis = scatter_projection(real, options.max_points);
  const std::size_t d = real.shape[1];
  auto project = [&](const Tensor& cloud) {
    std::vector<std::array<double, 2>> pts;
    for (std::size_t r : strided_rows(cloud.shape[0], options.max_points)) {
      std::array<double, 2> p{0.0, 0.0};
      for (std::size_t j = 0; j < d; ++j) {
        p[0] += cloud.at(r, j) * basis.at(j, 0);
        p[1] += cloud.at(r, j) * basis.at(j, 1);
      }
      pts.push_back(p);
    }
    return pts;
  };
  const auto real_pts = project(real);
  const auto gen_pts = project(generated);

  double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
  bool first = true;
  for (const auto* cloud : {&real_pts, &gen_pts}) {
    for (const auto& p : *cloud) {
      if (first) {
        lo_x = hi_x = p[0];
        lo_y = hi_y = p[1];
        first = false;
      }
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
      hi_y = std::max(hi_y, p[1]);
    }
  }
  require(!first, "scatter needs at least one point");
  require(std::isfinite(lo_x) && std::isfinite(hi_x) && std::isfinite(lo_y) &&
              std::isfinite(hi_y),
          "scatter rejects non-finite samples");
  const double pad_x = (hi_x - lo_x) > 0.0 ? 0.05 * (hi_x - lo_x) : 1.0;
  const double pad_y = (hi_y - lo_y) > 0.0 ? 0.05 * (hi_y - lo_y) : 1.0;
  lo_x -= pad_x;
  hi_x += pad_x;
  lo_y -= pad_y;
  hi_y += pad_y;

  const double w = static_cast<double>(options.width);
  const double h = static_cast<double>(options.height);
  const double margin = 40.0;
  auto px = [&](double x) { return margin + (x - lo_x) / (hi_x - lo_x) * (w - 2 * margin); };
  auto py = [&](double y) { return h - margin - (y - lo_y) / (hi_y - lo_y) * (h - 2 * margin); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << options.width << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
      << options.width << " " << options.height << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\""
      << options.height << "\" fill=\"white\"/>\n"
      << "  <rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\""
      << fmt(w - 2 * margin) << "\" height=\"" << fmt(h - 2 * margin)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  if (lo_x < 0.0 && hi_x > 0.0)
    out << "  <line x1=\"" << fmt(px(0.0)) << "\" y1=\"" << fmt(margin) << "\" x2=\""
        << fmt(px(0.0)) << "\" y2=\"" << fmt(h - margin)
        << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  if (lo_y < 0.0 && hi_y > 0.0)
    out << "  <line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(py(0.0)) << "\" x2=\""
        << fmt(w - margin) << "\" y2=\"" << fmt(py(0.0))
        << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

  // Axis range labels along the frame corners.
  out << "  <text x=\"" << fmt(margin) << "\" y=\"" << fmt(h - margin + 16)
      << "\" font-size=\"11\" fill=\"#444444\">" << fmt(lo_x + pad_x) << "</text>\n"
      << "  <text x=\"" << fmt(w - margin - 30) << "\" y=\"" << fmt(h - margin + 16)
      << "\" font-size=\"11\" fill=\"#444444\">" << fmt(hi_x - pad_x) << "</text>\n"
      << "  <text x=\"" << fmt(margin - 36) << "\" y=\"" << fmt(h - margin)
      << "\" font-size=\"11\" fill=\"#444444\">" << fmt(lo_y + pad_y) << "</text>\n"
      << "  <text x=\"" << fmt(margin - 36) << "\" y=\"" << fmt(margin + 10)
      << "\" font-size=\"11\" fill=\"#444444\">" << fmt(hi_y - pad_y) << "</text>\n";

  auto draw = [&](const std::vector<std::array<double, 2>>& pts, const std::string& color) {
    for (const auto& p : pts)
      out << "  <circle cx=\"" << fmt(px(p[0])) << "\" cy=\"" << fmt(py(p[1]))
          << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
  };
  draw(real_pts, options.real_color);
  draw(gen_pts, options.generated_color);

  const double lx = w - margin - 120;
  out << "  <circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(margin + 12)
      << "\" r=\"4\" fill=\"" << options.real_color << "\"/>\n"
      << "  <text x=\"" << fmt(lx + 10) << "\" y=\"" << fmt(margin + 16)
      << "\" font-size=\"12\" fill=\"#222222\">real</text>\n"
      << "  <circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(margin + 30)
      << "\" r=\"4\" fill=\"" << options.generated_color << "\"/>\n"
      << "  <text x=\"" << fmt(lx + 10) << "\" y=\"" << fmt(margin + 34)
      << "\" font-size=\"12\" fill=\"#222222\">generated</text>\n"
      << "</svg>\n";
  return out.str();
}

void write_scatter_svg(const Tensor& real, const Tensor& generated,
                       const std::string& path, const ScatterOptions& options) {
  std::ofstream out(path);
  require(out.good(), "cannot write svg file: " + path);
  out << scatter_svg(real, generated, options);
  require(out.good(), "failed writing svg file: " + path);
}

}  // namespace mrgan

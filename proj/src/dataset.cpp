#include "mrgan/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mrgan/error.hpp"

namespace mrgan {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_basis(const MixtureSpec& spec) {
  require(spec.basis1.size() == 3 && spec.basis2.size() == 3 &&
              spec.offset.size() == 3,
          "hyperplane embedding needs two basis vectors and an offset in R^3");
  double n1 = 0.0, n2 = 0.0, dot = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    n1 += spec.basis1.data[c] * spec.basis1.data[c];
    n2 += spec.basis2.data[c] * spec.basis2.data[c];
    dot += spec.basis1.data[c] * spec.basis2.data[c];
  }
  require(std::fabs(n1 - 1.0) <= 1e-10 && std::fabs(n2 - 1.0) <= 1e-10 &&
              std::fabs(dot) <= 1e-10,
          "hyperplane basis must be orthonormal within 1e-10");
}

}  // namespace

MixtureSpec MixtureSpec::ring8() { return MixtureSpec(); }

MixtureSpec MixtureSpec::ring8_hyperplane(std::uint64_t seed) {
  MixtureSpec spec;
  spec.embed_hyperplane = true;
  Rng rng(seed);
  Tensor b1({3}), b2({3});
  for (double& v : b1.data) v = rng.normal();
  for (double& v : b2.data) v = rng.normal();
  double n1 = 0.0;
  for (double v : b1.data) n1 += v * v;
  n1 = std::sqrt(n1);
  for (double& v : b1.data) v /= n1;
  double dot = 0.0;
  for (std::size_t c = 0; c < 3; ++c) dot += b1.data[c] * b2.data[c];
  for (std::size_t c = 0; c < 3; ++c) b2.data[c] -= dot * b1.data[c];
  double n2 = 0.0;
  for (double v : b2.data) n2 += v * v;
  n2 = std::sqrt(n2);
  for (double& v : b2.data) v /= n2;
  spec.basis1 = b1;
  spec.basis2 = b2;
  spec.offset = Tensor({3});
  spec.offset.data = {0.0, 0.0, 1.0};
  return spec;
}

Tensor mode_centers(const MixtureSpec& spec) {
  require(spec.modes >= 1, "mixture needs at least one mode");
  const std::size_t d = spec.dim();
  if (spec.embed_hyperplane) check_basis(spec);
  Tensor centers({spec.modes, d});
  for (std::size_t k = 0; k < spec.modes; ++k) {
    const double angle = 2.0 * kPi * static_cast<double>(k) /
                         static_cast<double>(spec.modes);
    const double u1 = spec.radius * std::cos(angle);
    const double u2 = spec.radius * std::sin(angle);
    if (spec.embed_hyperplane) {
      for (std::size_t c = 0; c < 3; ++c)
        centers.at(k, c) = spec.offset.data[c] + u1 * spec.basis1.data[c] +
                           u2 * spec.basis2.data[c];
    } else {
      centers.at(k, 0) = u1;
      centers.at(k, 1) = u2;
    }
  }
  return centers;
}

Dataset sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng) {
  require(spec.modes >= 1, "mixture needs at least one mode");
  require(spec.sigma > 0.0, "mixture sigma must be positive");
  if (spec.embed_hyperplane) check_basis(spec);
  const std::size_t d = spec.dim();

  Dataset out;
  out.samples = Tensor({n, d});
  out.provenance = "mixture";
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.uniform_index(spec.modes);
    const double angle = 2.0 * kPi * static_cast<double>(k) /
                         static_cast<double>(spec.modes);
    const double u1 = spec.radius * std::cos(angle) + spec.sigma * rng.normal();
    const double u2 = spec.radius * std::sin(angle) + spec.sigma * rng.normal();
    if (spec.embed_hyperplane) {
      for (std::size_t c = 0; c < 3; ++c)
        out.samples.at(i, c) = spec.offset.data[c] + u1 * spec.basis1.data[c] +
                               u2 * spec.basis2.data[c];
    } else {
      out.samples.at(i, 0) = u1;
      out.samples.at(i, 1) = u2;
    }
  }
  return out;
}

namespace {

std::uint32_t read_u32_be(const std::vector<unsigned char>& bytes,
                          std::size_t offset, const std::string& path) {
  require(offset + 4 <= bytes.size(),
          path + ": truncated at byte " + std::to_string(bytes.size()) +
              " while reading a 32-bit field at offset " +
              std::to_string(offset));
  return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
         (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[offset + 3]);
}

}  // namespace

Dataset load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open IDX file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  const std::uint32_t magic = read_u32_be(bytes, 0, path);
  if (magic == 0x00000801u)
    fail(path + ": label-file magic 0x00000801 at byte 0; expected image magic 0x00000803");
  require(magic == 0x00000803u,
          path + ": bad magic at byte 0 (got 0x" + [&] {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%08x", magic);
            return std::string(buf);
          }() + ", want 0x00000803)");

  const std::uint32_t n = read_u32_be(bytes, 4, path);
  const std::uint32_t rows = read_u32_be(bytes, 8, path);
  const std::uint32_t cols = read_u32_be(bytes, 12, path);
  const std::size_t d = static_cast<std::size_t>(rows) * cols;
  const std::size_t expected = 16 + static_cast<std::size_t>(n) * d;
  require(bytes.size() >= expected,
          path + ": truncated payload, file ends at byte " +
              std::to_string(bytes.size()) + " but needs " +
              std::to_string(expected));

  Dataset out;
  out.samples = Tensor({n, d});
  out.provenance = "idx:" + path;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * d; ++i)
    out.samples.data[i] = -1.0 + 2.0 * bytes[16 + i] / 255.0;
  return out;
}

Dataset load_csv(const std::string& path, std::size_t d, bool header) {
  require(d >= 1, "load_csv: dimension must be at least 1");
  std::ifstream in(path);
  require(in.good(), "cannot open CSV file: " + path);

  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t samples = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::size_t fields = 0;
    while (std::getline(ss, field, ',')) {
      ++fields;
      require(fields <= d, path + ": line " + std::to_string(line_no) +
                               " has more than " + std::to_string(d) +
                               " fields");
      std::size_t consumed = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &consumed);
      } catch (const std::exception&) {
        fail(path + ": line " + std::to_string(line_no) +
             ": non-numeric field '" + field + "'");
      }
      while (consumed < field.size() &&
             (field[consumed] == ' ' || field[consumed] == '\r'))
        ++consumed;
      require(consumed == field.size(),
              path + ": line " + std::to_string(line_no) +
                  ": non-numeric field '" + field + "'");
      values.push_back(v);
    }
    require(fields == d, path + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(fields) + " fields, expected " +
                             std::to_string(d));
    ++samples;
  }

  Dataset out;
  out.samples = Tensor({samples, d});
  out.samples.data = std::move(values);
  out.provenance = "csv:" + path;
  return out;
}

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open CSV file for writing: " + path);
  const std::size_t n = dataset.size(), d = dataset.dim();
  char buf[40];
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    for (std::size_t c = 0; c < d; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", dataset.samples.at(i, c));
      if (c) line += ",";
      line += buf;
    }
    out << line << "\n";
  }
  require(out.good(), "failed writing CSV: " + path);
}

}  // namespace mrgan

#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "mrgan/error.hpp"

namespace mrgan {

// Dense row-major tensor of doubles. Rank 1 and rank 2 cover everything the
// library needs; scalars are represented as shape {1}.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;

  explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    data.assign(count(shape), 0.0);
  }

  static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

  static Tensor full(std::vector<std::size_t> s, double value) {
    Tensor t(std::move(s));
    for (double& x : t.data) x = value;
    return t;
  }

  static Tensor scalar(double value) { return full({1}, value); }

  static Tensor matrix(std::size_t r, std::size_t c) { return Tensor({r, c}); }

  static std::size_t count(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }

  std::size_t rows() const {
    require(rank() == 2, "rows(): tensor is not rank 2");
    return shape[0];
  }

  std::size_t cols() const {
    require(rank() == 2, "cols(): tensor is not rank 2");
    return shape[1];
  }

  double& at(std::size_t i) { return data[i]; }
  double at(std::size_t i) const { return data[i]; }

  double& at(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  bool all_finite() const {
    for (double x : data)
      if (!std::isfinite(x)) return false;
    return true;
  }

  std::string shape_str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape[i]);
    }
    return s + "}";
  }
};

}  // namespace mrgan

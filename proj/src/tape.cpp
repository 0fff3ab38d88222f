#include "mrgan/tape.hpp"

#include <cmath>

#include "mrgan/error.hpp"

namespace mrgan {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kConstant: return "constant";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kAddRowVec: return "add_row_vec";
    case OpKind::kAddColVec: return "add_col_vec";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kRelu: return "relu";
    case OpKind::kLog: return "log";
    case OpKind::kExp: return "exp";
    case OpKind::kSquare: return "square";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
  }
  return "unknown";
}

namespace {

// out += A @ B
void accum_matmul_nn(const Tensor& a, const Tensor& b, Tensor& out) {
  const std::size_t n = a.shape[0], k = a.shape[1], m = b.shape[1];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a.data[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = &b.data[p * m];
      double* orow = &out.data[i * m];
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
}

// out += A @ B^T
void accum_matmul_nt(const Tensor& a, const Tensor& b, Tensor& out) {
  const std::size_t n = a.shape[0], k = a.shape[1], m = b.shape[0];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double* arow = &a.data[i * k];
      const double* brow = &b.data[j * k];
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      out.data[i * m + j] += acc;
    }
  }
}

// out += A^T @ B
void accum_matmul_tn(const Tensor& a, const Tensor& b, Tensor& out) {
  const std::size_t n = a.shape[1], k = a.shape[0], m = b.shape[1];
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = &a.data[p * n];
    const double* brow = &b.data[p * m];
    for (std::size_t i = 0; i < n; ++i) {
      const double api = arow[i];
      if (api == 0.0) continue;
      double* orow = &out.data[i * m];
      for (std::size_t j = 0; j < m; ++j) orow[j] += api * brow[j];
    }
  }
}

bool is_row_compatible(const Tensor& row, std::size_t cols) {
  if (row.rank() == 1) return row.shape[0] == cols;
  return row.rank() == 2 && row.shape[0] == 1 && row.shape[1] == cols;
}

bool is_col_compatible(const Tensor& col, std::size_t rows) {
  if (col.rank() == 1) return col.shape[0] == rows;
  return col.rank() == 2 && col.shape[1] == 1 && col.shape[0] == rows;
}

}  // namespace

void Tape::node_fail(std::size_t i, const std::string& msg) const {
  fail("tape node " + std::to_string(i) + " (" + op_name(nodes_[i].kind) +
       "): " + msg);
}

Var Tape::push(Node node) {
  const std::size_t i = nodes_.size();
  nodes_.push_back(std::move(node));
  compute(i);
  check_result(i);
  return Var{i};
}

Var Tape::input(const std::string& name, Tensor value) {
  require(!name.empty(), "tape input name must be nonempty");
  require(inputs_by_name_.find(name) == inputs_by_name_.end(),
          "tape input '" + name + "' already exists");
  Node n;
  n.kind = OpKind::kInput;
  n.value = std::move(value);
  n.name = name;
  inputs_by_name_[name] = nodes_.size();
  return push(std::move(n));
}

Var Tape::constant(Tensor value) {
  Node n;
  n.kind = OpKind::kConstant;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::constant(double value) { return constant(Tensor::scalar(value)); }

Var Tape::matmul(Var a, Var b) {
  Node n;
  n.kind = OpKind::kMatMul;
  n.a = a.index;
  n.b = b.index;
  n.arity = 2;
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  Node n;
  n.kind = OpKind::kAdd;
  n.a = a.index;
  n.b = b.index;
  n.arity = 2;
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  Node n;
  n.kind = OpKind::kSub;
  n.a = a.index;
  n.b = b.index;
  n.arity = 2;
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  Node n;
  n.kind = OpKind::kMul;
  n.a = a.index;
  n.b = b.index;
  n.arity = 2;
  return push(std::move(n));
}

Var Tape::add_row_vec(Var a, Var row) {
  Node n;
  n.kind = OpKind::kAddRowVec;
  n.a = a.index;
  n.b = row.index;
  n.arity = 2;
  return push(std::move(n));
}

Var Tape::add_col_vec(Var a, Var col) {
  Node n;
  n.kind = OpKind::kAddColVec;
  n.a = a.index;
  n.b = col.index;
  n.arity = 2;
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n;
  n.kind = OpKind::kTanh;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.kind = OpKind::kSigmoid;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  Node n;
  n.kind = OpKind::kRelu;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::log(Var a) {
  Node n;
  n.kind = OpKind::kLog;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::exp(Var a) {
  Node n;
  n.kind = OpKind::kExp;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::square(Var a) {
  Node n;
  n.kind = OpKind::kSquare;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n;
  n.kind = OpKind::kSum;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::mean(Var a) {
  Node n;
  n.kind = OpKind::kMean;
  n.a = a.index;
  n.arity = 1;
  return push(std::move(n));
}

Var Tape::add_scalar(Var a, double c) {
  const Tensor& av = value(a);
  return add(a, constant(Tensor::full(av.shape, c)));
}

Var Tape::mul_scalar(Var a, double c) {
  const Tensor& av = value(a);
  return mul(a, constant(Tensor::full(av.shape, c)));
}

const Tensor& Tape::value(Var v) const { return nodes_[v.index].value; }
const Tensor& Tape::adjoint(Var v) const { return nodes_[v.index].adjoint; }

double Tape::scalar_value(Var v) const {
  const Tensor& t = nodes_[v.index].value;
  require(t.size() == 1, "scalar_value: node value has size " +
                             std::to_string(t.size()));
  return t.data[0];
}

void Tape::rebind(const std::string& name, Tensor value) {
  auto it = inputs_by_name_.find(name);
  require(it != inputs_by_name_.end(), "rebind: no input named '" + name + "'");
  Node& n = nodes_[it->second];
  if (n.value.shape != value.shape) {
    node_fail(it->second, "rebind shape mismatch: input '" + name + "' is " +
                              n.value.shape_str() + ", got " +
                              value.shape_str());
  }
  n.value = std::move(value);
  check_result(it->second);
}

void Tape::replay() {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == OpKind::kInput || nodes_[i].kind == OpKind::kConstant)
      continue;
    compute(i);
    check_result(i);
  }
}

void Tape::compute(std::size_t i) {
  Node& n = nodes_[i];
  switch (n.kind) {
    case OpKind::kInput:
    case OpKind::kConstant:
      return;
    case OpKind::kMatMul: {
      const Tensor& a = nodes_[n.a].value;
      const Tensor& b = nodes_[n.b].value;
      if (a.rank() != 2 || b.rank() != 2)
        node_fail(i, "matmul needs rank-2 operands, got " + a.shape_str() +
                         " and " + b.shape_str());
      if (a.shape[1] != b.shape[0])
        node_fail(i, "inner dimensions disagree: " + a.shape_str() + " @ " +
                         b.shape_str());
      n.value = Tensor::zeros({a.shape[0], b.shape[1]});
      accum_matmul_nn(a, b, n.value);
      return;
    }
    case OpKind::kAdd:
    case OpKind::kSub:
    case OpKind::kMul: {
      const Tensor& a = nodes_[n.a].value;
      const Tensor& b = nodes_[n.b].value;
      if (!a.same_shape(b))
        node_fail(i, "shape mismatch: " + a.shape_str() + " vs " +
                         b.shape_str());
      n.value = Tensor::zeros(a.shape);
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (n.kind == OpKind::kAdd)
          n.value.data[j] = a.data[j] + b.data[j];
        else if (n.kind == OpKind::kSub)
          n.value.data[j] = a.data[j] - b.data[j];
        else
          n.value.data[j] = a.data[j] * b.data[j];
      }
      return;
    }
    case OpKind::kAddRowVec: {
      const Tensor& a = nodes_[n.a].value;
      const Tensor& row = nodes_[n.b].value;
      if (a.rank() != 2)
        node_fail(i, "left operand must be rank 2, got " + a.shape_str());
      if (!is_row_compatible(row, a.shape[1]))
        node_fail(i, "row vector " + row.shape_str() +
                         " does not match matrix " + a.shape_str());
      n.value = a;
      const std::size_t cols = a.shape[1];
      for (std::size_t r = 0; r < a.shape[0]; ++r)
        for (std::size_t c = 0; c < cols; ++c)
          n.value.data[r * cols + c] += row.data[c];
      return;
    }
    case OpKind::kAddColVec: {
      const Tensor& a = nodes_[n.a].value;
      const Tensor& col = nodes_[n.b].value;
      if (a.rank() != 2)
        node_fail(i, "left operand must be rank 2, got " + a.shape_str());
      if (!is_col_compatible(col, a.shape[0]))
        node_fail(i, "column vector " + col.shape_str() +
                         " does not match matrix " + a.shape_str());
      n.value = a;
      const std::size_t cols = a.shape[1];
      for (std::size_t r = 0; r < a.shape[0]; ++r)
        for (std::size_t c = 0; c < cols; ++c)
          n.value.data[r * cols + c] += col.data[r];
      return;
    }
    case OpKind::kTanh:
    case OpKind::kSigmoid:
    case OpKind::kRelu:
    case OpKind::kLog:
    case OpKind::kExp:
    case OpKind::kSquare: {
      const Tensor& a = nodes_[n.a].value;
      n.value = Tensor::zeros(a.shape);
      for (std::size_t j = 0; j < a.size(); ++j) {
        const double x = a.data[j];
        double y = 0.0;
        switch (n.kind) {
          case OpKind::kTanh: y = std::tanh(x); break;
          case OpKind::kSigmoid: y = 1.0 / (1.0 + std::exp(-x)); break;
          case OpKind::kRelu: y = x > 0.0 ? x : 0.0; break;
          case OpKind::kLog: y = std::log(x); break;
          case OpKind::kExp: y = std::exp(x); break;
          case OpKind::kSquare: y = x * x; break;
          default: break;
        }
        n.value.data[j] = y;
      }
      return;
    }
    case OpKind::kSum:
    case OpKind::kMean: {
      const Tensor& a = nodes_[n.a].value;
      double acc = 0.0;
      for (double x : a.data) acc += x;
      if (n.kind == OpKind::kMean) acc /= static_cast<double>(a.size());
      n.value = Tensor::scalar(acc);
      return;
    }
  }
}

void Tape::check_result(std::size_t i) {
  if (!nodes_[i].value.all_finite())
    node_fail(i, "produced a non-finite value");
}

void Tape::backward(Var root) {
  require(root.index < nodes_.size(), "backward: root index out of range");
  {
    const Tensor& rv = nodes_[root.index].value;
    if (rv.size() != 1)
      node_fail(root.index,
                "backward root must be scalar, got " + rv.shape_str());
  }
  for (Node& n : nodes_) n.adjoint = Tensor::zeros(n.value.shape);
  nodes_[root.index].adjoint.data[0] = 1.0;

  std::size_t visits = 0;
  for (std::size_t idx = root.index + 1; idx-- > 0;) {
    ++visits;
    Node& n = nodes_[idx];
    const Tensor& g = n.adjoint;
    switch (n.kind) {
      case OpKind::kInput:
      case OpKind::kConstant:
        break;
      case OpKind::kMatMul: {
        accum_matmul_nt(g, nodes_[n.b].value, nodes_[n.a].adjoint);
        accum_matmul_tn(nodes_[n.a].value, g, nodes_[n.b].adjoint);
        break;
      }
      case OpKind::kAdd: {
        Tensor& da = nodes_[n.a].adjoint;
        Tensor& db = nodes_[n.b].adjoint;
        for (std::size_t j = 0; j < g.size(); ++j) {
          da.data[j] += g.data[j];
          db.data[j] += g.data[j];
        }
        break;
      }
      case OpKind::kSub: {
        Tensor& da = nodes_[n.a].adjoint;
        Tensor& db = nodes_[n.b].adjoint;
        for (std::size_t j = 0; j < g.size(); ++j) {
          da.data[j] += g.data[j];
          db.data[j] -= g.data[j];
        }
        break;
      }
      case OpKind::kMul: {
        Tensor& da = nodes_[n.a].adjoint;
        Tensor& db = nodes_[n.b].adjoint;
        const Tensor& av = nodes_[n.a].value;
        const Tensor& bv = nodes_[n.b].value;
        for (std::size_t j = 0; j < g.size(); ++j) {
          da.data[j] += g.data[j] * bv.data[j];
          db.data[j] += g.data[j] * av.data[j];
        }
        break;
      }
      case OpKind::kAddRowVec: {
        Tensor& da = nodes_[n.a].adjoint;
        Tensor& drow = nodes_[n.b].adjoint;
        const std::size_t cols = n.value.shape[1];
        for (std::size_t j = 0; j < g.size(); ++j) da.data[j] += g.data[j];
        for (std::size_t r = 0; r < n.value.shape[0]; ++r)
          for (std::size_t c = 0; c < cols; ++c)
            drow.data[c] += g.data[r * cols + c];
        break;
      }
      case OpKind::kAddColVec: {
        Tensor& da = nodes_[n.a].adjoint;
        Tensor& dcol = nodes_[n.b].adjoint;
        const std::size_t cols = n.value.shape[1];
        for (std::size_t j = 0; j < g.size(); ++j) da.data[j] += g.data[j];
        for (std::size_t r = 0; r < n.value.shape[0]; ++r)
          for (std::size_t c = 0; c < cols; ++c)
            dcol.data[r] += g.data[r * cols + c];
        break;
      }
      case OpKind::kTanh: {
        Tensor& da = nodes_[n.a].adjoint;
        for (std::size_t j = 0; j < g.size(); ++j) {
          const double t = n.value.data[j];
          da.data[j] += g.data[j] * (1.0 - t * t);
        }
        break;
      }
      case OpKind::kSigmoid: {
        Tensor& da = nodes_[n.a].adjoint;
        for (std::size_t j = 0; j < g.size(); ++j) {
          const double s = n.value.data[j];
          da.data[j] += g.data[j] * s * (1.0 - s);
        }
        break;
      }
      case OpKind::kRelu: {
        Tensor& da = nodes_[n.a].adjoint;
        const Tensor& av = nodes_[n.a].value;
        for (std::size_t j = 0; j < g.size(); ++j)
          if (av.data[j] > 0.0) da.data[j] += g.data[j];
        break;
      }
      case OpKind::kLog: {
        Tensor& da = nodes_[n.a].adjoint;
        const Tensor& av = nodes_[n.a].value;
        for (std::size_t j = 0; j < g.size(); ++j)
          da.data[j] += g.data[j] / av.data[j];
        break;
      }
      case OpKind::kExp: {
        Tensor& da = nodes_[n.a].adjoint;
        for (std::size_t j = 0; j < g.size(); ++j)
          da.data[j] += g.data[j] * n.value.data[j];
        break;
      }
      case OpKind::kSquare: {
        Tensor& da = nodes_[n.a].adjoint;
        const Tensor& av = nodes_[n.a].value;
        for (std::size_t j = 0; j < g.size(); ++j)
          da.data[j] += g.data[j] * 2.0 * av.data[j];
        break;
      }
      case OpKind::kSum: {
        Tensor& da = nodes_[n.a].adjoint;
        const double gs = g.data[0];
        for (std::size_t j = 0; j < da.size(); ++j) da.data[j] += gs;
        break;
      }
      case OpKind::kMean: {
        Tensor& da = nodes_[n.a].adjoint;
        const double gs = g.data[0] / static_cast<double>(da.size());
        for (std::size_t j = 0; j < da.size(); ++j) da.data[j] += gs;
        break;
      }
    }
  }
  last_backward_visits_ = visits;
}

}  // namespace mrgan

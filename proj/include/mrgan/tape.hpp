#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrgan/tensor.hpp"

namespace mrgan {

enum class OpKind {
  kInput,
  kConstant,
  kMatMul,
  kAdd,
  kSub,
  kMul,
  kAddRowVec,
  kAddColVec,
  kTanh,
  kSigmoid,
  kRelu,
  kLog,
  kExp,
  kSquare,
  kSum,
  kMean,
};

const char* op_name(OpKind kind);

/// Handle to a node on a Tape.
struct Var {
  std::size_t index = 0;
};

// Reverse-mode autodiff over a flat operation record. Forward values are
// computed eagerly as nodes are appended; backward() runs one reverse sweep
// that visits each node exactly once. Every operation validates shapes and
// rejects non-finite results, reporting the offending node.
class Tape {
 public:
  struct Node {
    OpKind kind;
    std::size_t a = 0;    // first input node, if any
    std::size_t b = 0;    // second input node, if any
    std::size_t arity = 0;
    Tensor value;
    Tensor adjoint;
    std::string name;     // nonempty only for named inputs
  };

  /// Named differentiable input; the name can be rebound later.
  Var input(const std::string& name, Tensor value);

  /// Value the tape treats as fixed: no gradient flows into it.
  Var constant(Tensor value);
  Var constant(double value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  /// C[i,j] = A[i,j] + row[j]; row is shape {1, cols} or {cols}.
  Var add_row_vec(Var a, Var row);
  /// C[i,j] = A[i,j] + col[i]; col is shape {rows, 1} or {rows}.
  Var add_col_vec(Var a, Var col);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var log(Var a);
  Var exp(Var a);
  Var square(Var a);
  Var sum(Var a);
  Var mean(Var a);

  // Affine sugar; lowers onto constant/add/mul nodes.
  Var add_scalar(Var a, double c);
  Var mul_scalar(Var a, double c);

  const Tensor& value(Var v) const;
  const Tensor& adjoint(Var v) const;
  double scalar_value(Var v) const;

  /// Replaces the tensor bound to a named input. Shape must match.
  void rebind(const std::string& name, Tensor value);

  /// Recomputes every node's forward value in record order.
  void replay();

  /// Seeds root's adjoint with 1 and propagates backward. Root must be a
  /// scalar (shape {1}). Clears previous adjoints.
  void backward(Var root);

  std::size_t node_count() const { return nodes_.size(); }
  /// Number of node visits performed by the last backward() call.
  std::size_t last_backward_visits() const { return last_backward_visits_; }

  const Node& node(std::size_t i) const { return nodes_[i]; }

 private:
  Var push(Node node);
  void compute(std::size_t i);
  void check_result(std::size_t i);
  [[noreturn]] void node_fail(std::size_t i, const std::string& msg) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> inputs_by_name_;
  std::size_t last_backward_visits_ = 0;
};

}  // namespace mrgan

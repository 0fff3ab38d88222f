#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrgan/rng.hpp"
#include "mrgan/tape.hpp"
#include "mrgan/tensor.hpp"

namespace mrgan {

enum class Activation { kIdentity, kTanh, kSigmoid, kRelu };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Tape handles for one network's parameters, in layer order.
struct TapeParams {
  std::vector<Var> weights;
  std::vector<Var> biases;
};

// Fully connected network. Layer l maps width[l] -> width[l+1] through
// weight {in, out} and bias {out}; hidden layers share one activation and the
// last layer uses the output activation.
class MlpNetwork {
 public:
  MlpNetwork() = default;

  /// Weights and biases drawn uniformly from [-s, s], s = 1/sqrt(fan_in).
  static MlpNetwork create(const std::vector<std::size_t>& widths,
                           Activation hidden, Activation output, Rng& rng);

  std::size_t in_dim() const;
  std::size_t out_dim() const;
  std::size_t layer_count() const { return weights_.size(); }
  const std::vector<std::size_t>& widths() const { return widths_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  /// Batched forward: x is {n, in_dim}, result {n, out_dim}.
  Tensor forward(const Tensor& x) const;

  /// Registers every parameter as a named tape input "<prefix>.W<l>"/".b<l>".
  TapeParams bind(Tape& tape, const std::string& prefix) const;

  /// Forward through previously bound parameters; callable repeatedly to
  /// share one parameter set across several passes.
  Var forward_tape(Tape& tape, const TapeParams& params, Var x) const;

  /// Forward with parameters baked in as constants (no gradient into them).
  Var forward_tape_frozen(Tape& tape, Var x) const;

  std::size_t param_count() const;
  std::vector<double> flat_params() const;
  void set_flat_params(const std::vector<double>& p);
  /// Adjoints of bound parameters, flattened in flat_params order.
  std::vector<double> read_flat_grads(const Tape& tape,
                                      const TapeParams& params) const;

  /// Clamps every weight and bias into [-c, c].
  void clip_weights(double c);

  const std::vector<Tensor>& weight_tensors() const { return weights_; }
  const std::vector<Tensor>& bias_tensors() const { return biases_; }

  nlohmann::json to_json() const;
  static MlpNetwork from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static MlpNetwork load(const std::string& path);

 private:
  Var apply_activation(Tape& tape, Var v, Activation a) const;

  std::vector<std::size_t> widths_;
  Activation hidden_ = Activation::kTanh;
  Activation output_ = Activation::kIdentity;
  std::vector<Tensor> weights_;
  std::vector<Tensor> biases_;
};

/// G_u applied to a batch of latent codes {n, l}.
Tensor generator_forward(const MlpNetwork& gen, const Tensor& h);

/// D_v applied to a batch of samples {n, d}; requires sigmoid output.
Tensor discriminator_forward(const MlpNetwork& disc, const Tensor& x);

/// Radial projection onto the unit ball: p if |p| <= 1, else p/|p|.
Tensor project_unit_ball(const Tensor& params);

/// Applies project_unit_ball to the network's full flattened parameter vector.
void project_params_unit_ball(MlpNetwork& net);

}  // namespace mrgan

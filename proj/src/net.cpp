#include "mrgan/net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mrgan/error.hpp"

namespace mrgan {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kRelu: return "relu";
  }
  return "unknown";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "relu") return Activation::kRelu;
  fail("unknown activation '" + name + "'");
}

MlpNetwork MlpNetwork::create(const std::vector<std::size_t>& widths,
                              Activation hidden, Activation output, Rng& rng) {
  require(widths.size() >= 2, "network needs at least input and output widths");
  for (std::size_t w : widths) require(w >= 1, "layer width must be >= 1");
  MlpNetwork net;
  net.widths_ = widths;
  net.hidden_ = hidden;
  net.output_ = output;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t in = widths[l], out = widths[l + 1];
    const double s = 1.0 / std::sqrt(static_cast<double>(in));
    Tensor w({in, out});
    for (double& v : w.data) v = rng.uniform(-s, s);
    Tensor b({out});
    for (double& v : b.data) v = rng.uniform(-s, s);
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(std::move(b));
  }
  return net;
}

std::size_t MlpNetwork::in_dim() const {
  require(!widths_.empty(), "network is empty");
  return widths_.front();
}

std::size_t MlpNetwork::out_dim() const {
  require(!widths_.empty(), "network is empty");
  return widths_.back();
}

namespace {

double apply_scalar_activation(double x, Activation a) {
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
  }
  return x;
}

}  // namespace

Tensor MlpNetwork::forward(const Tensor& x) const {
  require(x.rank() == 2, "forward: input must be rank 2");
  require(x.shape[1] == in_dim(),
          "forward: input width " + std::to_string(x.shape[1]) +
              " does not match network input " + std::to_string(in_dim()));
  Tensor h = x;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const Tensor& w = weights_[l];
    const Tensor& b = biases_[l];
    const std::size_t n = h.shape[0], in = w.shape[0], out = w.shape[1];
    // same accumulation order as the tape's matmul-then-bias nodes, so the
    // two paths agree bit for bit
    Tensor z({n, out});
    for (std::size_t i = 0; i < n; ++i) {
      double* zrow = &z.data[i * out];
      const double* hrow = &h.data[i * in];
      for (std::size_t p = 0; p < in; ++p) {
        const double hv = hrow[p];
        if (hv == 0.0) continue;
        const double* wrow = &w.data[p * out];
        for (std::size_t j = 0; j < out; ++j) zrow[j] += hv * wrow[j];
      }
      for (std::size_t j = 0; j < out; ++j) zrow[j] += b.data[j];
    }
    const Activation act = (l + 1 == layer_count()) ? output_ : hidden_;
    for (double& v : z.data) v = apply_scalar_activation(v, act);
    h = std::move(z);
  }
  return h;
}

TapeParams MlpNetwork::bind(Tape& tape, const std::string& prefix) const {
  TapeParams params;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    params.weights.push_back(
        tape.input(prefix + ".W" + std::to_string(l), weights_[l]));
    params.biases.push_back(
        tape.input(prefix + ".b" + std::to_string(l), biases_[l]));
  }
  return params;
}

Var MlpNetwork::apply_activation(Tape& tape, Var v, Activation a) const {
  switch (a) {
    case Activation::kIdentity: return v;
    case Activation::kTanh: return tape.tanh(v);
    case Activation::kSigmoid: return tape.sigmoid(v);
    case Activation::kRelu: return tape.relu(v);
  }
  return v;
}

Var MlpNetwork::forward_tape(Tape& tape, const TapeParams& params, Var x) const {
  require(params.weights.size() == layer_count(),
          "forward_tape: parameter binding does not match network depth");
  require(tape.value(x).rank() == 2 && tape.value(x).shape[1] == in_dim(),
          "forward_tape: input width does not match network input");
  Var h = x;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    Var z = tape.add_row_vec(tape.matmul(h, params.weights[l]), params.biases[l]);
    h = apply_activation(tape, z, (l + 1 == layer_count()) ? output_ : hidden_);
  }
  return h;
}

Var MlpNetwork::forward_tape_frozen(Tape& tape, Var x) const {
  require(tape.value(x).rank() == 2 && tape.value(x).shape[1] == in_dim(),
          "forward_tape_frozen: input width does not match network input");
  Var h = x;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    Var w = tape.constant(weights_[l]);
    Var b = tape.constant(biases_[l]);
    Var z = tape.add_row_vec(tape.matmul(h, w), b);
    h = apply_activation(tape, z, (l + 1 == layer_count()) ? output_ : hidden_);
  }
  return h;
}

std::size_t MlpNetwork::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layer_count(); ++l)
    n += weights_[l].size() + biases_[l].size();
  return n;
}

std::vector<double> MlpNetwork::flat_params() const {
  std::vector<double> p;
  p.reserve(param_count());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    p.insert(p.end(), weights_[l].data.begin(), weights_[l].data.end());
    p.insert(p.end(), biases_[l].data.begin(), biases_[l].data.end());
  }
  return p;
}

void MlpNetwork::set_flat_params(const std::vector<double>& p) {
  require(p.size() == param_count(), "set_flat_params: length mismatch");
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    std::copy(p.begin() + off, p.begin() + off + weights_[l].size(),
              weights_[l].data.begin());
    off += weights_[l].size();
    std::copy(p.begin() + off, p.begin() + off + biases_[l].size(),
              biases_[l].data.begin());
    off += biases_[l].size();
  }
}

std::vector<double> MlpNetwork::read_flat_grads(const Tape& tape,
                                                const TapeParams& params) const {
  std::vector<double> g;
  g.reserve(param_count());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const Tensor& gw = tape.adjoint(params.weights[l]);
    g.insert(g.end(), gw.data.begin(), gw.data.end());
    const Tensor& gb = tape.adjoint(params.biases[l]);
    g.insert(g.end(), gb.data.begin(), gb.data.end());
  }
  return g;
}

void MlpNetwork::clip_weights(double c) {
  require(c > 0.0, "clip_weights: bound must be positive");
  auto clamp = [c](Tensor& t) {
    for (double& v : t.data) v = std::clamp(v, -c, c);
  };
  for (Tensor& w : weights_) clamp(w);
  for (Tensor& b : biases_) clamp(b);
}

nlohmann::json MlpNetwork::to_json() const {
  nlohmann::json j;
  j["format"] = "mrgan-net";
  j["version"] = 1;
  j["widths"] = widths_;
  j["hidden"] = activation_name(hidden_);
  j["output"] = activation_name(output_);
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < layer_count(); ++l) {
    nlohmann::json layer;
    layer["W"] = weights_[l].data;
    layer["b"] = biases_[l].data;
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  return j;
}

MlpNetwork MlpNetwork::from_json(const nlohmann::json& j) {
  require(j.value("format", "") == "mrgan-net", "checkpoint: unknown format tag");
  require(j.value("version", 0) == 1, "checkpoint: unsupported version");
  MlpNetwork net;
  net.widths_ = j.at("widths").get<std::vector<std::size_t>>();
  require(net.widths_.size() >= 2, "checkpoint: bad widths");
  net.hidden_ = activation_from_name(j.at("hidden").get<std::string>());
  net.output_ = activation_from_name(j.at("output").get<std::string>());
  const auto& layers = j.at("layers");
  require(layers.size() + 1 == net.widths_.size(), "checkpoint: layer count mismatch");
  for (std::size_t l = 0; l + 1 < net.widths_.size(); ++l) {
    Tensor w({net.widths_[l], net.widths_[l + 1]});
    Tensor b({net.widths_[l + 1]});
    const auto wv = layers.at(l).at("W").get<std::vector<double>>();
    const auto bv = layers.at(l).at("b").get<std::vector<double>>();
    require(wv.size() == w.size() && bv.size() == b.size(),
            "checkpoint: tensor size mismatch at layer " + std::to_string(l));
    w.data = wv;
    b.data = bv;
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(std::move(b));
  }
  return net;
}

void MlpNetwork::save(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), "cannot open checkpoint file for writing: " + path);
  out << to_json().dump(2) << "\n";
  require(out.good(), "failed writing checkpoint: " + path);
}

MlpNetwork MlpNetwork::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open checkpoint file: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

Tensor generator_forward(const MlpNetwork& gen, const Tensor& h) {
  require(h.rank() == 2 && h.shape[1] == gen.in_dim(),
          "generator_forward: latent width does not match generator input");
  return gen.forward(h);
}

Tensor discriminator_forward(const MlpNetwork& disc, const Tensor& x) {
  require(disc.output_activation() == Activation::kSigmoid,
          "discriminator_forward: output activation must be sigmoid");
  require(disc.out_dim() == 1, "discriminator_forward: output width must be 1");
  require(x.rank() == 2 && x.shape[1] == disc.in_dim(),
          "discriminator_forward: sample width does not match discriminator input");
  return disc.forward(x);
}

Tensor project_unit_ball(const Tensor& params) {
  double norm_sq = 0.0;
  for (double v : params.data) norm_sq += v * v;
  if (norm_sq <= 1.0) return params;
  const double inv = 1.0 / std::sqrt(norm_sq);
  Tensor out = params;
  for (double& v : out.data) v *= inv;
  return out;
}

void project_params_unit_ball(MlpNetwork& net) {
  Tensor p({net.param_count()});
  p.data = net.flat_params();
  net.set_flat_params(project_unit_ball(p).data);
}

}  // namespace mrgan

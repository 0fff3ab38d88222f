#include "mrgan/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mrgan/error.hpp"

namespace mrgan {
namespace {

using nlohmann::json;

[[noreturn]] void field_fail(const std::string& path, const std::string& msg) {
  fail("config field " + path + ": " + msg);
}

// One JSON object section: typed reads with defaults, dotted-path error
// messages, and rejection of keys nothing consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) field_fail(path_, "expected an object");
  }

  ~Section() = default;

  std::string sub_path(const char* key) const { return path_ + "." + key; }

  const json* find(const char* key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const char* key, double def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number()) field_fail(sub_path(key), "expected a number");
    return v->get<double>();
  }

  std::size_t index(const char* key, std::size_t def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number_unsigned()) field_fail(sub_path(key), "expected a non-negative integer");
    return v->get<std::size_t>();
  }

  std::uint64_t u64(const char* key, std::uint64_t def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number_unsigned()) field_fail(sub_path(key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const char* key, bool def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_boolean()) field_fail(sub_path(key), "expected a boolean");
    return v->get<bool>();
  }

  std::string text(const char* key, const std::string& def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_string()) field_fail(sub_path(key), "expected a string");
    return v->get<std::string>();
  }

  std::string choice(const char* key, const std::string& def,
                     const std::set<std::string>& allowed) {
    const std::string value = text(key, def);
    if (allowed.count(value) == 0) {
      std::string opts;
      for (const std::string& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
      field_fail(sub_path(key), "must be one of {" + opts + "}, got \"" + value + "\"");
    }
    return value;
  }

  std::vector<std::size_t> index_list(const char* key,
                                      const std::vector<std::size_t>& def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_array()) field_fail(sub_path(key), "expected an array of integers");
    std::vector<std::size_t> out;
    for (const json& e : *v) {
      if (!e.is_number_unsigned())
        field_fail(sub_path(key), "expected non-negative integers");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  /// Nested object section; missing key reads as an empty object.
  json object(const char* key) {
    const json* v = find(key);
    if (v == nullptr) return json::object();
    if (!v->is_object()) field_fail(sub_path(key), "expected an object");
    return *v;
  }

  void reject_unknown() const {
    for (const auto& item : j_.items())
      if (used_.count(item.key()) == 0)
        field_fail(path_ + "." + item.key(), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0)) field_fail(path, "must be positive");
}

void check_widths(const std::vector<std::size_t>& w, const std::string& path) {
  if (w.size() < 2) field_fail(path, "need at least two layer widths");
  for (std::size_t x : w)
    if (x == 0) field_fail(path, "layer widths must be >= 1");
}

DatasetConfig read_dataset(const json& j) {
  Section s(j, "dataset");
  DatasetConfig d;
  d.kind = s.choice("kind", d.kind, {"ring8", "ring8_hyperplane", "csv", "idx"});
  d.n = s.index("n", d.n);
  d.modes = s.index("modes", d.modes);
  d.radius = s.number("radius", d.radius);
  d.sigma = s.number("sigma", d.sigma);
  d.hyperplane_seed = s.u64("hyperplane_seed", d.hyperplane_seed);
  d.path = s.text("path", d.path);
  d.dim = s.index("dim", d.dim);
  d.header = s.boolean("header", d.header);
  s.reject_unknown();

  if (d.kind == "ring8" || d.kind == "ring8_hyperplane") {
    if (d.n < 2) field_fail("dataset.n", "synthetic pool needs at least 2 samples");
    if (d.modes == 0) field_fail("dataset.modes", "must be >= 1");
    check_positive(d.radius, "dataset.radius");
    check_positive(d.sigma, "dataset.sigma");
  } else if (d.path.empty()) {
    field_fail("dataset.path", "required for kind \"" + d.kind + "\"");
  }
  if (d.kind == "csv" && d.dim == 0) field_fail("dataset.dim", "must be >= 1");
  return d;
}

NetConfig read_net(const json& j, const std::string& path, const NetConfig& def) {
  Section s(j, path);
  NetConfig n;
  n.widths = s.index_list("widths", def.widths);
  n.hidden = s.choice("hidden", def.hidden, {"identity", "tanh", "sigmoid", "relu"});
  s.reject_unknown();
  check_widths(n.widths, path + ".widths");
  return n;
}

EmbeddingConfig read_embedding(const json& j) {
  Section s(j, "embedding");
  EmbeddingConfig e;
  e.kind = s.choice("kind", e.kind, {"identity", "autoencoder"});
  e.encoder_widths = s.index_list("encoder_widths", e.encoder_widths);
  e.pretrain_iters = s.index("pretrain_iters", e.pretrain_iters);
  e.pretrain_lr = s.number("pretrain_lr", e.pretrain_lr);
  s.reject_unknown();
  if (e.kind == "autoencoder") {
    check_widths(e.encoder_widths, "embedding.encoder_widths");
    if (e.pretrain_iters == 0) field_fail("embedding.pretrain_iters", "must be >= 1");
    check_positive(e.pretrain_lr, "embedding.pretrain_lr");
  }
  return e;
}

ObjectiveConfig read_objective(const json& j) {
  Section s(j, "objective");
  ObjectiveConfig o;
  o.phi = s.choice("phi", o.phi, {"log_delta", "identity"});
  o.delta = s.number("delta", o.delta);
  o.lambda = s.number("lambda", o.lambda);
  o.rho = s.number("rho", o.rho);
  o.neighbor_rule = s.choice("neighbor_rule", o.neighbor_rule, {"full", "knn"});
  o.k = s.index("k", o.k);
  o.nearest_pairing = s.boolean("nearest_pairing", o.nearest_pairing);
  s.reject_unknown();
  if (!(o.delta > 0.0 && o.delta < 1.0)) field_fail("objective.delta", "must lie in (0, 1)");
  if (o.lambda < 0.0) field_fail("objective.lambda", "must be >= 0");
  check_positive(o.rho, "objective.rho");
  if (o.k == 0) field_fail("objective.k", "must be >= 1");
  return o;
}

OptimizerSection read_optimizer(const json& j, const std::string& path,
                                const OptimizerSection& def) {
  Section s(j, path);
  OptimizerSection o;
  o.kind = s.choice("kind", def.kind, {"adam", "rmsprop", "sgd"});
  o.lr = s.number("lr", def.lr);
  o.beta1 = s.number("beta1", def.beta1);
  o.beta2 = s.number("beta2", def.beta2);
  o.decay = s.number("decay", def.decay);
  s.reject_unknown();
  check_positive(o.lr, path + ".lr");
  if (!(o.beta1 >= 0.0 && o.beta1 < 1.0)) field_fail(path + ".beta1", "must lie in [0, 1)");
  if (!(o.beta2 >= 0.0 && o.beta2 < 1.0)) field_fail(path + ".beta2", "must lie in [0, 1)");
  if (!(o.decay >= 0.0 && o.decay < 1.0)) field_fail(path + ".decay", "must lie in [0, 1)");
  return o;
}

TrainingConfig read_training(const json& j) {
  Section s(j, "training");
  TrainingConfig t;
  t.generator = read_optimizer(s.object("generator"), "training.generator", t.generator);
  t.discriminator =
      read_optimizer(s.object("discriminator"), "training.discriminator", t.discriminator);
  t.batch_size = s.index("batch_size", t.batch_size);
  t.iterations = s.index("iterations", t.iterations);
  t.scheme = s.choice("scheme", t.scheme, {"simultaneous", "alternating"});
  t.k_disc = s.index("k_disc", t.k_disc);
  t.clip = s.number("clip", t.clip);
  t.project_generator_unit_ball =
      s.boolean("project_generator_unit_ball", t.project_generator_unit_ball);
  t.log_every = s.index("log_every", t.log_every);
  s.reject_unknown();
  if (t.batch_size < 1) field_fail("training.batch_size", "must be >= 1");
  if (t.iterations < 1) field_fail("training.iterations", "must be >= 1");
  if (t.k_disc < 1) field_fail("training.k_disc", "must be >= 1");
  if (t.clip < 0.0) field_fail("training.clip", "must be >= 0");
  if (t.log_every < 1) field_fail("training.log_every", "must be >= 1");
  return t;
}

AnalysisSection read_analysis(const json& j) {
  Section s(j, "analysis");
  AnalysisSection a;
  a.family = s.choice("family", a.family, {"dirac"});
  a.stability_lambda = s.number("stability_lambda", a.stability_lambda);
  a.regularizer = s.choice("regularizer", a.regularizer, {"quadratic", "pairwise"});
  a.dt = s.number("dt", a.dt);
  a.flow_steps = s.index("flow_steps", a.flow_steps);
  a.gap_m = s.index_list("gap_m", a.gap_m);
  a.gap_trials = s.index("gap_trials", a.gap_trials);
  a.population_m = s.index("population_m", a.population_m);
  a.eq_epsilon = s.number("eq_epsilon", a.eq_epsilon);
  a.eq_restarts = s.index("eq_restarts", a.eq_restarts);
  a.eq_steps = s.index("eq_steps", a.eq_steps);
  a.eps_fit = s.number("eps_fit", a.eps_fit);
  a.fit_iters = s.index("fit_iters", a.fit_iters);
  s.reject_unknown();
  if (a.stability_lambda < 0.0) field_fail("analysis.stability_lambda", "must be >= 0");
  check_positive(a.dt, "analysis.dt");
  if (a.flow_steps < 1) field_fail("analysis.flow_steps", "must be >= 1");
  if (a.gap_m.empty()) field_fail("analysis.gap_m", "must not be empty");
  for (std::size_t m : a.gap_m)
    if (m == 0) field_fail("analysis.gap_m", "batch sizes must be >= 1");
  if (a.gap_trials < 2) field_fail("analysis.gap_trials", "must be >= 2");
  check_positive(a.eq_epsilon, "analysis.eq_epsilon");
  if (a.eq_restarts < 1) field_fail("analysis.eq_restarts", "must be >= 1");
  if (a.eq_steps < 1) field_fail("analysis.eq_steps", "must be >= 1");
  check_positive(a.eps_fit, "analysis.eps_fit");
  if (a.fit_iters < 1) field_fail("analysis.fit_iters", "must be >= 1");
  return a;
}

OutputSection read_output(const json& j) {
  Section s(j, "output");
  OutputSection o;
  o.dir = s.text("dir", o.dir);
  o.eval_n = s.index("eval_n", o.eval_n);
  o.gs_landmarks = s.index("gs_landmarks", o.gs_landmarks);
  o.gs_gamma = s.number("gs_gamma", o.gs_gamma);
  o.gs_i_max = s.index("gs_i_max", o.gs_i_max);
  o.gs_repeats = s.index("gs_repeats", o.gs_repeats);
  o.gs_steps = s.index("gs_steps", o.gs_steps);
  s.reject_unknown();
  if (o.dir.empty()) field_fail("output.dir", "must not be empty");
  if (o.eval_n < 2) field_fail("output.eval_n", "must be >= 2");
  if (o.gs_landmarks < 2) field_fail("output.gs_landmarks", "must be >= 2");
  check_positive(o.gs_gamma, "output.gs_gamma");
  if (o.gs_i_max < 1) field_fail("output.gs_i_max", "must be >= 1");
  if (o.gs_repeats < 1) field_fail("output.gs_repeats", "must be >= 1");
  if (o.gs_steps < 1) field_fail("output.gs_steps", "must be >= 1");
  return o;
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  Section root(j, "config");
  RunConfig c;
  c.dataset = read_dataset(root.object("dataset"));
  c.generator = read_net(root.object("generator"), "generator", c.generator);
  c.discriminator = read_net(root.object("discriminator"), "discriminator", c.discriminator);
  c.embedding = read_embedding(root.object("embedding"));
  c.objective = read_objective(root.object("objective"));
  c.training = read_training(root.object("training"));
  c.analysis = read_analysis(root.object("analysis"));
  c.output = read_output(root.object("output"));
  c.seed = root.u64("seed", c.seed);
  root.reject_unknown();

  if (c.discriminator.widths.back() != 1)
    field_fail("discriminator.widths", "last width must be 1 (scalar score)");
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  json j;
  j["dataset"] = {{"kind", c.dataset.kind},
                  {"n", c.dataset.n},
                  {"modes", c.dataset.modes},
                  {"radius", c.dataset.radius},
                  {"sigma", c.dataset.sigma},
                  {"hyperplane_seed", c.dataset.hyperplane_seed},
                  {"path", c.dataset.path},
                  {"dim", c.dataset.dim},
                  {"header", c.dataset.header}};
  j["generator"] = {{"widths", c.generator.widths}, {"hidden", c.generator.hidden}};
  j["discriminator"] = {{"widths", c.discriminator.widths},
                        {"hidden", c.discriminator.hidden}};
  j["embedding"] = {{"kind", c.embedding.kind},
                    {"encoder_widths", c.embedding.encoder_widths},
                    {"pretrain_iters", c.embedding.pretrain_iters},
                    {"pretrain_lr", c.embedding.pretrain_lr}};
  j["objective"] = {{"phi", c.objective.phi},
                    {"delta", c.objective.delta},
                    {"lambda", c.objective.lambda},
                    {"rho", c.objective.rho},
                    {"neighbor_rule", c.objective.neighbor_rule},
                    {"k", c.objective.k},
                    {"nearest_pairing", c.objective.nearest_pairing}};
  auto opt_json = [](const OptimizerSection& o) {
    return json{{"kind", o.kind},
                {"lr", o.lr},
                {"beta1", o.beta1},
                {"beta2", o.beta2},
                {"decay", o.decay}};
  };
  j["training"] = {{"generator", opt_json(c.training.generator)},
                   {"discriminator", opt_json(c.training.discriminator)},
                   {"batch_size", c.training.batch_size},
                   {"iterations", c.training.iterations},
                   {"scheme", c.training.scheme},
                   {"k_disc", c.training.k_disc},
                   {"clip", c.training.clip},
                   {"project_generator_unit_ball", c.training.project_generator_unit_ball},
                   {"log_every", c.training.log_every}};
  j["analysis"] = {{"family", c.analysis.family},
                   {"stability_lambda", c.analysis.stability_lambda},
                   {"regularizer", c.analysis.regularizer},
                   {"dt", c.analysis.dt},
                   {"flow_steps", c.analysis.flow_steps},
                   {"gap_m", c.analysis.gap_m},
                   {"gap_trials", c.analysis.gap_trials},
                   {"population_m", c.analysis.population_m},
                   {"eq_epsilon", c.analysis.eq_epsilon},
                   {"eq_restarts", c.analysis.eq_restarts},
                   {"eq_steps", c.analysis.eq_steps},
                   {"eps_fit", c.analysis.eps_fit},
                   {"fit_iters", c.analysis.fit_iters}};
  j["output"] = {{"dir", c.output.dir},
                 {"eval_n", c.output.eval_n},
                 {"gs_landmarks", c.output.gs_landmarks},
                 {"gs_gamma", c.output.gs_gamma},
                 {"gs_i_max", c.output.gs_i_max},
                 {"gs_repeats", c.output.gs_repeats},
                 {"gs_steps", c.output.gs_steps}};
  j["seed"] = c.seed;
  return j;
}

std::string config_to_string(const RunConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot write config file: " + path);
  out << config_to_string(config);
  require(out.good(), "failed writing config file: " + path);
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "ring8-gan-baseline" || name == "ring8-mrgan" ||
      name == "ring8-wgan") {
    c.dataset.kind = "ring8_hyperplane";
    c.dataset.n = 8192;
    c.generator.widths = {2, 32, 32, 3};
    c.discriminator.widths = {3, 32, 32, 1};
    c.training.batch_size = 256;
    c.training.iterations = 10000;
    c.objective.rho = 128.0;
    if (name == "ring8-gan-baseline") {
      c.objective.lambda = 0.0;
    } else if (name == "ring8-mrgan") {
      c.objective.lambda = 0.5;
    } else {
      c.objective.phi = "identity";
      c.objective.lambda = 0.0;
      c.training.generator = {"rmsprop", 1e-4, 0.9, 0.999, 0.9};
      c.training.discriminator = {"rmsprop", 1e-4, 0.9, 0.999, 0.9};
      c.training.scheme = "alternating";
      c.training.k_disc = 5;
      c.training.clip = 0.01;
    }
    c.output.dir = "runs/" + name;
    return c;
  }
  if (name == "dirac") {
    c.analysis.family = "dirac";
    c.analysis.stability_lambda = 0.5;
    c.analysis.regularizer = "quadratic";
    c.output.dir = "runs/dirac";
    return c;
  }
  if (name == "mnist-reduced") {
    c.dataset.kind = "idx";
    c.dataset.path = "data/mnist-reduced.idx";
    c.generator.widths = {16, 64, 64, 784};
    c.discriminator.widths = {784, 64, 64, 1};
    c.embedding.kind = "autoencoder";
    c.embedding.encoder_widths = {784, 64, 16};
    c.embedding.pretrain_iters = 1500;
    c.objective.phi = "identity";
    c.objective.lambda = 0.1;
    c.training.generator = {"rmsprop", 1e-4, 0.9, 0.999, 0.9};
    c.training.discriminator = {"rmsprop", 1e-4, 0.9, 0.999, 0.9};
    c.training.batch_size = 32;
    c.training.iterations = 5000;
    c.training.clip = 0.01;
    c.output.dir = "runs/mnist-reduced";
    c.output.eval_n = 512;
    c.output.gs_repeats = 20;
    return c;
  }
  fail("unknown preset \"" + name + "\"; available: ring8-gan-baseline, "
       "ring8-mrgan, ring8-wgan, dirac, mnist-reduced");
}

std::vector<std::string> preset_names() {
  return {"ring8-gan-baseline", "ring8-mrgan", "ring8-wgan", "dirac",
          "mnist-reduced"};
}

TrainConfig to_train_config(const RunConfig& c) {
  TrainConfig t;
  t.latent_dim = c.generator.widths.front();
  t.gen_widths = c.generator.widths;
  t.gen_hidden = activation_from_name(c.generator.hidden);
  t.disc_widths = c.discriminator.widths;
  t.disc_hidden = activation_from_name(c.discriminator.hidden);

  t.phi = c.objective.phi == "identity" ? MeasuringFunction::identity()
                                        : MeasuringFunction::log_delta(c.objective.delta);
  t.psi = Embedding::identity();
  t.lambda = c.objective.lambda;
  t.affinity.rho = c.objective.rho;
  t.affinity.rule =
      c.objective.neighbor_rule == "knn" ? NeighborRule::kKnn : NeighborRule::kFull;
  t.affinity.k = c.objective.k;
  t.nearest_pairing = c.objective.nearest_pairing;

  auto to_opt = [](const OptimizerSection& o) {
    OptimizerConfig cfg;
    if (o.kind == "adam") {
      cfg = OptimizerConfig::adam(o.lr);
      cfg.beta1 = o.beta1;
      cfg.beta2 = o.beta2;
    } else if (o.kind == "rmsprop") {
      cfg = OptimizerConfig::rmsprop(o.lr);
      cfg.decay = o.decay;
    } else {
      cfg = OptimizerConfig::sgd(o.lr);
    }
    return cfg;
  };
  t.gen_opt = to_opt(c.training.generator);
  t.disc_opt = to_opt(c.training.discriminator);
  t.batch_size = c.training.batch_size;
  t.iterations = c.training.iterations;
  t.seed = c.seed;
  t.scheme = c.training.scheme == "alternating" ? UpdateScheme::kAlternating
                                                : UpdateScheme::kSimultaneous;
  t.k_disc = c.training.k_disc;
  t.clip = c.training.clip;
  t.project_generator_unit_ball = c.training.project_generator_unit_ball;
  t.log_every = c.training.log_every;
  return t;
}

GsParams to_gs_params(const RunConfig& c) {
  GsParams p;
  p.landmarks = c.output.gs_landmarks;
  p.gamma = c.output.gs_gamma;
  p.i_max = c.output.gs_i_max;
  p.repeats = c.output.gs_repeats;
  p.steps = c.output.gs_steps;
  p.seed = c.seed;
  return p;
}

MixtureSpec dataset_mixture_spec(const RunConfig& c) {
  require(c.dataset.kind == "ring8" || c.dataset.kind == "ring8_hyperplane",
          "dataset kind \"" + c.dataset.kind + "\" has no mixture geometry");
  MixtureSpec spec = c.dataset.kind == "ring8_hyperplane"
                         ? MixtureSpec::ring8_hyperplane(c.dataset.hyperplane_seed)
                         : MixtureSpec::ring8();
  spec.modes = c.dataset.modes;
  spec.radius = c.dataset.radius;
  spec.sigma = c.dataset.sigma;
  return spec;
}

Dataset build_dataset(const RunConfig& c, Rng& rng) {
  if (c.dataset.kind == "ring8" || c.dataset.kind == "ring8_hyperplane")
    return sample_mixture(dataset_mixture_spec(c), c.dataset.n, rng);
  if (c.dataset.kind == "csv")
    return load_csv(c.dataset.path, c.dataset.dim, c.dataset.header);
  return load_idx(c.dataset.path);
}

}  // namespace mrgan

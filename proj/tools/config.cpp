#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gibbstree/errors.hpp"
#include "gibbstree/random.hpp"

namespace gibbstree::cli {

namespace {

using nlohmann::json;

// Reads typed members of one JSON object and rejects keys nobody asked for.
class BlockReader {
 public:
  BlockReader(const json &node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void get(const char *key, T &target) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      target = node_.at(key).get<T>();
    } catch (const json::exception &) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  void get(const char *key, std::optional<T> &target) {
    T value{};
    const bool present = node_.contains(key);
    get(key, value);
    if (present) target = value;
  }

  const json *child(const char *key) {
    seen_.insert(key);
    return node_.contains(key) ? &node_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto &item : node_.items())
      if (!seen_.count(item.key())) throw ConfigError(where_ + ": unknown key '" + item.key() + "'");
  }

 private:
  const json &node_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_model(const json &node, ModelBlock &m) {
  BlockReader r(node, "model");
  r.get("D", m.D);
  r.get("E", m.E);
  r.get("beta", m.beta);
  r.finish();
}

void read_converge(const json &node, ConvergeBlock &c) {
  BlockReader r(node, "converge");
  r.get("n", c.n);
  r.get("orders", c.orders);
  r.get("max_inversions", c.max_inversions);
  r.get("min_ratio", c.min_ratio);
  r.finish();
}

void read_sample(const json &node, SampleBlock &s) {
  BlockReader r(node, "sample");
  r.get("levels", s.levels);
  r.get("trajectories", s.trajectories);
  r.finish();
}

void read_gamma(const json &node, GammaBlock &g) {
  BlockReader r(node, "gamma");
  r.get("n", g.n);
  r.get("samples", g.samples);
  r.get("threshold", g.threshold);
  r.get("histogram_bins", g.histogram_bins);
  r.get("histogram", g.histogram);
  r.finish();
}

void read_laplace(const json &node, LaplaceBlock &l) {
  BlockReader r(node, "laplace");
  r.get("x", l.x);
  r.get("n", l.n);
  r.get("tolerance", l.tolerance);
  r.get("oracle_max_n", l.oracle_max_n);
  r.get("oracle_tolerance", l.oracle_tolerance);
  r.finish();
}

void read_diffuse(const json &node, DiffuseBlock &d) {
  BlockReader r(node, "diffuse");
  r.get("parts", d.parts);
  r.get("T_end", d.T_end);
  r.get("dt", d.dt);
  r.get("paths", d.paths);
  r.get("mean_tolerance", d.mean_tolerance);
  r.get("variance_tolerance", d.variance_tolerance);
  r.get("ks_threshold", d.ks_threshold);
  r.get("two_sample_threshold", d.two_sample_threshold);
  r.get("discrete_n", d.discrete_n);
  r.get("compare_n", d.compare_n);
  r.get("compare_r", d.compare_r);
  r.get("compare_paths", d.compare_paths);
  r.get("increments_n", d.increments_n);
  r.get("increments_r", d.increments_r);
  r.get("increments_trajectories", d.increments_trajectories);
  r.get("increments_sigmas", d.increments_sigmas);
  r.get("histogram_bins", d.histogram_bins);
  r.get("histogram", d.histogram);
  r.finish();
}

void read_moments(const json &node, MomentsBlock &m) {
  BlockReader r(node, "moments");
  r.get("k_max", m.k_max);
  r.get("q_max", m.q_max);
  r.get("tolerance", m.tolerance);
  r.finish();
}

void read_output(const json &node, ExperimentConfig &c) {
  BlockReader r(node, "output");
  r.get("path", c.out);
  r.get("format", c.format);
  r.get("quiet", c.quiet);
  r.finish();
}

}  // namespace

ExperimentConfig::ExperimentConfig() : seed(kDefaultSeed) {}

ExperimentConfig parse_config(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig config;
  BlockReader top(doc, "config");
  top.get("seed", config.seed);
  top.get("threads", config.threads);
  if (const json *node = top.child("model")) read_model(*node, config.model);
  if (const json *node = top.child("output")) read_output(*node, config);
  if (const json *node = top.child("converge")) read_converge(*node, config.converge);
  if (const json *node = top.child("sample")) read_sample(*node, config.sample);
  if (const json *node = top.child("gamma")) read_gamma(*node, config.gamma);
  if (const json *node = top.child("laplace")) read_laplace(*node, config.laplace);
  if (const json *node = top.child("diffuse")) read_diffuse(*node, config.diffuse);
  if (const json *node = top.child("moments")) read_moments(*node, config.moments);
  top.finish();
  return config;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

EnergyModel build_model(const ModelBlock &block) {
  if (!block.D && !block.E) return EnergyModel::make(2, {0.0, 0.0, 0.0}, block.beta);
  if (!block.E) throw ConfigError("model: missing E (expected D + 1 energies)");
  const int D = block.D.value_or(static_cast<int>(block.E->size()) - 1);
  if (D >= 0 && static_cast<int>(block.E->size()) < D + 1)
    throw ConfigError("model: missing E entry (got " + std::to_string(block.E->size()) +
                      " energies, expected D + 1 = " + std::to_string(D + 1) + ")");
  return EnergyModel::make(D, *block.E, block.beta);
}

void validate(const ExperimentConfig &c) {
  auto check = [](bool ok, const std::string &what) {
    if (!ok) throw ConfigError(what);
  };
  check(c.converge.n >= 1, "converge.n must be >= 1");
  check(!c.converge.orders.empty(), "converge.orders must not be empty");
  for (int N : c.converge.orders) check(N >= 1, "converge.orders entries must be >= 1");
  check(c.sample.levels >= 0, "sample.levels must be >= 0");
  check(c.sample.trajectories >= 1, "sample.trajectories must be >= 1");
  check(c.gamma.n >= 1, "gamma.n must be >= 1");
  check(c.gamma.samples >= 1000, "gamma.samples must be >= 1000");
  check(c.gamma.histogram_bins >= 1, "gamma.histogram_bins must be >= 1");
  check(c.laplace.x <= 0.0, "laplace.x must be <= 0");
  for (int n : c.laplace.n) check(n >= 1, "laplace.n entries must be >= 1");
  check(c.laplace.oracle_max_n >= 0 && c.laplace.oracle_max_n <= 12, "laplace.oracle_max_n must be in 0..12");
  const auto &d = c.diffuse;
  for (const auto &part : d.parts)
    check(part == "besq" || part == "compare" || part == "increments",
          "diffuse.parts entries must be besq, compare or increments");
  check(d.T_end > 0.0, "diffuse.T_end must be > 0");
  check(d.dt > 0.0 && d.dt <= d.T_end, "diffuse.dt must be in (0, T_end]");
  check(d.paths >= 1000, "diffuse.paths must be >= 1000");
  check(d.discrete_n >= 1, "diffuse.discrete_n must be >= 1");
  for (int n : d.compare_n) check(n >= 2, "diffuse.compare_n entries must be >= 2");
  for (int r : d.compare_r) check(r >= 1, "diffuse.compare_r entries must be >= 1");
  check(d.compare_paths >= 100, "diffuse.compare_paths must be >= 100");
  check(d.increments_n >= 2, "diffuse.increments_n must be >= 2");
  check(d.increments_r >= 2, "diffuse.increments_r must be >= 2");
  check(d.increments_trajectories >= 2, "diffuse.increments_trajectories must be >= 2");
  check(d.histogram_bins >= 1, "diffuse.histogram_bins must be >= 1");
  check(c.moments.k_max >= 1 && c.moments.k_max <= 8, "moments.k_max must be in 1..8");
  check(c.moments.q_max >= 1 && c.moments.q_max <= 4, "moments.q_max must be in 1..4");
}

}  // namespace gibbstree::cli

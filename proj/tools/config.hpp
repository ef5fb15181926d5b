#ifndef GIBBSTREE_TOOLS_CONFIG_HPP_
#define GIBBSTREE_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbstree/model.hpp"

namespace gibbstree::cli {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelBlock {
  std::optional<int> D;
  std::optional<std::vector<double>> E;
  double beta = 0.0;
};

struct ConvergeBlock {
  int n = 1;
  std::vector<int> orders = {16, 32, 64, 128, 256, 512};
  int max_inversions = 1;
  double min_ratio = 3.0;  // TV(first) / TV(last)
};

struct SampleBlock {
  int levels = 20;
  int trajectories = 1;
};

struct GammaBlock {
  int n = 500;
  std::size_t samples = 100000;
  double threshold = 0.02;
  int histogram_bins = 50;
  std::string histogram;  // CSV dump path, empty for none
};

struct LaplaceBlock {
  double x = -1.0;
  std::vector<int> n = {10, 100, 1000, 10000};
  double tolerance = 5e-3;
  int oracle_max_n = 10;
  double oracle_tolerance = 1e-9;
};

struct DiffuseBlock {
  std::vector<std::string> parts = {"besq", "compare", "increments"};
  double T_end = 1.0;
  double dt = 1e-3;
  std::size_t paths = 100000;
  double mean_tolerance = 0.01;
  double variance_tolerance = 0.03;
  double ks_threshold = 0.02;
  double two_sample_threshold = 0.03;
  int discrete_n = 500;
  std::vector<int> compare_n = {100, 200, 400, 800};
  std::vector<int> compare_r = {1, 2, 3};
  std::size_t compare_paths = 20000;
  int increments_n = 400;
  int increments_r = 2;
  std::size_t increments_trajectories = 10000;
  double increments_sigmas = 3.0;
  int histogram_bins = 50;
  std::string histogram;
};

struct MomentsBlock {
  int k_max = 4;
  int q_max = 4;
  double tolerance = 1e-10;
};

struct ExperimentConfig {
  ModelBlock model;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string out;       // empty or "-": stdout
  std::string format;    // empty: command default
  bool quiet = false;
  ConvergeBlock converge;
  SampleBlock sample;
  GammaBlock gamma;
  LaplaceBlock laplace;
  DiffuseBlock diffuse;
  MomentsBlock moments;

  ExperimentConfig();
};

/// Parses a JSON config document. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// Builds the model. Without any model keys this is D = 2, E = 0, beta = 0.
/// A D without a matching E list is a ConfigError; invalid models raise InvalidModel.
EnergyModel build_model(const ModelBlock &block);

/// Range checks shared by all commands.
void validate(const ExperimentConfig &config);

}  // namespace gibbstree::cli

#endif  // GIBBSTREE_TOOLS_CONFIG_HPP_

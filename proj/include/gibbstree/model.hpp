#ifndef GIBBSTREE_MODEL_HPP_
#define GIBBSTREE_MODEL_HPP_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gibbstree {

using Moments5 = Eigen::Matrix<double, 5, 1>;

/// Branching-bounded energy model: vertex of out-degree i carries energy E_i,
/// i = 0..D, and trees are weighted by exp(-beta * total energy).
class EnergyModel {
 public:
  /// Throws InvalidModel if D = energies.size() - 1 < 2 or any input is not finite.
  EnergyModel(Eigen::VectorXd energies, double beta);

  /// Same, but also checks that `energies` has exactly D + 1 entries.
  static EnergyModel make(int D, const std::vector<double> &energies, double beta);

  int max_degree() const { return static_cast<int>(energies_.size()) - 1; }
  const Eigen::VectorXd &energies() const { return energies_; }
  double beta() const { return beta_; }

  /// E_i; throws DomainError for i outside 0..D.
  double energy(int degree) const;
  /// -beta * E_i, the log of the Boltzmann weight of one vertex of out-degree i.
  double log_weight(int degree) const { return -beta_ * energy(degree); }
  Eigen::VectorXd log_weights() const { return -beta_ * energies_; }

 private:
  Eigen::VectorXd energies_;
  double beta_;
};

/// Everything derived from the minimiser p* of J(p) = -H(p) + beta E(p) over
/// the critical simplex {p : sum p_i = 1, sum i p_i = 1}.
struct CriticalParams {
  EnergyModel model;
  double rho = 0;
  double C = 0;
  double sigma = 0;
  double J_star = 0;
  double mu = 0;
  double log_rho = 0;
  double log_C = 0;
  double log_sigma = 0;
  Eigen::VectorXd p_star;
  Eigen::VectorXd log_p_star;
  Moments5 B = Moments5::Zero();  // B(0) = B_1, ..., B(4) = B_5

  int max_degree() const { return model.max_degree(); }
  /// Log of the size-biased offspring law i * p*_i (-inf at i = 0).
  double log_size_biased(int i) const;
};

/// Unique rho > 0 with sum_i (i - 1) e^{-beta E_i} rho^i = 0.
double solve_rho(const EnergyModel &model);
/// ln(rho), accurate even when rho itself over- or underflows.
double solve_log_rho(const EnergyModel &model);

CriticalParams critical_params(const EnergyModel &model);

/// J(p) = sum p_i ln p_i + beta sum p_i E_i with 0 ln 0 = 0. Throws DomainError
/// when p is not a probability vector of length D + 1 (sum tolerance 1e-9).
double rate_function_J(const Eigen::Ref<const Eigen::VectorXd> &p, const EnergyModel &model);

struct MomentSummary {
  Moments5 B = Moments5::Zero();
  double mu = 0;
};

/// B_n = sum_i i^n p*_i for n = 1..5 and mu = B_2 - 1.
MomentSummary moments(const CriticalParams &params);

/// Flat (name, value) record: rho, C, sigma, J_star, mu, p_star[i], B[n].
std::vector<std::pair<std::string, double>> flat_record(const CriticalParams &params);

}  // namespace gibbstree

#endif  // GIBBSTREE_MODEL_HPP_

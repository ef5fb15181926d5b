#include "gibbstree/model.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gibbstree/errors.hpp"
#include "gibbstree/numeric.hpp"

namespace gibbstree {

EnergyModel::EnergyModel(Eigen::VectorXd energies, double beta)
    : energies_(std::move(energies)), beta_(beta) {
  if (energies_.size() < 3) {
    throw InvalidModel(
        "branching bound D must be at least 2: with D < 2 the critical simplex "
        "is a single degenerate point and p* cannot be strictly positive");
  }
  if (!std::isfinite(beta_)) throw InvalidModel("beta must be finite");
  for (Eigen::Index i = 0; i < energies_.size(); ++i) {
    if (!std::isfinite(energies_(i))) {
      throw InvalidModel("energy E_" + std::to_string(i) + " is not finite");
    }
  }
}

EnergyModel EnergyModel::make(int D, const std::vector<double> &energies, double beta) {
  if (D < 2) {
    throw InvalidModel(
        "branching bound D must be at least 2: with D < 2 the critical simplex "
        "is a single degenerate point and p* cannot be strictly positive");
  }
  if (energies.size() != static_cast<std::size_t>(D) + 1) {
    throw InvalidModel("expected " + std::to_string(D + 1) + " energies for D = " +
                       std::to_string(D) + ", got " + std::to_string(energies.size()));
  }
  Eigen::VectorXd e(D + 1);
  for (int i = 0; i <= D; ++i) e(i) = energies[static_cast<std::size_t>(i)];
  return EnergyModel(std::move(e), beta);
}

double EnergyModel::energy(int degree) const {
  if (degree < 0 || degree > max_degree()) {
    throw DomainError("out-degree " + std::to_string(degree) + " exceeds branching bound " +
                      std::to_string(max_degree()));
  }
  return energies_(degree);
}

double CriticalParams::log_size_biased(int i) const {
  if (i == 0) return neg_infinity<double>;
  return std::log(static_cast<double>(i)) + log_p_star(i);
}

namespace {

// log of sum_{i>=2} (i-1) w_i e^{i t} minus log w_0; strictly increasing in t,
// zero exactly at t = ln(rho).
double log_balance(const Eigen::VectorXd &log_w, double t) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(log_w.size()));
  for (Eigen::Index i = 2; i < log_w.size(); ++i) {
    terms.push_back(std::log(static_cast<double>(i - 1)) + log_w(i) + static_cast<double>(i) * t);
  }
  return log_sum_exp<double>(terms) - log_w(0);
}

}  // namespace

double solve_log_rho(const EnergyModel &model) {
  const Eigen::VectorXd log_w = model.log_weights();

  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  if (log_balance(log_w, 0.0) < 0.0) {
    while (log_balance(log_w, hi) < 0.0) {
      lo = hi;
      hi += step;
      step *= 2.0;
    }
  } else {
    while (log_balance(log_w, lo) > 0.0) {
      hi = lo;
      lo -= step;
      step *= 2.0;
    }
  }

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double val = log_balance(log_w, mid);
    if (val == 0.0) return mid;
    (val < 0.0 ? lo : hi) = mid;
  }
  // Pick the endpoint with the smaller residual.
  return std::abs(log_balance(log_w, lo)) <= std::abs(log_balance(log_w, hi)) ? lo : hi;
}

double solve_rho(const EnergyModel &model) { return std::exp(solve_log_rho(model)); }

double rate_function_J(const Eigen::Ref<const Eigen::VectorXd> &p, const EnergyModel &model) {
  if (p.size() != model.energies().size()) {
    throw DomainError("probability vector length does not match D + 1");
  }
  CompensatedSum<double> total;
  CompensatedSum<double> mass;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p(i);
    if (!(pi >= 0.0)) throw DomainError("probability vector has a negative or NaN entry");
    mass += pi;
    if (pi > 0.0) total += pi * std::log(pi);
    total += model.beta() * pi * model.energies()(i);
  }
  if (std::abs(mass.value() - 1.0) > 1e-9) {
    throw DomainError("probability vector does not sum to 1");
  }
  return total.value();
}

CriticalParams critical_params(const EnergyModel &model) {
  CriticalParams out{.model = model, .p_star = {}, .log_p_star = {}};
  const int D = model.max_degree();
  out.log_rho = solve_log_rho(model);

  std::vector<double> log_terms(static_cast<std::size_t>(D) + 1);
  for (int i = 0; i <= D; ++i) {
    log_terms[static_cast<std::size_t>(i)] = model.log_weight(i) + i * out.log_rho;
  }
  const double log_partition = log_sum_exp<double>(log_terms);

  out.log_C = -log_partition;
  out.log_sigma = out.log_rho + out.log_C;
  out.rho = std::exp(out.log_rho);
  out.C = std::exp(out.log_C);
  out.sigma = std::exp(out.log_sigma);

  out.log_p_star.resize(D + 1);
  out.p_star.resize(D + 1);
  for (int i = 0; i <= D; ++i) {
    out.log_p_star(i) = log_terms[static_cast<std::size_t>(i)] - log_partition;
    out.p_star(i) = std::exp(out.log_p_star(i));
  }
  out.J_star = rate_function_J(out.p_star / out.p_star.sum(), model);

  const MomentSummary m = moments(out);
  out.B = m.B;
  out.mu = m.mu;
  return out;
}

MomentSummary moments(const CriticalParams &params) {
  MomentSummary out;
  const Eigen::VectorXd &p = params.p_star;
  for (int n = 1; n <= 5; ++n) {
    CompensatedSum<double> acc;
    for (Eigen::Index i = 1; i < p.size(); ++i) {
      acc += std::pow(static_cast<double>(i), n) * p(i);
    }
    out.B(n - 1) = acc.value();
  }
  // Variance of p*; computed from centred terms so it keeps relative accuracy
  // even when p* is nearly concentrated on degree 1.
  CompensatedSum<double> var;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(i) - out.B(0);
    var += d * d * p(i);
  }
  out.mu = var.value();
  return out;
}

std::vector<std::pair<std::string, double>> flat_record(const CriticalParams &params) {
  std::vector<std::pair<std::string, double>> rec = {
      {"rho", params.rho},       {"C", params.C},   {"sigma", params.sigma},
      {"J_star", params.J_star}, {"mu", params.mu},
  };
  for (Eigen::Index i = 0; i < params.p_star.size(); ++i) {
    rec.emplace_back("p_star[" + std::to_string(i) + "]", params.p_star(i));
  }
  for (int n = 1; n <= 5; ++n) {
    rec.emplace_back("B[" + std::to_string(n) + "]", params.B(n - 1));
  }
  return rec;
}

}  // namespace gibbstree

#pragma once

// Finite-state Metropolis dynamics over an action space A = {0, ..., n-1}.
//
// Utilities are maximized. Every routine is templated on the scalar type and
// works on dense Eigen vectors/matrices; `double` is the default everywhere.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ergodic/errors.hpp"
#include "ergodic/rng.hpp"

namespace ergodic {

using Index = Eigen::Index;

template <class Scalar = double>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar = double>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One real payoff per action.
template <class Scalar = double>
using UtilityTable = Vector<Scalar>;

/// Probability vector over the actions.
template <class Scalar = double>
using Distribution = Vector<Scalar>;

/// Sequence of visited action indices a_0, a_1, ..., a_n.
using Trajectory = std::vector<Index>;

/// Ordered, distinct action identifiers indexed 0..|A|-1.
class FiniteActionSpace {
 public:
  explicit FiniteActionSpace(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw std::invalid_argument("action space needs at least two actions");
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("duplicate action identifier: " + names_[i]);
  }

  /// Actions named "0", "1", ..., "n-1".
  static FiniteActionSpace indexed(Index n) {
    if (n < 2) throw std::invalid_argument("action space needs at least two actions");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return FiniteActionSpace(std::move(names));
  }

  Index size() const { return static_cast<Index>(names_.size()); }
  const std::string& name(Index a) const { return names_.at(static_cast<std::size_t>(a)); }
  bool contains(Index a) const { return a >= 0 && a < size(); }

 private:
  std::vector<std::string> names_;
};

template <class Scalar>
void check_utilities(const FiniteActionSpace& space, const UtilityTable<Scalar>& u) {
  if (u.size() != space.size()) throw std::invalid_argument("utility table size does not match action space");
  if (!u.allFinite()) throw std::domain_error("utility table has non-finite entries");
}

template <class Scalar>
bool is_distribution(const Distribution<Scalar>& p, Scalar tol = Scalar(1e-9)) {
  if (p.size() == 0) return false;
  if ((p.array() < Scalar(0)).any() || !p.allFinite()) return false;
  return std::abs(p.sum() - Scalar(1)) <= tol;
}

/// Symmetric, irreducible proposal Q. Either an explicit row-stochastic matrix
/// or a move generator; both forms sample with a single call per proposal.
template <class Scalar = double>
class ProposalKernel {
 public:
  using Sampler = std::function<Index(Index, Rng&)>;

  /// Uniform over A \ {a}. Explicit, symmetric and irreducible for n >= 2.
  static ProposalKernel uniform(Index n) {
    if (n < 2) throw std::invalid_argument("uniform kernel needs at least two actions");
    Matrix<Scalar> q = Matrix<Scalar>::Constant(n, n, Scalar(1) / Scalar(n - 1));
    q.diagonal().setZero();
    ProposalKernel k(n);
    k.matrix_ = std::move(q);
    k.sampler_ = [n](Index from, Rng& rng) {
      auto b = static_cast<Index>(rng.index(static_cast<std::size_t>(n - 1)));
      return b >= from ? b + 1 : b;
    };
    return k;
  }

  /// Explicit Q; validated for row sums, symmetry (both within 1e-12) and irreducibility.
  static ProposalKernel from_matrix(Matrix<Scalar> q) {
    const Index n = q.rows();
    if (n < 2 || q.cols() != n) throw std::invalid_argument("proposal matrix must be square with n >= 2");
    if (!q.allFinite() || (q.array() < Scalar(0)).any())
      throw std::invalid_argument("proposal matrix entries must be finite and non-negative");
    constexpr Scalar tol = Scalar(1e-12);
    for (Index a = 0; a < n; ++a)
      if (std::abs(q.row(a).sum() - Scalar(1)) > tol) throw std::invalid_argument("proposal matrix row does not sum to 1");
    if (((q - q.transpose()).array().abs() > tol).any()) throw std::invalid_argument("proposal matrix is not symmetric");
    if (!strongly_connected(q)) throw std::invalid_argument("proposal matrix is not irreducible");

    ProposalKernel k(n);
    k.matrix_ = std::move(q);
    k.sampler_ = [m = *k.matrix_](Index from, Rng& rng) {
      const Scalar r = static_cast<Scalar>(rng.uniform());
      Scalar acc = 0;
      Index last = from;
      for (Index b = 0; b < m.cols(); ++b) {
        if (m(from, b) <= Scalar(0)) continue;
        acc += m(from, b);
        last = b;
        if (r < acc) return b;
      }
      return last;
    };
    return k;
  }

  /// Generator-only kernel over n actions. The caller vouches for symmetry and irreducibility.
  static ProposalKernel from_generator(Index n, Sampler sampler) {
    if (n < 2) throw std::invalid_argument("kernel needs at least two actions");
    ProposalKernel k(n);
    k.sampler_ = std::move(sampler);
    return k;
  }

  Index size() const { return size_; }
  bool is_explicit() const { return matrix_.has_value(); }

  const Matrix<Scalar>& matrix() const {
    if (!matrix_) throw UnsupportedOperation("proposal kernel has no explicit matrix");
    return *matrix_;
  }

  Index sample(Index from, Rng& rng) const { return sampler_(from, rng); }

 private:
  explicit ProposalKernel(Index n) : size_(n) {}

  static bool strongly_connected(const Matrix<Scalar>& q) {
    const Index n = q.rows();
    auto reaches_all = [&](bool transpose) {
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      std::vector<Index> stack{0};
      seen[0] = 1;
      Index count = 1;
      while (!stack.empty()) {
        Index a = stack.back();
        stack.pop_back();
        for (Index b = 0; b < n; ++b) {
          const Scalar w = transpose ? q(b, a) : q(a, b);
          if (w > Scalar(0) && !seen[static_cast<std::size_t>(b)]) {
            seen[static_cast<std::size_t>(b)] = 1;
            ++count;
            stack.push_back(b);
          }
        }
      }
      return count == n;
    };
    return reaches_all(false) && reaches_all(true);
  }

  Index size_;
  std::optional<Matrix<Scalar>> matrix_;
  Sampler sampler_;
};

template <class Scalar = double>
struct ChainConfig {
  Distribution<Scalar> initial_distribution;
  Scalar inverse_temperature = Scalar(1);
  std::uint64_t seed = 0;

  /// Uniform initial distribution; Step 0 picks a_0 uniformly.
  static ChainConfig uniform(Index n, Scalar beta, std::uint64_t seed) {
    return {Distribution<Scalar>::Constant(n, Scalar(1) / Scalar(n)), beta, seed};
  }
};

/// Metropolis acceptance: 1 for uphill or level moves, exp(beta * gap) otherwise.
template <class Scalar>
Scalar acceptance_probability(Scalar u_current, Scalar u_proposed, Scalar beta) {
  if (!std::isfinite(u_current) || !std::isfinite(u_proposed))
    throw std::domain_error("acceptance_probability: non-finite utility");
  if (!(beta > Scalar(0))) throw std::domain_error("acceptance_probability: beta must be positive");
  if (u_proposed >= u_current) return Scalar(1);
  return std::exp(beta * (u_proposed - u_current));
}

/// p_beta(a) proportional to exp(beta * u(a)), computed with a max shift.
template <class Scalar>
Distribution<Scalar> gibbs_distribution(const FiniteActionSpace& space, const UtilityTable<Scalar>& u, Scalar beta) {
  check_utilities(space, u);
  if (!(beta > Scalar(0))) throw std::domain_error("gibbs_distribution: beta must be positive");
  Distribution<Scalar> w = (beta * (u.array() - u.maxCoeff())).exp().matrix();
  return w / w.sum();
}

/// Uniform over the maximizers of u; entries within 1e-12 of the max count as ties.
template <class Scalar>
Distribution<Scalar> limit_distribution(const FiniteActionSpace& space, const UtilityTable<Scalar>& u) {
  check_utilities(space, u);
  const Scalar top = u.maxCoeff();
  Distribution<Scalar> p = ((top - u.array()) <= Scalar(1e-12)).template cast<Scalar>().matrix();
  return p / p.sum();
}

/// Inverse-CDF draw from a probability vector; consumes one uniform.
template <class Scalar>
Index sample_from(const Distribution<Scalar>& p, Rng& rng) {
  const Scalar r = static_cast<Scalar>(rng.uniform());
  Scalar acc = 0;
  Index last = 0;
  for (Index a = 0; a < p.size(); ++a) {
    if (p(a) <= Scalar(0)) continue;
    acc += p(a);
    last = a;
    if (r < acc) return a;
  }
  return last;
}

/// One Metropolis transition. Draw order: proposal first, then at most one
/// acceptance uniform (only for strictly downhill proposals).
template <class Scalar>
Index metropolis_step(Index current, const UtilityTable<Scalar>& u, Scalar beta, const ProposalKernel<Scalar>& kernel,
                      Rng& rng) {
  const Index b = kernel.sample(current, rng);
  const Scalar p = acceptance_probability(u(current), u(b), beta);
  if (p >= Scalar(1)) return b;
  return static_cast<Scalar>(rng.uniform()) < p ? b : current;
}

/// Exact Metropolis transition matrix P(b|a) for an explicit kernel.
template <class Scalar>
Matrix<Scalar> transition_matrix(const FiniteActionSpace& space, const UtilityTable<Scalar>& u, Scalar beta,
                                 const ProposalKernel<Scalar>& kernel) {
  check_utilities(space, u);
  if (!(beta > Scalar(0))) throw std::domain_error("transition_matrix: beta must be positive");
  const Matrix<Scalar>& q = kernel.matrix();
  if (q.rows() != space.size()) throw std::invalid_argument("kernel size does not match action space");

  const Index n = space.size();
  Matrix<Scalar> p(n, n);
  for (Index a = 0; a < n; ++a) {
    Scalar off = 0;
    for (Index b = 0; b < n; ++b) {
      if (b == a) continue;
      p(a, b) = q(a, b) * std::min(Scalar(1), std::exp(beta * (u(b) - u(a))));
      off += p(a, b);
    }
    p(a, a) = Scalar(1) - off;
  }
  return p;
}

/// a_0 ~ mu, then `steps` Metropolis transitions. Returns steps + 1 states.
template <class Scalar>
Trajectory run_chain(const ChainConfig<Scalar>& config, const UtilityTable<Scalar>& u,
                     const ProposalKernel<Scalar>& kernel, std::int64_t steps) {
  if (steps < 1) throw std::invalid_argument("run_chain: steps must be positive");
  if (config.initial_distribution.size() != u.size() || kernel.size() != u.size())
    throw std::invalid_argument("run_chain: size mismatch");
  if (!is_distribution(config.initial_distribution, Scalar(1e-12)))
    throw std::invalid_argument("run_chain: initial distribution must sum to 1");
  if (!(config.inverse_temperature > Scalar(0))) throw std::domain_error("run_chain: beta must be positive");

  Rng rng(config.seed);
  Trajectory states;
  states.reserve(static_cast<std::size_t>(steps) + 1);
  states.push_back(sample_from(config.initial_distribution, rng));
  for (std::int64_t n = 0; n < steps; ++n)
    states.push_back(metropolis_step(states.back(), u, config.inverse_temperature, kernel, rng));
  return states;
}

/// Fraction of positions in the trajectory occupied by each action.
template <class Scalar = double>
Distribution<Scalar> empirical_frequency(const Trajectory& trajectory, Index num_actions) {
  if (trajectory.empty()) throw std::invalid_argument("empirical_frequency: empty trajectory");
  Distribution<Scalar> f = Distribution<Scalar>::Zero(num_actions);
  for (Index a : trajectory) {
    if (a < 0 || a >= num_actions) throw std::out_of_range("empirical_frequency: state out of range");
    f(a) += Scalar(1);
  }
  return f / static_cast<Scalar>(trajectory.size());
}

template <class Scalar = double>
Distribution<Scalar> empirical_frequency(const Trajectory& trajectory, const FiniteActionSpace& space) {
  return empirical_frequency<Scalar>(trajectory, space.size());
}

template <class Derived, class OtherDerived>
typename Derived::Scalar total_variation(const Eigen::MatrixBase<Derived>& p, const Eigen::MatrixBase<OtherDerived>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  return typename Derived::Scalar(0.5) * (p - q).cwiseAbs().sum();
}

}  // namespace ergodic

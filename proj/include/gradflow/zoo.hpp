#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradflow/markov_core.hpp"

namespace gradflow {

/// A named generator with its stationary distribution and verified tags
/// ("reversible", "diagonalisable", "oscillatory").
struct ChainSpec {
  std::string name;
  Generator generator;
  Distribution pi;
  std::vector<std::string> tags;

  bool has_tag(const std::string& tag) const;
};

/// Wraps a generator, computing pi and tags from the library checks.
ChainSpec make_chain_spec(std::string name, const Generator& q);

/// Q = Pi^{-1} S, where S couples every state i < d to d with weight pi_i lambda.
/// Every u in T with u_d = 0 satisfies u Q = -lambda u.
ChainSpec star_chain(const Distribution& pi, double lambda);

/// The star chain with states 0 and 1 coupled at rate mu, tuned so that v
/// (v_0, v_1 != 0, v_d = 0) stays an eigenvector: v Q = -lambda v.
/// Throws MuTooLarge when a rate turns negative.
ChainSpec coupled_pair_chain(const Distribution& pi, double lambda, double mu, const TangentVector& v);

/// Reversible chain with stationary pi: Pi Q = S - diag(S 1) for symmetric S
/// with off-diagonals uniform on [0.1, 1].
ChainSpec random_reversible(const Distribution& pi, std::uint64_t seed);

/// Rejection-samples i.i.d. uniform [0.1, 1] rate matrices until one is
/// clearly non-reversible yet real diagonalisable.
ChainSpec random_nonreversible_diagonalisable(Eigen::Index n_states, std::uint64_t seed,
                                              int max_tries = 10000);

/// Q_{i,i+1 mod n} = rate, Q_ii = -rate.
ChainSpec cyclic_chain(Eigen::Index n_states, double rate = 1.0);

/// Interior distribution with pi_i proportional to floor + U(0, 1).
Distribution random_distribution(Eigen::Index n_states, std::uint64_t seed, double floor = 0.2);

}  // namespace gradflow

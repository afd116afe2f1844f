#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mdplab/errors.hpp"
#include "mdplab/matrix.hpp"

namespace mdplab {

/// Row sums and distributions must match 1 within this tolerance.
inline constexpr double kProbTol = 1e-12;

/// Finite MDP: states x, actions a, transition tensor T[x][a][y], reward
/// table r[x][a] and initial state distribution mu.
struct Mdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> transition; // flattened [x][a][y]
    Matrix reward;                  // [x][a]
    Vector initial_dist;

    double transition_prob(int x, int a, int y) const {
        return transition[(static_cast<size_t>(x) * n_actions + a) * n_states + y];
    }
    double& transition_prob(int x, int a, int y) {
        return transition[(static_cast<size_t>(x) * n_actions + a) * n_states + y];
    }
    std::span<const double> transition_row(int x, int a) const {
        return {transition.data() + (static_cast<size_t>(x) * n_actions + a) * n_states,
                static_cast<size_t>(n_states)};
    }

    static Mdp zeros(int n_states, int n_actions);

    /// Throws ValidationError (with the offending row) unless every (x,a)
    /// transition row and mu are distributions within kProbTol and all
    /// rewards are finite.
    void validate() const;
};

/// Row-stochastic state -> action-distribution table.
struct Policy {
    Matrix probs; // [x][a]

    int n_states() const { return probs.rows(); }
    int n_actions() const { return probs.cols(); }

    static Policy uniform(int n_states, int n_actions);
    static Policy deterministic(const std::vector<int>& action_per_state, int n_actions);

    void validate() const;
    /// Shape + stochasticity against a concrete MDP.
    void validate_for(const Mdp& mdp) const;
};

/// Entrywise mixture (1-alpha) a + alpha b.
Policy mix(const Policy& a, const Policy& b, double alpha);

/// Markov chain induced on states by fixing a policy.
struct InducedChain {
    Matrix transition; // P^pi
    Vector reward;     // r^pi
};

/// P^pi(x,y) = sum_a pi(a|x) P(y|x,a), r^pi(x) = sum_a pi(a|x) r(x,a).
InducedChain induce_chain(const Mdp& mdp, const Policy& policy);

/// Structural diagnostics of the induced chain. Purely informational;
/// consumers decide whether to reject.
struct ReachabilityReport {
    std::vector<int> reachable;                      // from support(mu), sorted
    std::vector<std::vector<int>> recurrent_classes; // within the reachable set
    bool unichain = false;    // exactly one recurrent class among reachable states
    bool irreducible = false; // whole state space is one communicating class
    bool aperiodic = false;   // the unique recurrent class has period 1
    int period = 0;           // period of that class; 0 when not unichain
};

ReachabilityReport validate_reachability(const Mdp& mdp, const Policy& policy);
/// Same analysis for a bare chain and initial distribution.
ReachabilityReport chain_reachability(const Matrix& p, const Vector& mu);

/// States with a positive-probability path from support(mu); sorted.
std::vector<int> reachable_states(const Matrix& p, const Vector& mu);

/// Uniform source over mt19937_64 that sidesteps std::uniform_real_distribution,
/// so generated instances are bit-identical across standard libraries.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in the open interval (0, 1).
    double uniform01() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }
    double exponential() { return -std::log(uniform01()); }

    /// Dirichlet(1,..,1): uniform over the probability simplex.
    Vector simplex(int n);

  private:
    std::mt19937_64 gen_;
};

/// Random MDP in the Garnet family: every (x,a) row has exactly `branching`
/// reachable successors with simplex-uniform probabilities; rewards are
/// U[0,1] zeroed with probability reward_sparsity; mu is uniform.
/// Deterministic given the seed.
Mdp garnet(int n_states, int n_actions, int branching, double reward_sparsity,
           std::uint64_t seed);

} // namespace mdplab

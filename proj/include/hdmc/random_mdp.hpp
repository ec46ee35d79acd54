#ifndef HDMC_RANDOM_MDP_HPP
#define HDMC_RANDOM_MDP_HPP

#include <random>

#include "hdmc/mdp.hpp"
#include "hdmc/policy.hpp"

namespace hdmc {

// Random-instance generators for the inequality sweeps. All draw exclusively
// from the supplied Rng, so instances are pure functions of the seed.

namespace detail {

// Symmetric-Dirichlet row: normalized Gamma(concentration) draws. Large
// concentration gives near-uniform rows; concentration 1 gives a flat
// Dirichlet.
inline void fill_dirichlet_row(std::span<double> row, double concentration, Rng& rng) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    double total = 0;
    for (double& p : row) {
        p = gamma(rng.engine());
        total += p;
    }
    if (total <= 0) {
        for (double& p : row) p = 1.0 / static_cast<double>(row.size());
        return;
    }
    for (double& p : row) p /= total;
}

}  // namespace detail

inline DeterministicMdp random_deterministic_mdp(int n_states, int n_actions, Rng& rng) {
    DeterministicMdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.successor.resize(static_cast<std::size_t>(n_states) * n_actions);
    m.rewards.resize(m.successor.size());
    for (std::size_t i = 0; i < m.successor.size(); ++i) {
        m.successor[i] = rng.uniform_int(n_states);
        m.rewards[i] = rng.uniform();
    }
    m.initial_dist.assign(n_states, 1.0 / n_states);
    m.reward_bound = 1.0;
    return m;
}

// Random transition model (or environment) with Dirichlet rows. Rewards are
// uniform in [0, 1]; mu is uniform; reward_bound is 1.
inline TabularMdp random_stochastic_model(int n_states, int n_actions, double concentration, Rng& rng) {
    TabularMdp m = TabularMdp::zeros(n_states, n_actions);
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) {
            detail::fill_dirichlet_row(m.row(s, a), concentration, rng);
            m.reward(s, a) = rng.uniform();
        }
    m.initial_dist.assign(n_states, 1.0 / n_states);
    m.reward_bound = 1.0;
    return m;
}

inline MarkovPolicy random_markov_policy(int n_states, int n_actions, Rng& rng) {
    MarkovPolicy p;
    p.n_states = n_states;
    p.n_actions = n_actions;
    p.probs.resize(static_cast<std::size_t>(n_states) * n_actions);
    for (int s = 0; s < n_states; ++s)
        detail::fill_dirichlet_row({p.probs.data() + static_cast<std::size_t>(s) * n_actions,
                                    static_cast<std::size_t>(n_actions)},
                                   1.0, rng);
    return p;
}

// Random state-action distribution (flat Dirichlet over all pairs).
inline StateActionDist random_state_action_dist(int n_states, int n_actions, Rng& rng) {
    StateActionDist d = StateActionDist::zeros(n_states, n_actions);
    detail::fill_dirichlet_row(d.weights, 1.0, rng);
    return d;
}

}  // namespace hdmc

#endif  // HDMC_RANDOM_MDP_HPP

#ifndef HDMC_COIN_HPP
#define HDMC_COIN_HPP

#include "hdmc/mdp.hpp"
#include "hdmc/policy.hpp"

namespace hdmc {

// Three-state coin environments. States: kCoinStart, kCoinHeads, kCoinTails.
// Reward 1 on heads, 0 elsewhere; heads/tails are absorbing in the
// stochastic variant. These are the minimal environments on which a perfect
// model still shows nonzero hallucinated one-step error when the two chains
// act independently.
inline constexpr int kCoinStart = 0;
inline constexpr int kCoinHeads = 1;
inline constexpr int kCoinTails = 2;

enum class CoinVariant { stochastic, deterministic_controlled };

// Stochastic variant: one action; the start state flips a fair coin.
inline TabularMdp make_coin_mdp_stochastic() {
    TabularMdp m = TabularMdp::zeros(3, 1);
    m.row(kCoinStart, 0)[kCoinHeads] = 0.5;
    m.row(kCoinStart, 0)[kCoinTails] = 0.5;
    m.row(kCoinHeads, 0)[kCoinHeads] = 1.0;
    m.row(kCoinTails, 0)[kCoinTails] = 1.0;
    m.reward(kCoinHeads, 0) = 1.0;
    m.initial_dist = {1.0, 0.0, 0.0};
    m.reward_bound = 1.0;
    m.validate();
    return m;
}

// Deterministic variant: two actions that fully determine the orientation
// (action 0 sets heads, action 1 sets tails, from every state).
inline constexpr int kSetHeads = 0;
inline constexpr int kSetTails = 1;

inline DeterministicMdp make_coin_mdp_deterministic() {
    DeterministicMdp m;
    m.n_states = 3;
    m.n_actions = 2;
    m.successor.assign(6, 0);
    m.rewards.assign(6, 0.0);
    for (int s = 0; s < 3; ++s) {
        m.successor[s * 2 + kSetHeads] = kCoinHeads;
        m.successor[s * 2 + kSetTails] = kCoinTails;
    }
    m.rewards[kCoinHeads * 2 + kSetHeads] = 1.0;
    m.rewards[kCoinHeads * 2 + kSetTails] = 1.0;
    m.initial_dist = {1.0, 0.0, 0.0};
    m.reward_bound = 1.0;
    return m;
}

// The blind policy that picks an orientation uniformly at random and then
// leaves the coin alone (keeps repeating the chosen setter action).
inline BlindPolicy make_coin_set_and_hold_policy() {
    return BlindPolicy::sequence_mixture(2, {{0.5, {kSetHeads}}, {0.5, {kSetTails}}});
}

}  // namespace hdmc

#endif  // HDMC_COIN_HPP

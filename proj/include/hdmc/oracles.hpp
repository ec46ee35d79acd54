#ifndef HDMC_ORACLES_HPP
#define HDMC_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "hdmc/common.hpp"
#include "hdmc/mdp.hpp"
#include "hdmc/policy.hpp"

namespace hdmc {

// Exact dynamic-programming oracles for small MDPs. Conventions:
//   D^1 = xi; D^t applies (transition, policy) t-1 times.
//   Q^pi_T(s,a) = sum_{t=1..T} gamma^{t-1} E_{D^t_{s,a,pi}}[R],  so Q^pi_1 = R.
// Blind-policy oracles enumerate the action-history tree; they are guarded
// by an oracle budget on n_states * n_actions^T.

inline constexpr double kDefaultOracleBudget = 1e7;

inline void check_blind_budget(int n_states, int n_actions, int horizon, double budget = kDefaultOracleBudget) {
    double cost = n_states * std::pow(static_cast<double>(n_actions), horizon);
    if (cost > budget)
        throw OracleBudgetError("oracle too large: n_states * n_actions^T = " + format_double(cost) +
                                " exceeds budget " + format_double(budget));
}

// ---------------------------------------------------------------------------
// Q values
// ---------------------------------------------------------------------------

// Q^pi_T for a Markov policy, all (s, a). Backward induction.
inline std::vector<double> exact_q_value(const TabularMdp& mdp, const MarkovPolicy& policy, int horizon,
                                         double gamma) {
    const int S = mdp.n_states, A = mdp.n_actions;
    std::vector<double> q(static_cast<std::size_t>(S) * A, 0.0);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) q[s * A + a] = mdp.reward(s, a);
    std::vector<double> next(q.size());
    for (int k = 2; k <= horizon; ++k) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                double acc = 0;
                auto row = mdp.row(s, a);
                for (int s2 = 0; s2 < S; ++s2) {
                    if (row[s2] == 0) continue;
                    double v = 0;
                    for (int a2 = 0; a2 < A; ++a2) v += policy.prob(s2, a2) * q[s2 * A + a2];
                    acc += row[s2] * v;
                }
                next[s * A + a] = mdp.reward(s, a) + gamma * acc;
            }
        }
        q.swap(next);
    }
    return q;
}

namespace detail {

// V_k(s | hist): value of executing the blind policy for k more steps from s,
// with the next action drawn from pi(. | hist). Returns a vector over states.
inline std::vector<double> blind_value(const TabularMdp& mdp, const BlindPolicy& policy, std::vector<int>& hist,
                                       int k, double gamma) {
    const int S = mdp.n_states, A = mdp.n_actions;
    std::vector<double> v(S, 0.0);
    if (k == 0) return v;
    auto probs = policy.action_probs(hist);
    for (int a = 0; a < A; ++a) {
        if (probs[a] == 0) continue;
        hist.push_back(a);
        std::vector<double> cont;
        if (k > 1) cont = blind_value(mdp, policy, hist, k - 1, gamma);
        hist.pop_back();
        for (int s = 0; s < S; ++s) {
            double x = mdp.reward(s, a);
            if (k > 1) {
                double acc = 0;
                auto row = mdp.row(s, a);
                for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * cont[s2];
                x += gamma * acc;
            }
            v[s] += probs[a] * x;
        }
    }
    return v;
}

}  // namespace detail

// Q^pi_T for a blind policy: the forced first action enters the policy's
// action history. Exponential in T; budget-guarded.
inline std::vector<double> exact_q_value(const TabularMdp& mdp, const BlindPolicy& policy, int horizon, double gamma,
                                         double budget = kDefaultOracleBudget) {
    check_blind_budget(mdp.n_states, mdp.n_actions, horizon, budget);
    const int S = mdp.n_states, A = mdp.n_actions;
    std::vector<double> q(static_cast<std::size_t>(S) * A, 0.0);
    for (int a = 0; a < A; ++a) {
        std::vector<int> hist{a};
        std::vector<double> cont;
        if (horizon > 1) cont = detail::blind_value(mdp, policy, hist, horizon - 1, gamma);
        for (int s = 0; s < S; ++s) {
            double x = mdp.reward(s, a);
            if (horizon > 1) {
                double acc = 0;
                auto row = mdp.row(s, a);
                for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * cont[s2];
                x += gamma * acc;
            }
            q[s * A + a] = x;
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Occupancy distributions
// ---------------------------------------------------------------------------

// One exact propagation step: apply P, then the Markov policy.
inline StateActionDist propagate_markov(const TabularMdp& mdp, const StateActionDist& d,
                                        const MarkovPolicy& policy) {
    const int S = mdp.n_states, A = mdp.n_actions;
    StateActionDist out = StateActionDist::zeros(S, A);
    std::vector<double> state_mass(S, 0.0);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double w = d(s, a);
            if (w == 0) continue;
            auto row = mdp.row(s, a);
            for (int s2 = 0; s2 < S; ++s2) state_mass[s2] += w * row[s2];
        }
    for (int s2 = 0; s2 < S; ++s2)
        for (int a2 = 0; a2 < A; ++a2) out(s2, a2) = state_mass[s2] * policy.prob(s2, a2);
    return out;
}

// D^t_{xi,pi} for a Markov policy.
inline StateActionDist exact_state_action_dist(const TabularMdp& mdp, const StateActionDist& xi,
                                               const MarkovPolicy& policy, int t) {
    StateActionDist d = xi;
    for (int k = 1; k < t; ++k) d = propagate_markov(mdp, d, policy);
    return d;
}

namespace detail {

// Enumerates action histories for a blind policy, propagating a state
// distribution per history branch; calls sink(weight, state_dist, last_action)
// after `steps` transitions.
inline void blind_forward(const TabularMdp& mdp, const BlindPolicy& policy, std::vector<double>& state_dist,
                          std::vector<int>& hist, double weight, int steps,
                          const std::function<void(double, const std::vector<double>&, int)>& sink) {
    if (steps == 0) {
        sink(weight, state_dist, hist.back());
        return;
    }
    const int S = mdp.n_states;
    std::vector<double> pushed(S, 0.0);
    for (int s = 0; s < S; ++s) {
        double w = state_dist[s];
        if (w == 0) continue;
        auto row = mdp.row(s, hist.back());
        for (int s2 = 0; s2 < S; ++s2) pushed[s2] += w * row[s2];
    }
    auto probs = policy.action_probs(hist);
    for (int a = 0; a < mdp.n_actions; ++a) {
        if (probs[a] == 0) continue;
        hist.push_back(a);
        blind_forward(mdp, policy, pushed, hist, weight * probs[a], steps - 1, sink);
        hist.pop_back();
    }
}

}  // namespace detail

// D^t_{xi,pi} for a blind policy.
inline StateActionDist exact_state_action_dist(const TabularMdp& mdp, const StateActionDist& xi,
                                               const BlindPolicy& policy, int t,
                                               double budget = kDefaultOracleBudget) {
    check_blind_budget(mdp.n_states, mdp.n_actions, t, budget);
    const int S = mdp.n_states, A = mdp.n_actions;
    StateActionDist out = StateActionDist::zeros(S, A);
    for (int s1 = 0; s1 < S; ++s1) {
        for (int a1 = 0; a1 < A; ++a1) {
            double w = xi(s1, a1);
            if (w == 0) continue;
            std::vector<double> dist(S, 0.0);
            dist[s1] = 1.0;
            std::vector<int> hist{a1};
            detail::blind_forward(mdp, policy, dist, hist, w, t - 1,
                                  [&](double bw, const std::vector<double>& sd, int last_a) {
                                      for (int s = 0; s < S; ++s) out(s, last_a) += bw * sd[s];
                                  });
        }
    }
    return out;
}

// Joint distribution over (environment (s,a), model (z,b)) after t steps, the
// two chains run independently from a shared initial pair drawn from xi.
struct JointDist {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> weights;  // [(s,a)][(z,b)]

    double& at(int s, int a, int z, int b) {
        int n = n_states * n_actions;
        return weights[static_cast<std::size_t>(s * n_actions + a) * n + (z * n_actions + b)];
    }
    double at(int s, int a, int z, int b) const {
        int n = n_states * n_actions;
        return weights[static_cast<std::size_t>(s * n_actions + a) * n + (z * n_actions + b)];
    }
    double total() const {
        double t = 0;
        for (double w : weights) t += w;
        return t;
    }
    StateActionDist env_marginal() const {
        StateActionDist d = StateActionDist::zeros(n_states, n_actions);
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a)
                for (int z = 0; z < n_states; ++z)
                    for (int b = 0; b < n_actions; ++b) d(s, a) += at(s, a, z, b);
        return d;
    }
    StateActionDist model_marginal() const {
        StateActionDist d = StateActionDist::zeros(n_states, n_actions);
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a)
                for (int z = 0; z < n_states; ++z)
                    for (int b = 0; b < n_actions; ++b) d(z, b) += at(s, a, z, b);
        return d;
    }
};

inline JointDist exact_joint_dist(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                                  const MarkovPolicy& policy, int t) {
    const int S = mdp.n_states, A = mdp.n_actions;
    JointDist j;
    j.n_states = S;
    j.n_actions = A;
    j.weights.assign(static_cast<std::size_t>(S) * A * S * A, 0.0);
    for (int s1 = 0; s1 < S; ++s1) {
        for (int a1 = 0; a1 < A; ++a1) {
            double w = xi(s1, a1);
            if (w == 0) continue;
            StateActionDist d = StateActionDist::point_mass(S, A, s1, a1);
            StateActionDist dh = d;
            for (int k = 1; k < t; ++k) {
                d = propagate_markov(mdp, d, policy);
                dh = propagate_markov(model, dh, policy);
            }
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) {
                    if (d(s, a) == 0) continue;
                    for (int z = 0; z < S; ++z)
                        for (int b = 0; b < A; ++b) j.at(s, a, z, b) += w * d(s, a) * dh(z, b);
                }
        }
    }
    return j;
}

namespace detail {

// After-t-steps state-action distribution when the first action is drawn by
// the policy itself from a point start state (used by the state-sourced joint).
template <class Policy>
inline StateActionDist dist_from_state(const TabularMdp& dyn, int s1, const Policy& policy, int t) {
    const int S = dyn.n_states, A = dyn.n_actions;
    StateActionDist d = StateActionDist::zeros(S, A);
    if constexpr (std::is_same_v<Policy, MarkovPolicy>) {
        for (int a = 0; a < A; ++a) d(s1, a) = policy.prob(s1, a);
        for (int k = 1; k < t; ++k) d = propagate_markov(dyn, d, policy);
    } else {
        std::vector<int> empty_hist;
        auto first = policy.action_probs(empty_hist);
        for (int a1 = 0; a1 < A; ++a1) {
            if (first[a1] == 0) continue;
            std::vector<double> dist(S, 0.0);
            dist[s1] = 1.0;
            std::vector<int> hist{a1};
            blind_forward(dyn, policy, dist, hist, first[a1], t - 1,
                          [&](double bw, const std::vector<double>& sd, int last_a) {
                              for (int s = 0; s < S; ++s) d(s, last_a) += bw * sd[s];
                          });
        }
    }
    return d;
}

}  // namespace detail

// Joint over (env (s,a), model (z,b)) when only the start STATE is shared and
// each chain samples its own actions from the policy. This is the construction
// in which a stochastic policy decouples the two chains even under a perfect
// model in a deterministic environment.
template <class Policy>
inline JointDist exact_joint_dist_from_states(const TabularMdp& mdp, const TabularMdp& model,
                                              const std::vector<double>& mu, const Policy& policy, int t,
                                              double budget = kDefaultOracleBudget) {
    const int S = mdp.n_states, A = mdp.n_actions;
    if constexpr (!std::is_same_v<Policy, MarkovPolicy>) check_blind_budget(S, A, t, budget);
    JointDist j;
    j.n_states = S;
    j.n_actions = A;
    j.weights.assign(static_cast<std::size_t>(S) * A * S * A, 0.0);
    for (int s1 = 0; s1 < S; ++s1) {
        double w = mu[s1];
        if (w == 0) continue;
        StateActionDist d = detail::dist_from_state(mdp, s1, policy, t);
        StateActionDist dh = detail::dist_from_state(model, s1, policy, t);
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                if (d(s, a) == 0) continue;
                for (int z = 0; z < S; ++z)
                    for (int b = 0; b < A; ++b) j.at(s, a, z, b) += w * d(s, a) * dh(z, b);
            }
    }
    return j;
}

// H^t: distribution over (environment state, model state, action) when ONE
// action sequence is sampled from a blind policy and executed in both the
// deterministic environment and the model. H^1(s, z, a) = xi(s, a) * 1[z = s].
struct PairedDist {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> weights;  // [s][z][a]

    double& at(int s, int z, int a) {
        return weights[(static_cast<std::size_t>(s) * n_states + z) * n_actions + a];
    }
    double at(int s, int z, int a) const {
        return weights[(static_cast<std::size_t>(s) * n_states + z) * n_actions + a];
    }
    double total() const {
        double t = 0;
        for (double w : weights) t += w;
        return t;
    }
};

inline PairedDist exact_h_dist(const DeterministicMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                               const BlindPolicy& policy, int t, double budget = kDefaultOracleBudget) {
    if (policy.n_actions != mdp.n_actions) throw ConfigError("exact_h_dist: action-count mismatch");
    check_blind_budget(mdp.n_states, mdp.n_actions, t, budget);
    const int S = mdp.n_states, A = mdp.n_actions;
    PairedDist h;
    h.n_states = S;
    h.n_actions = A;
    h.weights.assign(static_cast<std::size_t>(S) * S * A, 0.0);

    // go: env_state is exact; zdist is the model's marginal given the history.
    std::function<void(int, std::vector<double>&, std::vector<int>&, double, int)> go =
        [&](int env_state, std::vector<double>& zdist, std::vector<int>& hist, double weight, int remaining) {
            if (remaining == 0) {
                int a = hist.back();
                for (int z = 0; z < S; ++z)
                    if (zdist[z] != 0) h.at(env_state, z, a) += weight * zdist[z];
                return;
            }
            int a = hist.back();
            int env2 = mdp.next(env_state, a);
            std::vector<double> z2(S, 0.0);
            for (int z = 0; z < S; ++z) {
                if (zdist[z] == 0) continue;
                auto row = model.row(z, a);
                for (int zz = 0; zz < S; ++zz) z2[zz] += zdist[z] * row[zz];
            }
            auto probs = policy.action_probs(hist);
            for (int a2 = 0; a2 < A; ++a2) {
                if (probs[a2] == 0) continue;
                hist.push_back(a2);
                go(env2, z2, hist, weight * probs[a2], remaining - 1);
                hist.pop_back();
            }
        };

    for (int s1 = 0; s1 < S; ++s1) {
        for (int a1 = 0; a1 < A; ++a1) {
            double w = xi(s1, a1);
            if (w == 0) continue;
            std::vector<double> zdist(S, 0.0);
            zdist[s1] = 1.0;
            std::vector<int> hist{a1};
            go(s1, zdist, hist, w, t - 1);
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct EpisodeStep {
    int state;
    int action;
    double reward;
    int next_state;
};

struct Episode {
    std::vector<EpisodeStep> steps;
    double discounted_return = 0;
};

inline Episode sample_episode(const TabularMdp& mdp, const std::function<int(int)>& policy_fn, int length,
                              double gamma, Rng& rng) {
    Episode ep;
    int s = rng.categorical(std::span<const double>(mdp.initial_dist));
    double discount = 1.0;
    for (int t = 0; t < length; ++t) {
        int a = policy_fn(s);
        double r = mdp.reward(s, a);
        int s2 = rng.categorical(mdp.row(s, a));
        ep.steps.push_back({s, a, r, s2});
        ep.discounted_return += discount * r;
        discount *= gamma;
        s = s2;
    }
    return ep;
}

}  // namespace hdmc

#endif  // HDMC_ORACLES_HPP

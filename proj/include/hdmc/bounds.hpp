#ifndef HDMC_BOUNDS_HPP
#define HDMC_BOUNDS_HPP

#include <cmath>
#include <string>

#include "hdmc/mdp.hpp"
#include "hdmc/oracles.hpp"
#include "hdmc/policy.hpp"

namespace hdmc {

// Exact value-error and the bound families that control it, computed by the
// enumeration oracles. Conventions: D^1 = xi; M is the width of the reward
// range; all sums follow the finite-horizon forms
//   one-step:            (M/(1-g)) sum_{t=1}^{T-1} (g^t - g^T) E_{D^t}[ |P_s^a - Ph_s^a|_1 ]
//   multi-step:          M sum_{t=1}^{T} g^{t-1} E_xi[ |D^t_{s,a} - Dh^t_{s,a}|_1 ]
//   hallucinated joint:  M sum_{t=1}^{T-1} g^t E_{J^t}[ |P_s^a - Ph_z^b|_1 ]
//   hallucinated paired: 2M sum_{t=1}^{T-1} g^t E_{H^t}[ 1 - Ph_z^a(sigma_s^a) ]
//   one-step (det.):     (2M/(1-g)) sum_{t=1}^{T-1} (g^t - g^T) E_{D^t}[ 1 - Ph_s^a(sigma_s^a) ]

inline double l1_distance(std::span<const double> p, std::span<const double> q) {
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return d;
}

// ---------------------------------------------------------------------------
// eps_val
// ---------------------------------------------------------------------------

template <class Policy>
double value_error(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                   const Policy& policy, int T, double gamma) {
    auto q = exact_q_value(mdp, policy, T, gamma);
    auto qh = exact_q_value(model, policy, T, gamma);
    double acc = 0;
    for (int s = 0; s < mdp.n_states; ++s)
        for (int a = 0; a < mdp.n_actions; ++a) {
            double w = xi(s, a);
            if (w == 0) continue;
            acc += w * std::abs(q[s * mdp.n_actions + a] - qh[s * mdp.n_actions + a]);
        }
    return acc;
}

// ---------------------------------------------------------------------------
// One-step bounds
// ---------------------------------------------------------------------------

namespace detail {

// E_{D^t}[ |P_s^a - Ph_s^a|_1 ] folded into sum_t (g^t - g^T) weights.
template <class Policy>
double one_step_weighted_sum(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                             const Policy& policy, int T, double gamma,
                             bool deterministic_form, const DeterministicMdp* det) {
    double acc = 0;
    double g_T = std::pow(gamma, T);
    for (int t = 1; t <= T - 1; ++t) {
        StateActionDist d = exact_state_action_dist(mdp, xi, policy, t);
        double term = 0;
        for (int s = 0; s < mdp.n_states; ++s)
            for (int a = 0; a < mdp.n_actions; ++a) {
                double w = d(s, a);
                if (w == 0) continue;
                if (deterministic_form)
                    term += w * (1.0 - model.prob(s, a, det->next(s, a)));
                else
                    term += w * l1_distance(mdp.row(s, a), model.row(s, a));
            }
        acc += (std::pow(gamma, t) - g_T) * term;
    }
    return acc;
}

}  // namespace detail

template <class Policy>
double one_step_bound(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                      const Policy& policy, int T, double gamma, double M) {
    return M / (1.0 - gamma) *
           detail::one_step_weighted_sum(mdp, model, xi, policy, T, gamma, false, nullptr);
}

// Theorem-final deterministic form: (2M/(1-g)) sum (g^t - g^T) E_{D^t}[1 - Ph_s^a(sigma_s^a)].
inline double one_step_bound_deterministic(const DeterministicMdp& mdp, const TabularMdp& model,
                                           const StateActionDist& xi, const BlindPolicy& policy, int T,
                                           double gamma, double M) {
    TabularMdp env = mdp.to_tabular();
    return 2.0 * M / (1.0 - gamma) *
           detail::one_step_weighted_sum(env, model, xi, policy, T, gamma, true, &mdp);
}

// ---------------------------------------------------------------------------
// Multi-step bound
// ---------------------------------------------------------------------------

template <class Policy>
double multi_step_bound(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                        const Policy& policy, int T, double gamma, double M) {
    const int S = mdp.n_states, A = mdp.n_actions;
    double acc = 0;
    for (int s1 = 0; s1 < S; ++s1)
        for (int a1 = 0; a1 < A; ++a1) {
            double w = xi(s1, a1);
            if (w == 0) continue;
            StateActionDist src = StateActionDist::point_mass(S, A, s1, a1);
            double per_source = 0;
            for (int t = 1; t <= T; ++t) {
                StateActionDist d = exact_state_action_dist(mdp, src, policy, t);
                StateActionDist dh = exact_state_action_dist(model, src, policy, t);
                per_source += std::pow(gamma, t - 1) * l1_distance(d.weights, dh.weights);
            }
            acc += w * per_source;
        }
    return M * acc;
}

// ---------------------------------------------------------------------------
// Hallucinated bounds
// ---------------------------------------------------------------------------

// E_{J^t}[ |P_s^a - Ph_z^b|_1 ] for one t (the quantity behind the
// perfect-model counterexample on the stochastic coin).
inline double joint_one_step_expectation(const TabularMdp& mdp, const TabularMdp& model, const JointDist& joint) {
    double acc = 0;
    for (int s = 0; s < joint.n_states; ++s)
        for (int a = 0; a < joint.n_actions; ++a)
            for (int z = 0; z < joint.n_states; ++z)
                for (int b = 0; b < joint.n_actions; ++b) {
                    double w = joint.at(s, a, z, b);
                    if (w == 0) continue;
                    acc += w * l1_distance(mdp.row(s, a), model.row(z, b));
                }
    return acc;
}

inline double hallucinated_joint_bound(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                                       const MarkovPolicy& policy, int T, double gamma, double M) {
    double acc = 0;
    for (int t = 1; t <= T - 1; ++t) {
        JointDist j = exact_joint_dist(mdp, model, xi, policy, t);
        acc += std::pow(gamma, t) * joint_one_step_expectation(mdp, model, j);
    }
    return M * acc;
}

// The paired-execution (blind-policy, deterministic-environment) bound.
inline double hallucinated_blind_bound(const DeterministicMdp& mdp, const TabularMdp& model,
                                       const StateActionDist& xi, const BlindPolicy& policy, int T, double gamma,
                                       double M) {
    double acc = 0;
    for (int t = 1; t <= T - 1; ++t) {
        PairedDist h = exact_h_dist(mdp, model, xi, policy, t);
        double term = 0;
        for (int s = 0; s < h.n_states; ++s)
            for (int z = 0; z < h.n_states; ++z)
                for (int a = 0; a < h.n_actions; ++a) {
                    double w = h.at(s, z, a);
                    if (w == 0) continue;
                    term += w * (1.0 - model.prob(z, a, mdp.next(s, a)));
                }
        acc += std::pow(gamma, t) * term;
    }
    return 2.0 * M * acc;
}

// Hallucinated one-step expectation when the two chains share only the start
// STATE and each samples its own actions: the quantity that stays positive
// for a perfect model even in a deterministic environment.
template <class Policy>
double independent_execution_expectation(const TabularMdp& mdp, const TabularMdp& model,
                                         const std::vector<double>& mu, const Policy& policy, int t) {
    JointDist j = exact_joint_dist_from_states(mdp, model, mu, policy, t);
    return joint_one_step_expectation(mdp, model, j);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

// All bound values for one (model, policy, xi, T, gamma, M) configuration on
// a stochastic MDP with a Markov policy.
struct ErrorReport {
    double eps_val = 0;
    double one_step = 0;
    double multi_step = 0;
    double hallucinated_joint = 0;
    int T = 0;
    double gamma = 0;
    double M = 0;
};

inline ErrorReport compute_error_report(const TabularMdp& mdp, const TabularMdp& model, const StateActionDist& xi,
                                        const MarkovPolicy& policy, int T, double gamma, double M) {
    ErrorReport r;
    r.eps_val = value_error(mdp, model, xi, policy, T, gamma);
    r.one_step = one_step_bound(mdp, model, xi, policy, T, gamma, M);
    r.multi_step = multi_step_bound(mdp, model, xi, policy, T, gamma, M);
    r.hallucinated_joint = hallucinated_joint_bound(mdp, model, xi, policy, T, gamma, M);
    r.T = T;
    r.gamma = gamma;
    r.M = M;
    return r;
}

// The tightness chain on a deterministic environment with a blind policy:
//   eps_val <= multi_step <= hallucinated_paired <= scaled one-step.
struct ChainReport {
    double eps_val = 0;
    double multi_step = 0;
    double hallucinated_blind = 0;
    double one_step_scaled = 0;
    bool holds = false;
    std::string violation;  // which link failed, if any
};

inline ChainReport verify_tightness_chain(const DeterministicMdp& mdp, const TabularMdp& model,
                                          const StateActionDist& xi, const BlindPolicy& policy, int T, double gamma,
                                          double M, double slack = 1e-9) {
    TabularMdp env = mdp.to_tabular();
    ChainReport r;
    r.eps_val = value_error(env, model, xi, policy, T, gamma);
    r.multi_step = multi_step_bound(env, model, xi, policy, T, gamma, M);
    r.hallucinated_blind = hallucinated_blind_bound(mdp, model, xi, policy, T, gamma, M);
    r.one_step_scaled = one_step_bound_deterministic(mdp, model, xi, policy, T, gamma, M);
    r.holds = true;
    if (r.eps_val > r.multi_step + slack) {
        r.holds = false;
        r.violation = "eps_val > multi_step";
    } else if (r.multi_step > r.hallucinated_blind + slack) {
        r.holds = false;
        r.violation = "multi_step > hallucinated_blind";
    } else if (r.hallucinated_blind > r.one_step_scaled + slack) {
        r.holds = false;
        r.violation = "hallucinated_blind > one_step_scaled";
    }
    return r;
}

}  // namespace hdmc

#endif  // HDMC_BOUNDS_HPP

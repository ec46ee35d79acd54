#ifndef HDMC_MDP_HPP
#define HDMC_MDP_HPP

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <span>
#include <vector>

#include "hdmc/common.hpp"

namespace hdmc {

// Enumerable MDP with a dense transition tensor. Rewards are stored
// unshifted; reward_bound is the width of the reward range (max - min),
// which is the M that enters every bound formula.
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> transitions;   // [s][a][s'], flattened
    std::vector<double> rewards;       // [s][a]
    std::vector<double> initial_dist;  // mu over states
    double reward_bound = 0;           // M

    std::span<const double> row(int s, int a) const {
        return {transitions.data() + static_cast<std::size_t>(s * n_actions + a) * n_states,
                static_cast<std::size_t>(n_states)};
    }
    std::span<double> row(int s, int a) {
        return {transitions.data() + static_cast<std::size_t>(s * n_actions + a) * n_states,
                static_cast<std::size_t>(n_states)};
    }
    double prob(int s, int a, int s2) const { return row(s, a)[s2]; }
    double reward(int s, int a) const { return rewards[s * n_actions + a]; }
    double& reward(int s, int a) { return rewards[s * n_actions + a]; }

    void validate(double tol = 1e-12) const {
        if (n_states < 1 || n_actions < 1) throw ConfigError("TabularMdp: empty state/action space");
        for (int s = 0; s < n_states; ++s) {
            for (int a = 0; a < n_actions; ++a) {
                double sum = 0;
                for (double p : row(s, a)) {
                    if (p < 0) throw ConfigError("TabularMdp: negative transition probability");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > tol) throw ConfigError("TabularMdp: transition row does not sum to 1");
            }
        }
        double mu = 0;
        for (double p : initial_dist) mu += p;
        if (std::abs(mu - 1.0) > tol) throw ConfigError("TabularMdp: initial distribution does not sum to 1");
    }

    static TabularMdp zeros(int n_states, int n_actions) {
        TabularMdp m;
        m.n_states = n_states;
        m.n_actions = n_actions;
        m.transitions.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
        m.rewards.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
        m.initial_dist.assign(n_states, 0.0);
        return m;
    }
};

// Deterministic MDP: successor function instead of a transition tensor.
struct DeterministicMdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<int> successor;        // [s][a]
    std::vector<double> rewards;       // [s][a]
    std::vector<double> initial_dist;  // mu
    double reward_bound = 0;

    int next(int s, int a) const { return successor[s * n_actions + a]; }
    double reward(int s, int a) const { return rewards[s * n_actions + a]; }

    TabularMdp to_tabular() const {
        TabularMdp m = TabularMdp::zeros(n_states, n_actions);
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a) m.row(s, a)[next(s, a)] = 1.0;
        m.rewards = rewards;
        m.initial_dist = initial_dist;
        m.reward_bound = reward_bound;
        return m;
    }
};

// Distribution over (s, a) pairs, stored dense.
struct StateActionDist {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> weights;  // [s][a]

    static StateActionDist zeros(int n_states, int n_actions) {
        StateActionDist d;
        d.n_states = n_states;
        d.n_actions = n_actions;
        d.weights.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
        return d;
    }
    static StateActionDist point_mass(int n_states, int n_actions, int s, int a) {
        StateActionDist d = zeros(n_states, n_actions);
        d(s, a) = 1.0;
        return d;
    }
    double& operator()(int s, int a) { return weights[s * n_actions + a]; }
    double operator()(int s, int a) const { return weights[s * n_actions + a]; }
    double total() const {
        double t = 0;
        for (double w : weights) t += w;
        return t;
    }
    void validate(double tol = 1e-12) const {
        for (double w : weights)
            if (w < 0) throw ConfigError("StateActionDist: negative weight");
        if (std::abs(total() - 1.0) > tol) throw ConfigError("StateActionDist: weights do not sum to 1");
    }
};

// ---------------------------------------------------------------------------
// Text serialization. Format:
//   states S
//   actions A
//   reward_bound M
//   mu m(0) ... m(S-1)
//   s a p(0) p(1) ... p(S-1) r        (one record per state-action pair)
// ---------------------------------------------------------------------------

inline void write_mdp(std::ostream& os, const TabularMdp& m) {
    os << "states " << m.n_states << "\n";
    os << "actions " << m.n_actions << "\n";
    os << "reward_bound " << format_double(m.reward_bound) << "\n";
    os << "mu";
    for (double p : m.initial_dist) os << " " << format_double(p);
    os << "\n";
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            os << s << " " << a;
            for (double p : m.row(s, a)) os << " " << format_double(p);
            os << " " << format_double(m.reward(s, a)) << "\n";
        }
    }
}

inline TabularMdp read_mdp(std::istream& is) {
    std::string tag;
    TabularMdp m;
    int line = 1;
    if (!(is >> tag) || tag != "states" || !(is >> m.n_states)) throw ParseError("expected 'states N'", line);
    ++line;
    if (!(is >> tag) || tag != "actions" || !(is >> m.n_actions)) throw ParseError("expected 'actions N'", line);
    ++line;
    if (!(is >> tag) || tag != "reward_bound" || !(is >> m.reward_bound))
        throw ParseError("expected 'reward_bound M'", line);
    ++line;
    if (m.n_states < 1 || m.n_actions < 1) throw ParseError("invalid state/action counts", line);
    m.initial_dist.assign(m.n_states, 0.0);
    if (!(is >> tag) || tag != "mu") throw ParseError("expected 'mu ...'", line);
    for (int s = 0; s < m.n_states; ++s)
        if (!(is >> m.initial_dist[s])) throw ParseError("truncated mu record", line);
    ++line;
    m.transitions.assign(static_cast<std::size_t>(m.n_states) * m.n_actions * m.n_states, 0.0);
    m.rewards.assign(static_cast<std::size_t>(m.n_states) * m.n_actions, 0.0);
    for (int i = 0; i < m.n_states * m.n_actions; ++i, ++line) {
        int s, a;
        if (!(is >> s >> a)) throw ParseError("truncated transition record", line);
        if (s < 0 || s >= m.n_states || a < 0 || a >= m.n_actions)
            throw ParseError("state/action index out of range", line);
        for (int s2 = 0; s2 < m.n_states; ++s2)
            if (!(is >> m.row(s, a)[s2])) throw ParseError("truncated transition row", line);
        if (!(is >> m.reward(s, a))) throw ParseError("missing reward", line);
    }
    m.validate(1e-9);
    return m;
}

inline std::string mdp_to_string(const TabularMdp& m) {
    std::ostringstream os;
    write_mdp(os, m);
    return os.str();
}

inline TabularMdp mdp_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_mdp(is);
}

}  // namespace hdmc

#endif  // HDMC_MDP_HPP

#ifndef HDMC_PLANNER_HPP
#define HDMC_PLANNER_HPP

#include <vector>

#include "absl/container/flat_hash_map.h"

#include "hdmc/common.hpp"
#include "hdmc/factored_model.hpp"
#include "hdmc/mdp.hpp"
#include "hdmc/policy.hpp"
#include "hdmc/shooter.hpp"

namespace hdmc {

// One-ply Monte Carlo planning: for each first action, average the
// discounted return of N depth-T rollouts whose later actions come from one
// blind rollout-policy sequence; act greedily, ties broken uniformly.
//
// A simulator provides:
//   using State = ...;
//   double step(State& s, int action, int depth, Rng& rng) const;
// step advances s in place (depth is 1-based, for per-depth model stacks)
// and returns the reward of the transition; rewards are known to the
// planner by construction.

struct PlanSpec {
    int n_rollouts = 1;   // N
    int depth = 1;        // T
    double gamma = 0.9;
    BlindPolicy rollout_policy;

    void validate() const {
        if (n_rollouts < 1 || depth < 1 || gamma < 0 || gamma >= 1) throw ConfigError("PlanSpec: bad parameters");
    }
};

struct QEstimate {
    std::vector<double> q_bar;  // per-action mean discounted return
    int n = 0;                  // rollouts per action
};

template <class Sim>
double rollout_return(const Sim& sim, typename Sim::State state, int first_action, const PlanSpec& spec,
                      Rng& rng) {
    double ret = 0, discount = 1;
    std::vector<int> hist{first_action};
    int a = first_action;
    for (int t = 1; t <= spec.depth; ++t) {
        ret += discount * sim.step(state, a, t, rng);
        discount *= spec.gamma;
        if (t < spec.depth) {
            a = spec.rollout_policy.sample(hist, rng);
            hist.push_back(a);
        }
    }
    return ret;
}

template <class Sim>
std::pair<int, QEstimate> plan_action(const Sim& sim, const typename Sim::State& state, int n_actions,
                                      const PlanSpec& spec, Rng& rng) {
    QEstimate est;
    est.n = spec.n_rollouts;
    est.q_bar.assign(n_actions, 0.0);
    for (int a = 0; a < n_actions; ++a) {
        double acc = 0;
        for (int i = 0; i < spec.n_rollouts; ++i) acc += rollout_return(sim, state, a, spec, rng);
        est.q_bar[a] = acc / spec.n_rollouts;
    }
    double best = est.q_bar[0];
    for (double q : est.q_bar) best = std::max(best, q);
    std::vector<int> tied;
    for (int a = 0; a < n_actions; ++a)
        if (est.q_bar[a] == best) tied.push_back(a);
    int pick = tied[tied.size() == 1 ? 0 : rng.uniform_int(static_cast<int>(tied.size()))];
    return {pick, est};
}

// Stateless greedy policy: re-plans at every decision, seeded per decision by
// the state's hash so the whole policy is a pure function of (seed, state).
// A per-instance cache avoids re-planning repeated states; clear it whenever
// the underlying model changes.
template <class Sim>
class McPolicy {
  public:
    McPolicy(const Sim& sim, int n_actions, PlanSpec spec, std::uint64_t seed)
        : sim_(&sim), n_actions_(n_actions), spec_(std::move(spec)), seed_(seed) {}

    int act(const typename Sim::State& state, std::uint64_t state_hash) {
        auto it = cache_.find(state_hash);
        if (it != cache_.end()) return it->second;
        Rng rng(derive_seed(seed_, state_hash));
        int a = plan_action(*sim_, state, n_actions_, spec_, rng).first;
        cache_.emplace(state_hash, a);
        return a;
    }

    void clear_cache() { cache_.clear(); }

  private:
    const Sim* sim_;
    int n_actions_;
    PlanSpec spec_;
    std::uint64_t seed_;
    absl::flat_hash_map<std::uint64_t, int> cache_;
};

// ---------------------------------------------------------------------------
// Simulators
// ---------------------------------------------------------------------------

// True tabular dynamics (also serves as a "perfect model" simulator).
struct TabularSim {
    using State = int;
    const TabularMdp* mdp;

    double step(State& s, int action, int /*depth*/, Rng& rng) const {
        double r = mdp->reward(s, action);
        s = rng.categorical(mdp->row(s, action));
        return r;
    }
};

// Learned tabular count model; rewards come from the known reward table.
struct TabularModelSim {
    using State = int;
    const TabularModel* model;
    const TabularMdp* reward_source;

    double step(State& s, int action, int /*depth*/, Rng& rng) const {
        double r = reward_source->reward(s, action);
        s = model->sample(s, action, rng);
        return r;
    }
};

// Per-depth factored frame model. Depths beyond the deepest trained depth
// repeatedly apply the deepest model to complete the rollout; before any
// depth is trained, the depth-1 prior is used.
struct FrameModelSim {
    using State = PixelGrid;
    const UnrolledModel* model;
    const ShooterConfig* cfg;
    int trained_depth = 0;

    double step(State& frame, int action, int depth, Rng& rng) const {
        double r = shooter_frame_reward(frame, action, *cfg);
        int d = std::min(depth, std::max(1, trained_depth));
        frame = model->at_depth(d).sample_next(frame, action, rng);
        return r;
    }
};

// The real game as its own simulator (the perfect-model baseline).
struct ShooterEnvSim {
    using State = ShooterState;
    const ShooterConfig* cfg;

    double step(State& s, int action, int /*depth*/, Rng& /*rng*/) const { return shooter_step(s, action, *cfg); }
};

}  // namespace hdmc

#endif  // HDMC_PLANNER_HPP

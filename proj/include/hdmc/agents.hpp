#ifndef HDMC_AGENTS_HPP
#define HDMC_AGENTS_HPP

#include <string>
#include <vector>

#include "hdmc/common.hpp"
#include "hdmc/factored_model.hpp"
#include "hdmc/planner.hpp"
#include "hdmc/shooter.hpp"

namespace hdmc {

// Online model-learning agents for the Shooter environment. Each iteration:
// sample K start pairs from the exploration mixture, generate training
// rollouts against the frozen model, batch-apply the updates, then evaluate
// the re-planned greedy policy for one episode.
//
// Variants:
//   h_dagger_mc - training inputs are the model's own sampled states z
//                 (hallucinated), one dataset per rollout depth.
//   dagger_mc   - same rollout structure, but inputs are environment states.
//   dagger      - environment trajectories under the current greedy policy,
//                 one single dataset/model used at every depth.

enum class AgentVariant { h_dagger_mc, dagger_mc, dagger };

inline std::string variant_name(AgentVariant v) {
    switch (v) {
        case AgentVariant::h_dagger_mc: return "h_dagger_mc";
        case AgentVariant::dagger_mc: return "dagger_mc";
        case AgentVariant::dagger: return "dagger";
    }
    throw ConfigError("unknown agent variant");
}

// Iteration index -> maximum training-rollout depth: floor(i/10), clamped by
// the optional permanent cap and by the number of per-depth models (T-1).
struct TrainingSchedule {
    int max_depth = 1;       // T-1
    int permanent_cap = -1;  // <0: no cap

    int depth(int iteration) const {
        int d = iteration / 10;
        if (permanent_cap >= 0) d = std::min(d, permanent_cap);
        return std::min(d, max_depth);
    }
};

struct AgentConfig {
    AgentVariant variant = AgentVariant::h_dagger_mc;
    ModelMode model_mode = ModelMode::unrolled;
    int n_iterations = 60;
    int rollouts_per_iteration = 100;  // K
    PlanSpec plan_spec;
    int permanent_cap = -1;
    double model_alpha = 0.5;
    double model_persist = 0.0;  // pseudo-count on "pixel keeps its symbol"
    int context_radius = 3;      // neighborhood half-width of the per-pixel model
    std::size_t max_contexts = 50'000'000;

    void validate() const {
        if (n_iterations < 1 || rollouts_per_iteration < 1) throw ConfigError("AgentConfig: bad counts");
        if (context_radius < 1) throw ConfigError("AgentConfig: context_radius must be >= 1");
        plan_spec.validate();
    }
};

inline std::uint64_t shooter_state_hash(const ShooterState& st) {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(st.ship_col) + 0x100);
    for (const ShooterBullet& b : st.bullets)
        h = splitmix64(h ^ (static_cast<std::uint64_t>(b.row) << 16) ^ static_cast<std::uint64_t>(b.col));
    for (const ShooterTarget& t : st.targets) {
        std::uint64_t enc = (t.alive ? 1u : 0u) | (static_cast<std::uint64_t>(t.bullseye_col) << 1) |
                            (static_cast<std::uint64_t>(t.dir > 0 ? 1 : 0) << 9);
        h = splitmix64(h ^ enc);
    }
    return h;
}

// Exploration distribution nu: follow the scripted near-optimal policy from
// the start with per-step termination probability (1 - gamma); returns the
// state reached and the expert's action there.
inline std::pair<ShooterState, int> sample_nu(const ShooterConfig& cfg, double gamma, Rng& rng) {
    ShooterState st = shooter_reset(cfg);
    for (int step = 0; step < cfg.episode_length; ++step) {
        int a = scripted_expert(st, cfg);
        if (rng.bernoulli(1.0 - gamma)) return {st, a};
        shooter_step(st, a, cfg);
    }
    return {st, scripted_expert(st, cfg)};
}

struct XiSample {
    ShooterState state;
    int action = 0;
    int branch = 0;  // which mixture component produced the sample
};

// The exploration mixture xi_n of the training loop: with probability 1/2 a
// draw from the current policy's discounted occupancy, 1/4 from nu,
// (1-gamma)/4 a start state with a policy action, gamma/4 one environment
// step past a nu sample with a policy action.
template <class Policy>
XiSample sample_xi(const ShooterConfig& cfg, Policy&& policy_action, double gamma, Rng& rng) {
    XiSample out;
    double u = rng.uniform();
    if (u < 0.5) {
        out.branch = 0;  // discounted occupancy of the current greedy policy
        ShooterState st = shooter_reset(cfg);
        for (int step = 0; step < cfg.episode_length; ++step) {
            int a = policy_action(st);
            if (rng.bernoulli(1.0 - gamma)) {
                out.state = st;
                out.action = a;
                return out;
            }
            shooter_step(st, a, cfg);
        }
        out.state = st;
        out.action = policy_action(st);
        return out;
    }
    if (u < 0.75) {
        out.branch = 1;  // reset to nu
        auto [st, a] = sample_nu(cfg, gamma, rng);
        out.state = st;
        out.action = a;
        return out;
    }
    if (u < 0.75 + (1.0 - gamma) / 4.0) {
        out.branch = 2;  // start state, policy action
        out.state = shooter_reset(cfg);
        out.action = policy_action(out.state);
        return out;
    }
    out.branch = 3;  // one environment step past nu, policy action
    auto [st, a] = sample_nu(cfg, gamma, rng);
    shooter_step(st, a, cfg);
    out.state = st;
    out.action = policy_action(st);
    return out;
}

struct DepthTriple {
    int depth = 1;  // which per-depth dataset this belongs to
    PixelGrid input;
    int action = 0;
    PixelGrid target;
};

// One training rollout from start pair (x, b): the environment advances with
// the shared action sequence; the hallucinated variant pairs each true
// outcome with the model's own sampled state as input. Actions after the
// first come from one sequence sampled from rho.
inline std::vector<DepthTriple> generate_training_rollout(const ShooterConfig& cfg, const UnrolledModel& models,
                                                          const ShooterState& x, int b, const BlindPolicy& rho,
                                                          int depth, AgentVariant variant, Rng& rng) {
    std::vector<DepthTriple> out;
    if (depth < 1) return out;
    const bool hallucinated = variant == AgentVariant::h_dagger_mc;
    ShooterState s = x;
    PixelGrid z = shooter_observe(s, cfg);
    int a = b;
    std::vector<int> hist{b};
    for (int t = 1; t <= depth; ++t) {
        PixelGrid s_frame = shooter_observe(s, cfg);
        shooter_step(s, a, cfg);
        PixelGrid next_frame = shooter_observe(s, cfg);
        out.push_back({t, hallucinated ? z : s_frame, a, std::move(next_frame)});
        if (t < depth) {
            if (hallucinated) z = models.at_depth(t).sample_next(z, a, rng);
            a = rho.sample(hist, rng);
            hist.push_back(a);
        }
    }
    return out;
}

// Full-DAgger data: an environment trajectory from (x, b) whose later
// actions come from the current greedy policy itself.
template <class Policy>
std::vector<DepthTriple> generate_dagger_trajectory(const ShooterConfig& cfg, const ShooterState& x, int b,
                                                    Policy&& policy_action, int length) {
    std::vector<DepthTriple> out;
    ShooterState s = x;
    int a = b;
    for (int t = 1; t <= length; ++t) {
        PixelGrid s_frame = shooter_observe(s, cfg);
        shooter_step(s, a, cfg);
        out.push_back({1, std::move(s_frame), a, shooter_observe(s, cfg)});
        if (t < length) a = policy_action(s);
    }
    return out;
}

struct IterationResult {
    double eval_return = 0;
    std::vector<double> loss_per_depth;  // mean (1 - P(target)) on this iteration's triples, pre-update
};

struct TrialResult {
    std::vector<IterationResult> iterations;
    bool aborted = false;        // model capacity exhausted mid-run
    std::string abort_reason;
};

// One full training trial; a pure function of (configs, seed).
inline TrialResult run_trial(const ShooterConfig& cfg, const AgentConfig& agent, std::uint64_t seed) {
    cfg.validate();
    agent.validate();
    const int T = agent.plan_spec.depth;
    const int n_depths = std::max(1, T - 1);
    TrainingSchedule schedule{n_depths, agent.permanent_cap};
    FactoredModel prototype(kShooterNumActions, kNumPixelSymbols, agent.context_radius, agent.model_alpha,
                            agent.max_contexts, agent.model_persist);
    ModelMode mode = (agent.variant == AgentVariant::dagger) ? ModelMode::single : agent.model_mode;
    UnrolledModel model(mode, n_depths, prototype);
    int deepest_trained = 0;

    TrialResult result;
    for (int iter = 1; iter <= agent.n_iterations; ++iter) {
        FrameModelSim plan_sim{&model, &cfg, deepest_trained};
        McPolicy<FrameModelSim> policy(plan_sim, kShooterNumActions, agent.plan_spec,
                                       derive_seed(seed, 1, static_cast<std::uint64_t>(iter)));
        auto policy_action = [&](const ShooterState& st) {
            PixelGrid frame = shooter_observe(st, cfg);
            return policy.act(frame, frame.hash());
        };

        // Generate this iteration's data against the frozen model.
        Rng gen_rng(derive_seed(seed, 2, static_cast<std::uint64_t>(iter)));
        int depth = schedule.depth(iter);
        std::vector<DepthTriple> triples;
        try {
            for (int k = 0; k < agent.rollouts_per_iteration; ++k) {
                XiSample xi = sample_xi(cfg, policy_action, agent.plan_spec.gamma, gen_rng);
                std::vector<DepthTriple> rollout;
                if (agent.variant == AgentVariant::dagger)
                    rollout = generate_dagger_trajectory(cfg, xi.state, xi.action, policy_action, depth);
                else
                    rollout = generate_training_rollout(cfg, model, xi.state, xi.action,
                                                        agent.plan_spec.rollout_policy, depth, agent.variant,
                                                        gen_rng);
                for (auto& tr : rollout) triples.push_back(std::move(tr));
            }
        } catch (const ModelCapacityError& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            return result;
        }

        // Pre-update per-depth training loss on the frozen model.
        IterationResult ir;
        ir.loss_per_depth.assign(n_depths, 0.0);
        std::vector<int> depth_counts(n_depths, 0);
        for (const DepthTriple& tr : triples) {
            double log_p = model.at_depth(tr.depth).frame_log_prob(tr.input, tr.action, tr.target);
            ir.loss_per_depth[tr.depth - 1] += 1.0 - std::exp(log_p);
            depth_counts[tr.depth - 1] += 1;
        }
        for (int d = 0; d < n_depths; ++d)
            if (depth_counts[d] > 0) ir.loss_per_depth[d] /= depth_counts[d];

        // Batch update.
        try {
            for (const DepthTriple& tr : triples) model.update_depth(tr.depth, tr.input, tr.action, tr.target);
        } catch (const ModelCapacityError& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            return result;
        }
        if (!triples.empty()) deepest_trained = std::max(deepest_trained, depth);

        // Evaluate the re-planned policy for one episode.
        FrameModelSim eval_sim{&model, &cfg, deepest_trained};
        McPolicy<FrameModelSim> eval_policy(eval_sim, kShooterNumActions, agent.plan_spec,
                                            derive_seed(seed, 3, static_cast<std::uint64_t>(iter)));
        Rng eval_rng(derive_seed(seed, 4, static_cast<std::uint64_t>(iter)));
        ShooterState st = shooter_reset(cfg);
        double ret = 0, discount = 1;
        for (int step = 0; step < cfg.episode_length; ++step) {
            PixelGrid frame = shooter_observe(st, cfg);
            int a = eval_policy.act(frame, frame.hash());
            ret += discount * shooter_step(st, a, cfg);
            discount *= agent.plan_spec.gamma;
        }
        ir.eval_return = ret;
        result.iterations.push_back(std::move(ir));
    }
    return result;
}

// Baseline trials sharing the evaluation protocol.
inline TrialResult run_random_baseline(const ShooterConfig& cfg, const AgentConfig& agent, std::uint64_t seed) {
    TrialResult result;
    for (int iter = 1; iter <= agent.n_iterations; ++iter) {
        Rng eval_rng(derive_seed(seed, 4, static_cast<std::uint64_t>(iter)));
        ShooterState st = shooter_reset(cfg);
        double ret = 0, discount = 1;
        for (int step = 0; step < cfg.episode_length; ++step) {
            int a = eval_rng.uniform_int(kShooterNumActions);
            ret += discount * shooter_step(st, a, cfg);
            discount *= agent.plan_spec.gamma;
        }
        IterationResult ir;
        ir.eval_return = ret;
        ir.loss_per_depth.assign(std::max(1, agent.plan_spec.depth - 1), 0.0);
        result.iterations.push_back(std::move(ir));
    }
    return result;
}

inline TrialResult run_perfect_model_baseline(const ShooterConfig& cfg, const AgentConfig& agent,
                                              std::uint64_t seed) {
    TrialResult result;
    ShooterEnvSim sim{&cfg};
    for (int iter = 1; iter <= agent.n_iterations; ++iter) {
        McPolicy<ShooterEnvSim> policy(sim, kShooterNumActions, agent.plan_spec,
                                       derive_seed(seed, 3, static_cast<std::uint64_t>(iter)));
        Rng eval_rng(derive_seed(seed, 4, static_cast<std::uint64_t>(iter)));
        ShooterState st = shooter_reset(cfg);
        double ret = 0, discount = 1;
        for (int step = 0; step < cfg.episode_length; ++step) {
            ret += discount * shooter_step(st, policy.act(st, shooter_state_hash(st)), cfg);
            discount *= agent.plan_spec.gamma;
        }
        IterationResult ir;
        ir.eval_return = ret;
        ir.loss_per_depth.assign(std::max(1, agent.plan_spec.depth - 1), 0.0);
        result.iterations.push_back(std::move(ir));
    }
    return result;
}

}  // namespace hdmc

#endif  // HDMC_AGENTS_HPP

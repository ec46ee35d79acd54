// Training-loop tests: exploration-mixture branch frequencies, depth
// schedule, rollout data streams, and trial determinism.

#include <catch2/catch_amalgamated.hpp>

#include "hdmc/agents.hpp"

using namespace hdmc;

namespace {

ShooterConfig desk_cfg() {
    ShooterConfig cfg;
    cfg.width = 15;
    cfg.height = 9;
    cfg.bullseye_moving = true;
    return cfg;
}

}  // namespace

TEST_CASE("depth schedule grows one level per ten iterations", "[agents]") {
    TrainingSchedule s{9, -1};
    REQUIRE(s.depth(1) == 0);
    REQUIRE(s.depth(9) == 0);
    REQUIRE(s.depth(10) == 1);
    REQUIRE(s.depth(19) == 1);
    REQUIRE(s.depth(20) == 2);
    REQUIRE(s.depth(60) == 6);
    REQUIRE(s.depth(200) == 9);  // clamped by the per-depth model count
    TrainingSchedule capped{9, 1};
    REQUIRE(capped.depth(60) == 1);
    REQUIRE(capped.depth(5) == 0);
}

TEST_CASE("exploration mixture hits its branch probabilities", "[agents]") {
    ShooterConfig cfg = desk_cfg();
    Rng rng(71);
    const int n = 20000;
    std::vector<int> counts(4, 0);
    auto expert_action = [&](const ShooterState& st) { return scripted_expert(st, cfg); };
    for (int i = 0; i < n; ++i) counts[sample_xi(cfg, expert_action, 0.9, rng).branch] += 1;
    // Branch weights: 1/2, 1/4, (1-gamma)/4 = 0.025, gamma/4 = 0.225.
    std::vector<double> expect{0.5 * n, 0.25 * n, 0.025 * n, 0.225 * n};
    double chi2 = 0;
    for (int b = 0; b < 4; ++b) chi2 += (counts[b] - expect[b]) * (counts[b] - expect[b]) / expect[b];
    REQUIRE(chi2 < chi2_crit_001(3));
}

TEST_CASE("zero-depth rollouts yield no training triples", "[agents]") {
    ShooterConfig cfg = desk_cfg();
    FactoredModel proto(kShooterNumActions, kNumPixelSymbols, 3, 0.5);
    UnrolledModel models(ModelMode::unrolled, 9, proto);
    Rng rng(73);
    auto triples = generate_training_rollout(cfg, models, shooter_reset(cfg), kActStay,
                                             BlindPolicy::uniform(kShooterNumActions), 0,
                                             AgentVariant::h_dagger_mc, rng);
    REQUIRE(triples.empty());
}

TEST_CASE("rollout triples carry depths 1..d and true-environment targets", "[agents]") {
    ShooterConfig cfg = desk_cfg();
    FactoredModel proto(kShooterNumActions, kNumPixelSymbols, 3, 0.5);
    UnrolledModel models(ModelMode::unrolled, 9, proto);
    // A deterministic action script makes the environment trajectory shared
    // between the two variants even though rng consumption differs.
    BlindPolicy script = BlindPolicy::sequence_mixture(
        kShooterNumActions, {{1.0, {kActFire, kActLeft, kActLeft, kActStay}}});
    ShooterState x = shooter_reset(cfg);
    Rng rng_h(74), rng_d(74);
    auto h = generate_training_rollout(cfg, models, x, kActFire, script, 4, AgentVariant::h_dagger_mc, rng_h);
    auto d = generate_training_rollout(cfg, models, x, kActFire, script, 4, AgentVariant::dagger_mc, rng_d);
    REQUIRE(h.size() == 4);
    REQUIRE(d.size() == 4);
    // Replay the environment to get the reference frames.
    ShooterState ref = x;
    std::vector<PixelGrid> frames{shooter_observe(ref, cfg)};
    std::vector<int> actions{kActFire, kActLeft, kActLeft, kActStay};
    for (int a : actions) {
        shooter_step(ref, a, cfg);
        frames.push_back(shooter_observe(ref, cfg));
    }
    for (int t = 0; t < 4; ++t) {
        REQUIRE(h[t].depth == t + 1);
        REQUIRE(d[t].depth == t + 1);
        REQUIRE(h[t].action == actions[t]);
        REQUIRE(d[t].action == actions[t]);
        // Targets are always the true next frames, in both variants.
        REQUIRE(h[t].target == frames[t + 1]);
        REQUIRE(d[t].target == frames[t + 1]);
        // Standard inputs are the true current frames.
        REQUIRE(d[t].input == frames[t]);
    }
    // The hallucinated stream starts from the true frame, then feeds the
    // model's own (untrained, essentially random) samples as inputs.
    REQUIRE(h[0].input == frames[0]);
    REQUIRE_FALSE(h[1].input == frames[1]);
}

TEST_CASE("a perfectly trained model makes hallucinated and standard streams coincide", "[agents]") {
    // Train depth models until they reproduce the environment exactly along
    // the scripted trajectory; the hallucinated inputs then equal the true
    // frames.
    ShooterConfig cfg = desk_cfg();
    cfg.bullseye_moving = false;  // 1-frame Markov, so a context model can be exact
    FactoredModel proto(kShooterNumActions, kNumPixelSymbols, 3, 0.01);
    UnrolledModel models(ModelMode::unrolled, 4, proto);
    BlindPolicy script =
        BlindPolicy::sequence_mixture(kShooterNumActions, {{1.0, {kActFire, kActLeft, kActStay, kActRight}}});
    ShooterState x = shooter_reset(cfg);
    // Supervised pre-training on the exact trajectory, every depth.
    {
        ShooterState st = x;
        std::vector<int> actions{kActFire, kActLeft, kActStay, kActRight};
        for (int t = 1; t <= 4; ++t) {
            PixelGrid before = shooter_observe(st, cfg);
            shooter_step(st, actions[t - 1], cfg);
            PixelGrid after = shooter_observe(st, cfg);
            for (int d = 1; d <= 4; ++d)
                for (int rep = 0; rep < 500; ++rep) models.update_depth(d, before, actions[t - 1], after);
        }
    }
    Rng rng(75);
    auto h = generate_training_rollout(cfg, models, x, kActFire, script, 4, AgentVariant::h_dagger_mc, rng);
    ShooterState ref = x;
    std::vector<int> actions{kActFire, kActLeft, kActStay, kActRight};
    for (int t = 0; t < 4; ++t) {
        REQUIRE(h[t].input == shooter_observe(ref, cfg));
        shooter_step(ref, actions[t], cfg);
    }
}

TEST_CASE("full-trajectory variant emits depth-1 triples along the environment", "[agents]") {
    ShooterConfig cfg = desk_cfg();
    ShooterState x = shooter_reset(cfg);
    auto policy = [](const ShooterState&) { return kActLeft; };
    auto triples = generate_dagger_trajectory(cfg, x, kActFire, policy, 5);
    REQUIRE(triples.size() == 5);
    ShooterState ref = x;
    int a = kActFire;
    for (const auto& tr : triples) {
        REQUIRE(tr.depth == 1);
        REQUIRE(tr.input == shooter_observe(ref, cfg));
        REQUIRE(tr.action == a);
        shooter_step(ref, a, cfg);
        REQUIRE(tr.target == shooter_observe(ref, cfg));
        a = kActLeft;
    }
}

TEST_CASE("training trials are deterministic in the seed", "[agents]") {
    ShooterConfig cfg = desk_cfg();
    AgentConfig agent;
    agent.variant = AgentVariant::h_dagger_mc;
    agent.n_iterations = 12;
    agent.rollouts_per_iteration = 5;
    agent.model_alpha = 0.02;
    agent.plan_spec.n_rollouts = 3;
    agent.plan_spec.depth = 4;
    agent.plan_spec.gamma = 0.9;
    agent.plan_spec.rollout_policy = BlindPolicy::uniform(kShooterNumActions);
    TrialResult a = run_trial(cfg, agent, 99);
    TrialResult b = run_trial(cfg, agent, 99);
    REQUIRE(a.iterations.size() == 12);
    REQUIRE_FALSE(a.aborted);
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
        REQUIRE(a.iterations[i].eval_return == b.iterations[i].eval_return);
        REQUIRE(a.iterations[i].loss_per_depth == b.iterations[i].loss_per_depth);
    }
    // Iterations before the schedule produces data have zero recorded loss.
    for (std::size_t i = 0; i < 9; ++i)
        for (double l : a.iterations[i].loss_per_depth) REQUIRE(l == 0.0);
    // From iteration 10 on, depth-1 loss is measured (fresh model: near 1).
    REQUIRE(a.iterations[9].loss_per_depth[0] > 0.0);
}

TEST_CASE("capacity exhaustion aborts a trial gracefully", "[agents]") {
    ShooterConfig cfg = desk_cfg();
    AgentConfig agent;
    agent.variant = AgentVariant::dagger_mc;
    agent.n_iterations = 11;
    agent.rollouts_per_iteration = 3;
    agent.max_contexts = 10;  // far too small for even one frame update
    agent.plan_spec.n_rollouts = 2;
    agent.plan_spec.depth = 3;
    agent.plan_spec.gamma = 0.9;
    agent.plan_spec.rollout_policy = BlindPolicy::uniform(kShooterNumActions);
    TrialResult r = run_trial(cfg, agent, 7);
    REQUIRE(r.aborted);
    REQUIRE_FALSE(r.abort_reason.empty());
}

#ifndef HDMC_HARNESS_HPP
#define HDMC_HARNESS_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hdmc/agents.hpp"
#include "hdmc/bounds.hpp"
#include "hdmc/coin.hpp"
#include "hdmc/config.hpp"
#include "hdmc/random_mdp.hpp"
#include "hdmc/svg.hpp"

namespace hdmc {

// ---------------------------------------------------------------------------
// Learning-curve experiments
// ---------------------------------------------------------------------------

struct ExperimentData {
    std::vector<std::string> variant_order;
    std::map<std::string, std::vector<TrialResult>> trials;  // variant -> per-trial results
    std::string csv;
};

inline std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
    // Variant is deliberately excluded: trials are paired across variants.
    return derive_seed(master_seed, 1000 + static_cast<std::uint64_t>(trial));
}

inline TrialResult run_variant_trial(const ExperimentConfig& cfg, const std::string& variant, std::uint64_t seed) {
    AgentConfig agent = cfg.agent;
    if (variant == "random") return run_random_baseline(cfg.shooter, agent, seed);
    if (variant == "perfect") return run_perfect_model_baseline(cfg.shooter, agent, seed);
    if (variant == "h_dagger_mc") agent.variant = AgentVariant::h_dagger_mc;
    else if (variant == "dagger_mc") agent.variant = AgentVariant::dagger_mc;
    else if (variant == "dagger") agent.variant = AgentVariant::dagger;
    else throw ConfigError("unknown variant '" + variant + "'");
    return run_trial(cfg.shooter, agent, seed);
}

inline ExperimentData run_experiment_data(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentData data;
    const int n_loss = std::max(0, cfg.agent.plan_spec.depth - 1);
    std::ostringstream csv;
    csv << "# learning-curve CSV v1\n";
    csv << "trial,iteration,variant,return";
    for (int d = 1; d <= n_loss; ++d) csv << ",loss_depth_" << d;
    csv << "\n";
    for (const std::string& variant : cfg.variants) {
        data.variant_order.push_back(variant);
        auto& trials = data.trials[variant];
        for (int trial = 0; trial < cfg.trials; ++trial) {
            TrialResult tr = run_variant_trial(cfg, variant, trial_seed(cfg.master_seed, trial));
            for (std::size_t i = 0; i < tr.iterations.size(); ++i) {
                const IterationResult& ir = tr.iterations[i];
                csv << trial << "," << (i + 1) << "," << variant << "," << format_double(ir.eval_return);
                for (int d = 0; d < n_loss; ++d)
                    csv << ","
                        << format_double(d < static_cast<int>(ir.loss_per_depth.size()) ? ir.loss_per_depth[d]
                                                                                        : 0.0);
                csv << "\n";
            }
            trials.push_back(std::move(tr));
        }
    }
    data.csv = csv.str();
    return data;
}

// Per-trial mean return over the final `window` iterations.
inline std::vector<double> final_window_per_trial(const std::vector<TrialResult>& trials, int window) {
    std::vector<double> out;
    for (const TrialResult& tr : trials) {
        int n = static_cast<int>(tr.iterations.size());
        int w = std::min(window, n);
        if (w == 0) continue;
        double acc = 0;
        for (int i = n - w; i < n; ++i) acc += tr.iterations[i].eval_return;
        out.push_back(acc / w);
    }
    return out;
}

struct ExperimentArtifacts {
    std::string csv_path;
    std::string svg_path;
    std::string summary_path;
};

inline ExperimentArtifacts run_experiment(const ExperimentConfig& cfg) {
    ExperimentData data = run_experiment_data(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    ExperimentArtifacts art;
    art.csv_path = cfg.output_dir + "/curves.csv";
    art.svg_path = cfg.output_dir + "/curves.svg";
    art.summary_path = cfg.output_dir + "/summary.txt";
    {
        std::ofstream os(art.csv_path, std::ios::binary);
        os << data.csv;
    }
    {
        std::ofstream os(art.svg_path, std::ios::binary);
        os << render_curves(data.csv);
    }
    {
        std::ofstream os(art.summary_path, std::ios::binary);
        os << "final-10-iteration mean return (95% CI half-width) per variant\n";
        for (const std::string& v : data.variant_order) {
            auto finals = final_window_per_trial(data.trials.at(v), 10);
            os << v << ": " << format_double(mean(finals)) << " (" << format_double(ci95_halfwidth(finals))
               << ")\n";
            int aborted = 0;
            for (const TrialResult& tr : data.trials.at(v))
                if (tr.aborted) ++aborted;
            if (aborted > 0) os << "  " << aborted << " trial(s) aborted early\n";
        }
    }
    return art;
}

// ---------------------------------------------------------------------------
// Bound sweeps
// ---------------------------------------------------------------------------

struct SweepResult {
    std::string csv;
    int n_instances = 0;
    int n_violations = 0;
    std::string counterexample_dump;  // serialized first failing instance, if any
};

// Deterministic environments, blind policies: the full tightness chain.
inline SweepResult run_chain_sweep(const BoundSweepConfig& sweep) {
    SweepResult res;
    std::ostringstream csv;
    csv << "# tightness-chain CSV v1\n";
    csv << "instance,n_states,n_actions,T,gamma,eps_val,multi_step,hallucinated_blind,one_step_scaled,holds\n";
    for (int i = 0; i < sweep.n_instances; ++i) {
        Rng rng(derive_seed(sweep.seed, 2 * static_cast<std::uint64_t>(i)));
        int S = 2 + rng.uniform_int(std::max(1, sweep.max_states - 1));
        int A = sweep.max_actions >= 2 ? 2 + rng.uniform_int(sweep.max_actions - 1) : 1;
        int T = sweep.horizons[rng.uniform_int(static_cast<int>(sweep.horizons.size()))];
        double gamma = sweep.gammas[rng.uniform_int(static_cast<int>(sweep.gammas.size()))];
        DeterministicMdp env = random_deterministic_mdp(S, A, rng);
        TabularMdp model = random_stochastic_model(S, A, 1.0, rng);
        model.rewards = env.rewards;  // reward function is known; only dynamics differ
        BlindPolicy policy = BlindPolicy::hashed_table(A, rng.next_u64());
        StateActionDist xi = random_state_action_dist(S, A, rng);
        ChainReport rep = verify_tightness_chain(env, model, xi, policy, T, gamma, 1.0);
        csv << i << "," << S << "," << A << "," << T << "," << format_double(gamma) << ","
            << format_double(rep.eps_val) << "," << format_double(rep.multi_step) << ","
            << format_double(rep.hallucinated_blind) << "," << format_double(rep.one_step_scaled) << ","
            << (rep.holds ? 1 : 0) << "\n";
        ++res.n_instances;
        if (!rep.holds) {
            ++res.n_violations;
            if (res.counterexample_dump.empty()) {
                std::ostringstream dump;
                dump << "violation: " << rep.violation << "\ninstance " << i << " T " << T << " gamma "
                     << format_double(gamma) << "\nenvironment:\n"
                     << mdp_to_string(env.to_tabular()) << "model:\n"
                     << mdp_to_string(model);
                res.counterexample_dump = dump.str();
            }
        }
    }
    res.csv = csv.str();
    return res;
}

// Stochastic environments, Markov policies: value error against the
// one-step, multi-step, and joint hallucinated bounds.
inline SweepResult run_lemma_sweep(const BoundSweepConfig& sweep) {
    SweepResult res;
    std::ostringstream csv;
    csv << "# lemma-sweep CSV v1\n";
    csv << "instance,n_states,n_actions,T,gamma,eps_val,one_step,multi_step,hallucinated_joint,holds\n";
    const double slack = 1e-9;
    for (int i = 0; i < sweep.n_instances; ++i) {
        Rng rng(derive_seed(sweep.seed, 2 * static_cast<std::uint64_t>(i) + 1));
        int S = 2 + rng.uniform_int(std::max(1, sweep.max_states - 1));
        int A = sweep.max_actions >= 2 ? 2 + rng.uniform_int(sweep.max_actions - 1) : 1;
        int T = sweep.horizons[rng.uniform_int(static_cast<int>(sweep.horizons.size()))];
        double gamma = sweep.gammas[rng.uniform_int(static_cast<int>(sweep.gammas.size()))];
        TabularMdp env = random_stochastic_model(S, A, 1.0, rng);
        TabularMdp model = random_stochastic_model(S, A, 1.0, rng);
        model.rewards = env.rewards;  // reward function is known; only dynamics differ
        MarkovPolicy policy = random_markov_policy(S, A, rng);
        StateActionDist xi = random_state_action_dist(S, A, rng);
        ErrorReport rep = compute_error_report(env, model, xi, policy, T, gamma, 1.0);
        bool holds = rep.eps_val <= rep.one_step + slack && rep.eps_val <= rep.multi_step + slack &&
                     rep.eps_val <= rep.hallucinated_joint + slack;
        csv << i << "," << S << "," << A << "," << T << "," << format_double(gamma) << ","
            << format_double(rep.eps_val) << "," << format_double(rep.one_step) << ","
            << format_double(rep.multi_step) << "," << format_double(rep.hallucinated_joint) << ","
            << (holds ? 1 : 0) << "\n";
        ++res.n_instances;
        if (!holds) {
            ++res.n_violations;
            if (res.counterexample_dump.empty()) {
                std::ostringstream dump;
                dump << "violation: eps_val exceeds a bound\ninstance " << i << " T " << T << " gamma "
                     << format_double(gamma) << "\nenvironment:\n"
                     << mdp_to_string(env) << "model:\n"
                     << mdp_to_string(model);
                res.counterexample_dump = dump.str();
            }
        }
    }
    res.csv = csv.str();
    return res;
}

// ---------------------------------------------------------------------------
// Perfect-model counterexamples
// ---------------------------------------------------------------------------

struct CounterexampleReport {
    // Stochastic coin, perfect model: joint hallucinated one-step expectation
    // after one transition vs. the standard one-step error.
    double joint_expectation = 0;
    double standard_one_step = 0;
    // Deterministic coin, stochastic blind policy, perfect model: hallucinated
    // one-step expectation under independent action sampling vs. under a
    // shared action sequence.
    double independent_expectation = 0;
    double paired_bound = 0;
    std::string text;
};

inline CounterexampleReport run_counterexamples() {
    CounterexampleReport rep;

    // Stochastic coin: perfect model, point start, one transition.
    TabularMdp coin = make_coin_mdp_stochastic();
    StateActionDist xi0 = StateActionDist::point_mass(3, 1, kCoinStart, 0);
    MarkovPolicy only_action = MarkovPolicy::uniform(3, 1);
    JointDist j = exact_joint_dist(coin, coin, xi0, only_action, 2);
    rep.joint_expectation = joint_one_step_expectation(coin, coin, j);
    StateActionDist d2 = exact_state_action_dist(coin, xi0, only_action, 2);
    for (int s = 0; s < 3; ++s) rep.standard_one_step += d2(s, 0) * l1_distance(coin.row(s, 0), coin.row(s, 0));

    // Deterministic coin: set-and-hold blind policy, perfect model.
    DeterministicMdp det = make_coin_mdp_deterministic();
    TabularMdp det_tab = det.to_tabular();
    BlindPolicy set_and_hold = make_coin_set_and_hold_policy();
    std::vector<double> mu{1.0, 0.0, 0.0};
    rep.independent_expectation = independent_execution_expectation(det_tab, det_tab, mu, set_and_hold, 2);
    StateActionDist xi_blind = StateActionDist::zeros(3, 2);
    xi_blind(kCoinStart, kSetHeads) = 0.5;
    xi_blind(kCoinStart, kSetTails) = 0.5;
    rep.paired_bound = hallucinated_blind_bound(det, det_tab, xi_blind, set_and_hold, 4, 0.9, 1.0);

    std::ostringstream os;
    os << "stochastic coin, perfect model, one transition:\n";
    os << "  joint hallucinated one-step expectation = " << format_double(rep.joint_expectation) << "\n";
    os << "  standard one-step error                 = " << format_double(rep.standard_one_step) << "\n";
    os << "deterministic coin, stochastic blind policy, perfect model:\n";
    os << "  independent-execution expectation       = " << format_double(rep.independent_expectation)
       << (rep.independent_expectation > 0 ? "  (strictly positive)" : "") << "\n";
    os << "  shared-action-sequence bound            = " << format_double(rep.paired_bound) << "\n";
    rep.text = os.str();
    return rep;
}

}  // namespace hdmc

#endif  // HDMC_HARNESS_HPP

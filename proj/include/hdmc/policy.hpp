#ifndef HDMC_POLICY_HPP
#define HDMC_POLICY_HPP

#include <span>
#include <utility>
#include <vector>

#include "hdmc/common.hpp"

namespace hdmc {

// Stationary state-conditional policy pi(a | s).
struct MarkovPolicy {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> probs;  // [s][a]

    static MarkovPolicy uniform(int n_states, int n_actions) {
        MarkovPolicy p;
        p.n_states = n_states;
        p.n_actions = n_actions;
        p.probs.assign(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions);
        return p;
    }
    std::span<const double> row(int s) const {
        return {probs.data() + static_cast<std::size_t>(s) * n_actions, static_cast<std::size_t>(n_actions)};
    }
    double prob(int s, int a) const { return row(s)[a]; }
    void validate(double tol = 1e-12) const {
        for (int s = 0; s < n_states; ++s) {
            double sum = 0;
            for (double p : row(s)) {
                if (p < 0) throw ConfigError("MarkovPolicy: negative probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > tol) throw ConfigError("MarkovPolicy: row does not sum to 1");
        }
    }
};

// Policy whose action distribution depends only on the action history,
// never on states. Three realizations:
//   - uniform_random: every action equally likely at every step.
//   - fixed_sequence_mixture: a latent action sequence is drawn once
//     (by weight) and then followed; conditionals are posterior-weighted.
//     Sequences shorter than the requested history repeat their last action.
//   - history_table: a deterministic pseudo-random distribution per history,
//     derived from a seed; every conditional is strictly positive.
struct BlindPolicy {
    enum class Kind { uniform_random, fixed_sequence_mixture, history_table };

    Kind kind = Kind::uniform_random;
    int n_actions = 0;
    std::vector<std::pair<double, std::vector<int>>> sequences;  // mixture components
    std::uint64_t table_seed = 0;

    static BlindPolicy uniform(int n_actions) {
        BlindPolicy p;
        p.kind = Kind::uniform_random;
        p.n_actions = n_actions;
        return p;
    }

    static BlindPolicy sequence_mixture(int n_actions, std::vector<std::pair<double, std::vector<int>>> seqs) {
        BlindPolicy p;
        p.kind = Kind::fixed_sequence_mixture;
        p.n_actions = n_actions;
        p.sequences = std::move(seqs);
        return p;
    }

    static BlindPolicy hashed_table(int n_actions, std::uint64_t seed) {
        BlindPolicy p;
        p.kind = Kind::history_table;
        p.n_actions = n_actions;
        p.table_seed = seed;
        return p;
    }

    // pi(. | history). For sequence mixtures a history inconsistent with every
    // component gets an all-zero vector (probability-zero branch upstream).
    std::vector<double> action_probs(std::span<const int> history) const {
        std::vector<double> out(n_actions, 0.0);
        switch (kind) {
            case Kind::uniform_random: {
                for (double& p : out) p = 1.0 / n_actions;
                break;
            }
            case Kind::fixed_sequence_mixture: {
                double total = 0;
                for (const auto& [w, seq] : sequences) {
                    bool consistent = true;
                    for (std::size_t i = 0; i < history.size() && consistent; ++i)
                        consistent = seq_action(seq, i) == history[i];
                    if (consistent) {
                        out[seq_action(seq, history.size())] += w;
                        total += w;
                    }
                }
                if (total > 0)
                    for (double& p : out) p /= total;
                break;
            }
            case Kind::history_table: {
                std::uint64_t h = table_seed;
                for (int a : history) h = splitmix64(h ^ (static_cast<std::uint64_t>(a) + 0x51ed270b7a64f2c1ULL));
                double total = 0;
                for (int a = 0; a < n_actions; ++a) {
                    // strictly positive pseudo-random weights
                    out[a] = 0.05 + static_cast<double>(splitmix64(h + a) >> 11) * 0x1.0p-53;
                    total += out[a];
                }
                for (double& p : out) p /= total;
                break;
            }
        }
        return out;
    }

    // Probability of the next action given the history.
    double prob(std::span<const int> history, int action) const { return action_probs(history)[action]; }

    int sample(std::span<const int> history, Rng& rng) const {
        auto probs = action_probs(history);
        return rng.categorical(probs);
    }

  private:
    static int seq_action(const std::vector<int>& seq, std::size_t i) {
        if (seq.empty()) return 0;
        return i < seq.size() ? seq[i] : seq.back();
    }
};

}  // namespace hdmc

#endif  // HDMC_POLICY_HPP

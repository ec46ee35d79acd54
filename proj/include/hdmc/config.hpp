#ifndef HDMC_CONFIG_HPP
#define HDMC_CONFIG_HPP

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hdmc/agents.hpp"
#include "hdmc/shooter.hpp"

namespace hdmc {

// Flat text configuration: "[section]" headers and "key = value" lines;
// '#' starts a comment. Sections: [experiment], [shooter], [agent], [sweep].

struct BoundSweepConfig {
    int n_instances = 100;
    int max_states = 6;
    int max_actions = 3;
    std::vector<int> horizons = {2, 3, 4, 5};
    std::vector<double> gammas = {0.5, 0.9};
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    ShooterConfig shooter;
    AgentConfig agent;
    std::vector<std::string> variants = {"h_dagger_mc", "dagger_mc", "random", "perfect"};
    int trials = 10;
    std::uint64_t master_seed = 20240901;
    std::string output_dir = "out";
    BoundSweepConfig sweep;

    void validate() const {
        shooter.validate();
        agent.validate();
        if (trials < 1) throw ConfigError("ExperimentConfig: trials must be >= 1");
        if (variants.empty()) throw ConfigError("ExperimentConfig: no variants selected");
        for (const std::string& v : variants)
            if (v != "h_dagger_mc" && v != "dagger_mc" && v != "dagger" && v != "random" && v != "perfect")
                throw ConfigError("ExperimentConfig: unknown variant '" + v + "'");
    }
};

// Desk-scale profile: small enough for a laptop while preserving the
// qualitative orderings. The reduced grid height keeps a fired bullet's
// payoff inside the planning horizon.
inline ExperimentConfig desk_profile() {
    ExperimentConfig c;
    c.shooter.width = 15;
    c.shooter.height = 9;
    c.shooter.bullseye_moving = true;
    c.shooter.episode_length = 30;
    c.trials = 10;
    c.agent.n_iterations = 60;
    c.agent.rollouts_per_iteration = 200;
    c.agent.model_alpha = 0.002;
    c.agent.model_persist = 50.0;
    c.agent.context_radius = 2;
    c.agent.plan_spec.n_rollouts = 30;
    c.agent.plan_spec.depth = 10;
    c.agent.plan_spec.gamma = 0.9;
    c.agent.plan_spec.rollout_policy = BlindPolicy::uniform(kShooterNumActions);
    return c;
}

// Full-scale profile mirroring the reference experiment parameters.
inline ExperimentConfig paper_profile() {
    ExperimentConfig c;
    c.shooter.width = 15;
    c.shooter.height = 13;
    c.shooter.bullseye_moving = true;
    c.shooter.episode_length = 30;
    c.trials = 50;
    c.agent.n_iterations = 200;
    c.agent.rollouts_per_iteration = 500;
    c.agent.model_alpha = 0.002;
    c.agent.model_persist = 50.0;
    c.agent.plan_spec.n_rollouts = 50;
    c.agent.plan_spec.depth = 15;
    c.agent.plan_spec.gamma = 0.9;
    c.agent.plan_spec.rollout_policy = BlindPolicy::uniform(kShooterNumActions);
    return c;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ParseError("expected boolean, got '" + v + "'", line);
}

template <class T>
T parse_num(const std::string& v, int line) {
    std::istringstream is(v);
    T out;
    if (!(is >> out)) throw ParseError("expected number, got '" + v + "'", line);
    return out;
}

}  // namespace detail

inline void write_config(std::ostream& os, const ExperimentConfig& c) {
    os << "[experiment]\n";
    os << "trials = " << c.trials << "\n";
    os << "master_seed = " << c.master_seed << "\n";
    os << "output_dir = " << c.output_dir << "\n";
    os << "variants = ";
    for (std::size_t i = 0; i < c.variants.size(); ++i) os << (i ? "," : "") << c.variants[i];
    os << "\n\n[shooter]\n";
    os << "width = " << c.shooter.width << "\n";
    os << "height = " << c.shooter.height << "\n";
    os << "n_targets = " << c.shooter.n_targets << "\n";
    os << "target_width = " << c.shooter.target_width << "\n";
    os << "bullseye_moving = " << (c.shooter.bullseye_moving ? "true" : "false") << "\n";
    os << "episode_length = " << c.shooter.episode_length << "\n";
    os << "fire_cost = " << format_double(c.shooter.fire_cost) << "\n";
    os << "hit_reward = " << format_double(c.shooter.hit_reward) << "\n";
    os << "bullseye_bonus = " << format_double(c.shooter.bullseye_bonus) << "\n";
    os << "\n[agent]\n";
    os << "model_mode = " << (c.agent.model_mode == ModelMode::single ? "single" : "unrolled") << "\n";
    os << "n_iterations = " << c.agent.n_iterations << "\n";
    os << "rollouts_per_iteration = " << c.agent.rollouts_per_iteration << "\n";
    os << "permanent_cap = " << c.agent.permanent_cap << "\n";
    os << "model_alpha = " << format_double(c.agent.model_alpha) << "\n";
    os << "model_persist = " << format_double(c.agent.model_persist) << "\n";
    os << "context_radius = " << c.agent.context_radius << "\n";
    os << "max_contexts = " << c.agent.max_contexts << "\n";
    os << "plan_rollouts = " << c.agent.plan_spec.n_rollouts << "\n";
    os << "plan_depth = " << c.agent.plan_spec.depth << "\n";
    os << "gamma = " << format_double(c.agent.plan_spec.gamma) << "\n";
    os << "\n[sweep]\n";
    os << "n_instances = " << c.sweep.n_instances << "\n";
    os << "max_states = " << c.sweep.max_states << "\n";
    os << "max_actions = " << c.sweep.max_actions << "\n";
    os << "horizons = ";
    for (std::size_t i = 0; i < c.sweep.horizons.size(); ++i) os << (i ? "," : "") << c.sweep.horizons[i];
    os << "\n";
    os << "gammas = ";
    for (std::size_t i = 0; i < c.sweep.gammas.size(); ++i) os << (i ? "," : "") << format_double(c.sweep.gammas[i]);
    os << "\n";
    os << "seed = " << c.sweep.seed << "\n";
}

// Parse over a base config (defaults to the desk profile), so partial files
// override only what they mention.
inline ExperimentConfig read_config(std::istream& is, ExperimentConfig base = desk_profile()) {
    ExperimentConfig c = std::move(base);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        // trim
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", lineno);
            section = line.substr(1, line.size() - 2);
            if (section != "experiment" && section != "shooter" && section != "agent" && section != "sweep")
                throw ParseError("unknown section '" + section + "'", lineno);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", lineno);

        using detail::parse_bool;
        using detail::parse_num;
        if (section == "experiment") {
            if (key == "trials") c.trials = parse_num<int>(value, lineno);
            else if (key == "master_seed") c.master_seed = parse_num<std::uint64_t>(value, lineno);
            else if (key == "output_dir") c.output_dir = value;
            else if (key == "variants") c.variants = detail::split_list(value);
            else throw ParseError("unknown key '" + key + "' in [experiment]", lineno);
        } else if (section == "shooter") {
            if (key == "width") c.shooter.width = parse_num<int>(value, lineno);
            else if (key == "height") c.shooter.height = parse_num<int>(value, lineno);
            else if (key == "n_targets") c.shooter.n_targets = parse_num<int>(value, lineno);
            else if (key == "target_width") c.shooter.target_width = parse_num<int>(value, lineno);
            else if (key == "bullseye_moving") c.shooter.bullseye_moving = parse_bool(value, lineno);
            else if (key == "episode_length") c.shooter.episode_length = parse_num<int>(value, lineno);
            else if (key == "fire_cost") c.shooter.fire_cost = parse_num<double>(value, lineno);
            else if (key == "hit_reward") c.shooter.hit_reward = parse_num<double>(value, lineno);
            else if (key == "bullseye_bonus") c.shooter.bullseye_bonus = parse_num<double>(value, lineno);
            else throw ParseError("unknown key '" + key + "' in [shooter]", lineno);
        } else if (section == "agent") {
            if (key == "model_mode") {
                if (value == "single") c.agent.model_mode = ModelMode::single;
                else if (value == "unrolled") c.agent.model_mode = ModelMode::unrolled;
                else throw ParseError("model_mode must be 'single' or 'unrolled'", lineno);
            }
            else if (key == "n_iterations") c.agent.n_iterations = parse_num<int>(value, lineno);
            else if (key == "rollouts_per_iteration") c.agent.rollouts_per_iteration = parse_num<int>(value, lineno);
            else if (key == "permanent_cap") c.agent.permanent_cap = parse_num<int>(value, lineno);
            else if (key == "model_alpha") c.agent.model_alpha = parse_num<double>(value, lineno);
            else if (key == "model_persist") c.agent.model_persist = parse_num<double>(value, lineno);
            else if (key == "context_radius") c.agent.context_radius = parse_num<int>(value, lineno);
            else if (key == "max_contexts") c.agent.max_contexts = parse_num<std::size_t>(value, lineno);
            else if (key == "plan_rollouts") c.agent.plan_spec.n_rollouts = parse_num<int>(value, lineno);
            else if (key == "plan_depth") c.agent.plan_spec.depth = parse_num<int>(value, lineno);
            else if (key == "gamma") c.agent.plan_spec.gamma = parse_num<double>(value, lineno);
            else throw ParseError("unknown key '" + key + "' in [agent]", lineno);
        } else if (section == "sweep") {
            if (key == "n_instances") c.sweep.n_instances = parse_num<int>(value, lineno);
            else if (key == "max_states") c.sweep.max_states = parse_num<int>(value, lineno);
            else if (key == "max_actions") c.sweep.max_actions = parse_num<int>(value, lineno);
            else if (key == "seed") c.sweep.seed = parse_num<std::uint64_t>(value, lineno);
            else if (key == "horizons") {
                c.sweep.horizons.clear();
                for (const std::string& v : detail::split_list(value))
                    c.sweep.horizons.push_back(parse_num<int>(v, lineno));
            } else if (key == "gammas") {
                c.sweep.gammas.clear();
                for (const std::string& v : detail::split_list(value))
                    c.sweep.gammas.push_back(parse_num<double>(v, lineno));
            } else {
                throw ParseError("unknown key '" + key + "' in [sweep]", lineno);
            }
        } else {
            throw ParseError("key outside of any section", lineno);
        }
    }
    c.agent.plan_spec.rollout_policy = BlindPolicy::uniform(kShooterNumActions);
    return c;
}

inline std::string config_to_string(const ExperimentConfig& c) {
    std::ostringstream os;
    write_config(os, c);
    return os.str();
}

inline ExperimentConfig config_from_string(const std::string& text, ExperimentConfig base = desk_profile()) {
    std::istringstream is(text);
    return read_config(is, std::move(base));
}

}  // namespace hdmc

#endif  // HDMC_CONFIG_HPP

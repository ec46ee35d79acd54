#ifndef HDMC_SHOOTER_HPP
#define HDMC_SHOOTER_HPP

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "hdmc/common.hpp"
#include "hdmc/grid.hpp"

namespace hdmc {

// Shooter: a deterministic arcade game on a pixel grid. A ship on the bottom
// row moves left/right and fires bullets that rise one row per step. Targets
// sit on row 1; a bullet entering a target destroys it for +hit_reward, plus
// +bullseye_bonus when the bullet's column matches the target's bullseye
// column at impact. Firing costs fire_cost. Bullseyes may oscillate inside
// their target span; their direction of travel is hidden from the pixel
// observation, which makes the observed process second-order Markov.

enum ShooterAction : int { kActLeft = 0, kActRight = 1, kActStay = 2, kActFire = 3 };
inline constexpr int kShooterNumActions = 4;

struct ShooterConfig {
    int width = 15;
    int height = 13;
    int n_targets = 3;
    int target_width = 3;
    bool bullseye_moving = true;
    int episode_length = 30;
    double fire_cost = -1.0;
    double hit_reward = 10.0;
    double bullseye_bonus = 10.0;

    static constexpr int target_row = 1;
    int ship_row() const { return height - 1; }
    int target_start(int i) const { return 1 + i * (target_width + 2); }
    // Width of the reward range, the M of the bound formulas.
    double reward_range() const { return hit_reward + bullseye_bonus - fire_cost; }

    void validate() const {
        if (width < 1 || height < 4 || n_targets < 1 || target_width < 1 || episode_length < 1)
            throw ConfigError("ShooterConfig: bad geometry");
        if (target_start(n_targets - 1) + target_width > width)
            throw ConfigError("ShooterConfig: targets do not fit in width");
    }
};

struct ShooterTarget {
    bool alive = true;
    int start_col = 0;
    int bullseye_col = 0;
    int dir = 1;  // hidden from the observation
};

struct ShooterBullet {
    int row = 0;
    int col = 0;
};

struct ShooterState {
    int ship_col = 0;
    std::vector<ShooterBullet> bullets;
    std::vector<ShooterTarget> targets;
};

// Deterministic start state: ship centered, every bullseye at its target's
// center moving right. From a centered bullseye the direction alternates
// over time, so both successors of the ambiguous center frame occur.
inline ShooterState shooter_reset(const ShooterConfig& cfg) {
    ShooterState st;
    st.ship_col = cfg.width / 2;
    st.targets.resize(cfg.n_targets);
    for (int i = 0; i < cfg.n_targets; ++i) {
        ShooterTarget& t = st.targets[i];
        t.alive = true;
        t.start_col = cfg.target_start(i);
        t.bullseye_col = t.start_col + cfg.target_width / 2;
        t.dir = 1;
    }
    return st;
}

inline PixelGrid shooter_observe(const ShooterState& st, const ShooterConfig& cfg) {
    PixelGrid g(cfg.height, cfg.width);
    for (const ShooterTarget& t : st.targets) {
        if (!t.alive) continue;
        for (int c = t.start_col; c < t.start_col + cfg.target_width; ++c)
            g.at(ShooterConfig::target_row, c) = kTarget;
        g.at(ShooterConfig::target_row, t.bullseye_col) = kBullseye;
    }
    for (const ShooterBullet& b : st.bullets) g.at(b.row, b.col) = kBullet;
    g.at(cfg.ship_row(), st.ship_col) = kShip;
    return g;
}

// Deterministic transition. Order: bullets rise, collisions resolve, the
// ship moves or fires, bullseyes move.
inline double shooter_step(ShooterState& st, int action, const ShooterConfig& cfg) {
    double reward = 0;
    // Bullets rise one row; those leaving the grid vanish.
    std::vector<ShooterBullet> kept;
    kept.reserve(st.bullets.size());
    for (ShooterBullet b : st.bullets) {
        b.row -= 1;
        if (b.row >= 0) kept.push_back(b);
    }
    st.bullets.swap(kept);
    // Collisions: a bullet on the target row destroys a live target it is in.
    kept.clear();
    for (const ShooterBullet& b : st.bullets) {
        bool absorbed = false;
        if (b.row == ShooterConfig::target_row) {
            for (ShooterTarget& t : st.targets) {
                if (!t.alive || b.col < t.start_col || b.col >= t.start_col + cfg.target_width) continue;
                t.alive = false;
                reward += cfg.hit_reward;
                if (b.col == t.bullseye_col) reward += cfg.bullseye_bonus;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) kept.push_back(b);
    }
    st.bullets.swap(kept);
    // Ship.
    switch (action) {
        case kActLeft: st.ship_col = std::max(0, st.ship_col - 1); break;
        case kActRight: st.ship_col = std::min(cfg.width - 1, st.ship_col + 1); break;
        case kActStay: break;
        case kActFire:
            reward += cfg.fire_cost;
            st.bullets.push_back({cfg.ship_row() - 1, st.ship_col});
            break;
        default: throw ConfigError("shooter_step: unknown action");
    }
    // Bullseyes oscillate within their span, bouncing at the edges.
    if (cfg.bullseye_moving) {
        for (ShooterTarget& t : st.targets) {
            if (!t.alive || cfg.target_width < 2) continue;
            int next = t.bullseye_col + t.dir;
            if (next < t.start_col || next >= t.start_col + cfg.target_width) {
                t.dir = -t.dir;
                next = t.bullseye_col + t.dir;
            }
            t.bullseye_col = next;
        }
    }
    return reward;
}

// Reward computable from the current frame and action alone, used by the
// planner on model-sampled frames. Mirrors shooter_step exactly on real
// frames: a bullet one row below a live target span hits it this step, and
// the bonus compares against the bullseye pixel in the current frame.
inline double shooter_frame_reward(const PixelGrid& frame, int action, const ShooterConfig& cfg) {
    double reward = (action == kActFire) ? cfg.fire_cost : 0.0;
    const int impact_row = ShooterConfig::target_row + 1;
    if (impact_row >= frame.height) return reward;
    for (int i = 0; i < cfg.n_targets; ++i) {
        int start = cfg.target_start(i);
        bool alive = false;
        int bullseye_col = -1;
        for (int c = start; c < start + cfg.target_width; ++c) {
            std::uint8_t sym = frame.at(ShooterConfig::target_row, c);
            if (sym == kTarget || sym == kBullseye) alive = true;
            if (sym == kBullseye && bullseye_col < 0) bullseye_col = c;
        }
        if (!alive) continue;
        for (int c = start; c < start + cfg.target_width; ++c) {
            if (frame.at(impact_row, c) != kBullet) continue;
            reward += cfg.hit_reward;
            if (c == bullseye_col) reward += cfg.bullseye_bonus;
            break;
        }
    }
    return reward;
}

// Scripted near-optimal policy: walk under the nearest live target's
// bullseye and fire when aligned, unless a bullet is already in that column.
inline int scripted_expert(const ShooterState& st, const ShooterConfig& cfg) {
    int best_col = -1;
    int best_dist = 1 << 30;
    for (const ShooterTarget& t : st.targets) {
        if (!t.alive) continue;
        int d = std::abs(st.ship_col - t.bullseye_col);
        if (d < best_dist) {
            best_dist = d;
            best_col = t.bullseye_col;
        }
    }
    if (best_col < 0) return kActStay;
    if (best_col < st.ship_col) return kActLeft;
    if (best_col > st.ship_col) return kActRight;
    for (const ShooterBullet& b : st.bullets)
        if (b.col == st.ship_col) return kActStay;
    return kActFire;
}

}  // namespace hdmc

#endif  // HDMC_SHOOTER_HPP

#ifndef HDMC_FACTORED_MODEL_HPP
#define HDMC_FACTORED_MODEL_HPP

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"

#include "hdmc/common.hpp"
#include "hdmc/grid.hpp"
#include "hdmc/mdp.hpp"

namespace hdmc {

// ---------------------------------------------------------------------------
// Tabular count model for small MDPs.
// ---------------------------------------------------------------------------

struct TabularModel {
    int n_states = 0;
    int n_actions = 0;
    double alpha = 0.5;  // add-alpha smoothing pseudo-count
    std::vector<double> counts;  // [s][a][s']

    static TabularModel make(int n_states, int n_actions, double alpha = 0.5) {
        TabularModel m;
        m.n_states = n_states;
        m.n_actions = n_actions;
        m.alpha = alpha;
        m.counts.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
        return m;
    }

    void update(int s, int a, int s2) { counts[static_cast<std::size_t>(s * n_actions + a) * n_states + s2] += 1; }

    std::vector<double> predict(int s, int a) const {
        std::vector<double> p(n_states);
        const double* row = counts.data() + static_cast<std::size_t>(s * n_actions + a) * n_states;
        double total = 0;
        for (int s2 = 0; s2 < n_states; ++s2) total += row[s2];
        double denom = total + alpha * n_states;
        for (int s2 = 0; s2 < n_states; ++s2) p[s2] = (row[s2] + alpha) / denom;
        return p;
    }

    int sample(int s, int a, Rng& rng) const {
        auto p = predict(s, a);
        return rng.categorical(p);
    }

    // Dense MDP view of the smoothed model, for the exact oracles.
    TabularMdp to_tabular_mdp(const TabularMdp& env_like) const {
        TabularMdp m = TabularMdp::zeros(n_states, n_actions);
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a) {
                auto p = predict(s, a);
                std::copy(p.begin(), p.end(), m.row(s, a).begin());
            }
        m.rewards = env_like.rewards;
        m.initial_dist = env_like.initial_dist;
        m.reward_bound = env_like.reward_bound;
        return m;
    }
};

// ---------------------------------------------------------------------------
// Factored per-pixel model.
// ---------------------------------------------------------------------------

// A context is the (2r+1)x(2r+1) neighborhood of a pixel in the previous
// frame (sentinel-padded at borders), packed base-(n_symbols+1) into 128
// bits. With r=3 and 5 symbols that is 6^49 < 2^127 distinct keys.
struct ContextKey {
    unsigned __int128 v = 0;
    bool operator==(const ContextKey& o) const { return v == o.v; }
};

struct ContextKeyHash {
    std::size_t operator()(const ContextKey& k) const {
        auto lo = static_cast<std::uint64_t>(k.v);
        auto hi = static_cast<std::uint64_t>(k.v >> 64);
        return static_cast<std::size_t>(splitmix64(hi ^ splitmix64(lo)));
    }
};

struct LossReport {
    double log_loss = 0;  // mean negative log probability of the target frame
    double l1_style = 0;  // mean (1 - P(target frame | input, action))
};

class FactoredModel {
  public:
    static constexpr int kMaxSymbols = 8;

    FactoredModel() = default;
    FactoredModel(int n_actions, int n_symbols, int radius, double alpha = 0.5,
                  std::size_t max_contexts = 50'000'000, double persist = 0.0)
        : n_actions_(n_actions),
          n_symbols_(n_symbols),
          radius_(radius),
          alpha_(alpha),
          persist_(persist),
          max_contexts_(max_contexts),
          tables_(n_actions) {
        if (n_symbols < 1 || n_symbols > kMaxSymbols) throw ConfigError("FactoredModel: unsupported symbol count");
        int side = 2 * radius + 1;
        double bits = side * side * std::log2(static_cast<double>(n_symbols + 1));
        if (bits >= 127) throw ConfigError("FactoredModel: context does not fit in 128 bits");
        col_base_ = 1;
        for (int i = 0; i < side; ++i) col_base_ *= static_cast<unsigned>(n_symbols + 1);
        high_col_ = 1;
        for (int i = 0; i < side - 1; ++i) high_col_ *= col_base_;
        center_col_div_ = 1;
        for (int i = 0; i < radius; ++i) center_col_div_ *= col_base_;
        center_pix_div_ = 1;
        for (int i = 0; i < radius; ++i) center_pix_div_ *= static_cast<unsigned>(n_symbols + 1);
    }

    int n_actions() const { return n_actions_; }
    int n_symbols() const { return n_symbols_; }
    int radius() const { return radius_; }
    double alpha() const { return alpha_; }
    double persist() const { return persist_; }
    std::size_t n_contexts() const {
        std::size_t n = 0;
        for (const auto& t : tables_) n += t.size();
        return n;
    }

    // Keys pack the window column-major so that sliding one pixel to the
    // right only exchanges one column of digits.
    ContextKey context_key(const PixelGrid& frame, int row, int col) const {
        unsigned __int128 v = 0;
        for (int dc = -radius_; dc <= radius_; ++dc) v = v * col_base_ + column_value(frame, row, col + dc);
        return {v};
    }

    // Visit every pixel's context key in row-major order, reusing column
    // digits between neighboring windows.
    template <class Fn>
    void for_each_context(const PixelGrid& frame, Fn&& fn) const {
        const int side = 2 * radius_ + 1;
        std::vector<unsigned __int128> cols(static_cast<std::size_t>(frame.width) + side - 1);
        for (int r = 0; r < frame.height; ++r) {
            for (int i = 0; i < static_cast<int>(cols.size()); ++i)
                cols[i] = column_value(frame, r, i - radius_);
            unsigned __int128 key = 0;
            for (int i = 0; i < side; ++i) key = key * col_base_ + cols[i];
            fn(r, 0, ContextKey{key});
            for (int c = 1; c < frame.width; ++c) {
                key = (key - cols[c - 1] * high_col_) * col_base_ + cols[c + side - 1];
                fn(r, c, ContextKey{key});
            }
        }
    }

    // Per-pixel predictive distribution over symbols.
    std::array<double, kMaxSymbols> predict_pixel(const PixelGrid& frame, int action, int row, int col) const {
        return predict_key(context_key(frame, row, col), action);
    }

    void update(const PixelGrid& input, int action, const PixelGrid& target) {
        if (input.height != target.height || input.width != target.width)
            throw ConfigError("FactoredModel::update: frame shape mismatch");
        auto& table = tables_[action];
        for_each_context(input, [&](int r, int c, ContextKey key) {
            auto it = table.find(key);
            if (it == table.end()) {
                if (n_contexts() >= max_contexts_)
                    throw ModelCapacityError("FactoredModel: context table capacity exceeded");
                it = table.emplace(key, Counts{}).first;
            }
            it->second[target.at(r, c)] += 1;
        });
    }

    PixelGrid sample_next(const PixelGrid& frame, int action, Rng& rng) const {
        PixelGrid out(frame.height, frame.width);
        for_each_context(frame, [&](int r, int c, ContextKey key) {
            auto p = predict_key(key, action);
            out.at(r, c) = static_cast<std::uint8_t>(
                rng.categorical(std::span<const double>(p.data(), static_cast<std::size_t>(n_symbols_))));
        });
        return out;
    }

    // Log probability of a full target frame under the factored prediction.
    double frame_log_prob(const PixelGrid& input, int action, const PixelGrid& target) const {
        double log_p = 0;
        for_each_context(input, [&](int r, int c, ContextKey key) {
            log_p += std::log(predict_key(key, action)[target.at(r, c)]);
        });
        return log_p;
    }

    struct Triple {
        PixelGrid input;
        int action;
        PixelGrid target;
    };

    LossReport log_loss(std::span<const Triple> dataset) const {
        if (dataset.empty()) throw EmptyDatasetError("log_loss: empty dataset");
        LossReport rep;
        for (const Triple& tr : dataset) {
            double log_p = frame_log_prob(tr.input, tr.action, tr.target);
            rep.log_loss += -log_p;
            rep.l1_style += 1.0 - std::exp(log_p);
        }
        rep.log_loss /= static_cast<double>(dataset.size());
        rep.l1_style /= static_cast<double>(dataset.size());
        return rep;
    }

    // Mean (1 - P(target | input, action)) alone, the loss the bounds track.
    double mean_one_minus_p(std::span<const Triple> dataset) const {
        if (dataset.empty()) throw EmptyDatasetError("mean_one_minus_p: empty dataset");
        double acc = 0;
        for (const Triple& tr : dataset) acc += 1.0 - std::exp(frame_log_prob(tr.input, tr.action, tr.target));
        return acc / static_cast<double>(dataset.size());
    }

    // Text snapshot: "action key_hi key_lo count..." per context, sorted.
    void save(std::ostream& os) const {
        os << "factored_model " << n_actions_ << " " << n_symbols_ << " " << radius_ << " "
           << format_double(alpha_) << " " << format_double(persist_) << "\n";
        for (int a = 0; a < n_actions_; ++a) {
            std::vector<std::pair<ContextKey, Counts>> rows(tables_[a].begin(), tables_[a].end());
            std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first.v < y.first.v; });
            for (const auto& [key, counts] : rows) {
                os << a << " " << static_cast<std::uint64_t>(key.v >> 64) << " "
                   << static_cast<std::uint64_t>(key.v);
                for (int s = 0; s < n_symbols_; ++s) os << " " << counts[s];
                os << "\n";
            }
        }
    }

    static FactoredModel load(std::istream& is) {
        std::string tag;
        int n_actions, n_symbols, radius;
        double alpha, persist;
        if (!(is >> tag) || tag != "factored_model" ||
            !(is >> n_actions >> n_symbols >> radius >> alpha >> persist))
            throw ParseError("bad factored_model header", 1);
        FactoredModel m(n_actions, n_symbols, radius, alpha, 50'000'000, persist);
        int a;
        int line = 2;
        while (is >> a) {
            std::uint64_t hi, lo;
            if (a < 0 || a >= n_actions || !(is >> hi >> lo)) throw ParseError("bad context record", line);
            ContextKey key{(static_cast<unsigned __int128>(hi) << 64) | lo};
            Counts counts{};
            for (int s = 0; s < n_symbols; ++s)
                if (!(is >> counts[s])) throw ParseError("truncated counts", line);
            m.tables_[a][key] = counts;
            ++line;
        }
        return m;
    }

    bool operator==(const FactoredModel& o) const {
        if (n_actions_ != o.n_actions_ || n_symbols_ != o.n_symbols_ || radius_ != o.radius_ ||
            alpha_ != o.alpha_ || persist_ != o.persist_)
            return false;
        for (int a = 0; a < n_actions_; ++a) {
            if (tables_[a].size() != o.tables_[a].size()) return false;
            for (const auto& [key, counts] : tables_[a]) {
                auto it = o.tables_[a].find(key);
                if (it == o.tables_[a].end() || it->second != counts) return false;
            }
        }
        return true;
    }

    // Order-insensitive fingerprint of the full count state.
    std::uint64_t checksum() const {
        std::uint64_t acc = splitmix64(static_cast<std::uint64_t>(n_contexts()));
        for (int a = 0; a < n_actions_; ++a)
            for (const auto& [key, counts] : tables_[a]) {
                std::uint64_t h = ContextKeyHash{}(key) ^ splitmix64(static_cast<std::uint64_t>(a) + 17);
                for (int s = 0; s < n_symbols_; ++s) h = splitmix64(h ^ counts[s]);
                acc ^= h;  // xor: independent of iteration order
            }
        return acc;
    }

    // Predictive distribution for an explicit context key: observed counts
    // with add-alpha smoothing. Contexts with no observations back off to a
    // persistence prior — a pseudo-count on the window's own center symbol
    // ("a pixel tends to keep its value") — which keeps unexplored contexts
    // from injecting uniform pixel noise into sampled frames.
    std::array<double, kMaxSymbols> predict_key(ContextKey key, int action) const {
        std::array<double, kMaxSymbols> p{};
        const auto& table = tables_[action];
        auto it = table.find(key);
        double total = 0;
        if (it != table.end())
            for (int s = 0; s < n_symbols_; ++s) total += it->second[s];
        int center = center_symbol(key);
        // center can be the border sentinel, which is outside the symbol range
        double persist = (total == 0 && center < n_symbols_) ? persist_ : 0.0;
        double denom = total + alpha_ * n_symbols_ + persist;
        for (int s = 0; s < n_symbols_; ++s) {
            double c = (it != table.end()) ? static_cast<double>(it->second[s]) : 0.0;
            p[s] = (c + alpha_ + (s == center ? persist : 0.0)) / denom;
        }
        return p;
    }

    // The center pixel's symbol, recovered from the packed key.
    int center_symbol(ContextKey key) const {
        unsigned __int128 colv = (key.v / center_col_div_) % col_base_;
        return static_cast<int>((colv / center_pix_div_) % static_cast<unsigned>(n_symbols_ + 1));
    }

  private:
    using Counts = std::array<std::uint32_t, kMaxSymbols>;

    // One window column packed base-(n_symbols+1), top to bottom.
    unsigned __int128 column_value(const PixelGrid& frame, int row, int col) const {
        const unsigned base = static_cast<unsigned>(n_symbols_) + 1;
        unsigned __int128 v = 0;
        for (int dr = -radius_; dr <= radius_; ++dr) {
            std::uint8_t sym = frame.at_padded(row + dr, col);
            if (sym > n_symbols_) sym = static_cast<std::uint8_t>(n_symbols_);  // sentinel folds to base-1
            v = v * base + sym;
        }
        return v;
    }

    int n_actions_ = 0;
    int n_symbols_ = 0;
    int radius_ = 0;
    double alpha_ = 0.5;
    double persist_ = 0.0;  // pseudo-count on the center symbol repeating
    std::size_t max_contexts_ = 0;
    unsigned __int128 col_base_ = 1;       // base^(2r+1)
    unsigned __int128 high_col_ = 1;       // base^((2r+1)*2r), weight of the leftmost column
    unsigned __int128 center_col_div_ = 1; // col_base^r, weight of the center column
    unsigned __int128 center_pix_div_ = 1; // base^r, weight of the center pixel within its column
    std::vector<absl::flat_hash_map<ContextKey, Counts, ContextKeyHash>> tables_;
};

// ---------------------------------------------------------------------------
// Per-depth model stack.
// ---------------------------------------------------------------------------

enum class ModelMode { unrolled, single };

// Stack of per-depth models P^1..P^{T-1}. In single mode one model is
// aliased at every depth. Depths are 1-based.
class UnrolledModel {
  public:
    UnrolledModel() = default;
    UnrolledModel(ModelMode mode, int max_depth, const FactoredModel& prototype)
        : mode_(mode), max_depth_(max_depth) {
        int n = (mode == ModelMode::single) ? 1 : max_depth;
        models_.assign(n, prototype);
    }

    ModelMode mode() const { return mode_; }
    int max_depth() const { return max_depth_; }

    FactoredModel& at_depth(int t) { return models_[index(t)]; }
    const FactoredModel& at_depth(int t) const { return models_[index(t)]; }

    void update_depth(int t, const PixelGrid& input, int action, const PixelGrid& target) {
        at_depth(t).update(input, action, target);
    }

  private:
    int index(int t) const {
        if (t < 1 || t > max_depth_) throw ConfigError("UnrolledModel: depth out of range");
        return (mode_ == ModelMode::single) ? 0 : t - 1;
    }

    ModelMode mode_ = ModelMode::unrolled;
    int max_depth_ = 0;
    std::vector<FactoredModel> models_;
};

}  // namespace hdmc

#endif  // HDMC_FACTORED_MODEL_HPP

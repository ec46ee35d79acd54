// Factored per-pixel model tests: prediction arithmetic, context-key
// consistency, update commutativity, per-depth isolation, persistence.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "hdmc/factored_model.hpp"
#include "hdmc/shooter.hpp"

using namespace hdmc;

namespace {

PixelGrid random_frame(int h, int w, Rng& rng) {
    PixelGrid g(h, w);
    for (auto& c : g.cells) c = static_cast<std::uint8_t>(rng.uniform_int(kNumPixelSymbols));
    return g;
}

}  // namespace

TEST_CASE("unseen contexts predict the uniform prior", "[model]") {
    FactoredModel m(2, kNumPixelSymbols, 3, 0.5);
    PixelGrid frame(5, 5);
    auto p = m.predict_pixel(frame, 0, 2, 2);
    for (int s = 0; s < kNumPixelSymbols; ++s) REQUIRE(p[s] == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("smoothed counts follow the add-alpha formula", "[model]") {
    // 8 observations of one symbol with alpha = 1: (8+1)/(8+5) = 9/13.
    FactoredModel m(1, kNumPixelSymbols, 1, 1.0);
    PixelGrid in(1, 1);
    PixelGrid out(1, 1);
    out.at(0, 0) = kBullet;
    for (int i = 0; i < 8; ++i) m.update(in, 0, out);
    auto p = m.predict_pixel(in, 0, 0, 0);
    REQUIRE(p[kBullet] == Catch::Approx(9.0 / 13.0).margin(1e-12));
    REQUIRE(p[kEmpty] == Catch::Approx(1.0 / 13.0).margin(1e-12));
}

TEST_CASE("persistence back-off prior concentrates unseen contexts on the center symbol", "[model]") {
    FactoredModel m(1, kNumPixelSymbols, 2, 0.01, 1000, 100.0);
    Rng rng(7);
    PixelGrid frame = random_frame(6, 8, rng);
    // Unseen context: nearly all mass on the pixel's current symbol.
    m.for_each_context(frame, [&](int r, int c, ContextKey key) {
        REQUIRE(m.center_symbol(key) == frame.at(r, c));
        auto p = m.predict_key(key, 0);
        double expect = (100.0 + 0.01) / (100.0 + 0.01 * kNumPixelSymbols);
        REQUIRE(p[frame.at(r, c)] == Catch::Approx(expect).margin(1e-12));
    });
    // Once a context is observed, the prior drops out and counts take over.
    PixelGrid target = frame;
    target.at(2, 3) = (frame.at(2, 3) + 1) % kNumPixelSymbols;
    m.update(frame, 0, target);
    auto p = m.predict_pixel(frame, 0, 2, 3);
    REQUIRE(p[target.at(2, 3)] == Catch::Approx(1.01 / 1.05).margin(1e-12));
}

TEST_CASE("rolling context keys match direct extraction", "[model]") {
    FactoredModel m(1, kNumPixelSymbols, 3, 0.5);
    Rng rng(42);
    for (int rep = 0; rep < 5; ++rep) {
        PixelGrid frame = random_frame(9, 15, rng);
        m.for_each_context(frame, [&](int r, int c, ContextKey key) {
            REQUIRE(key == m.context_key(frame, r, c));
        });
    }
}

TEST_CASE("context keys distinguish border sentinel padding from empty", "[model]") {
    FactoredModel m(1, kNumPixelSymbols, 1, 0.5);
    PixelGrid frame(4, 4);
    // Corner pixel (0,0) sees sentinel padding; interior (1,1) sees all-empty.
    REQUIRE_FALSE(m.context_key(frame, 0, 0) == m.context_key(frame, 1, 1));
    // Two interior pixels of a uniform frame share a context.
    REQUIRE(m.context_key(frame, 1, 1) == m.context_key(frame, 2, 2));
}

TEST_CASE("update order does not matter", "[model]") {
    Rng rng(9);
    std::vector<FactoredModel::Triple> triples;
    for (int i = 0; i < 6; ++i)
        triples.push_back({random_frame(4, 6, rng), i % 2, random_frame(4, 6, rng)});
    FactoredModel fwd(2, kNumPixelSymbols, 2, 0.5);
    FactoredModel rev(2, kNumPixelSymbols, 2, 0.5);
    for (const auto& t : triples) fwd.update(t.input, t.action, t.target);
    for (auto it = triples.rbegin(); it != triples.rend(); ++it) rev.update(it->input, it->action, it->target);
    REQUIRE(fwd == rev);
    REQUIRE(fwd.checksum() == rev.checksum());
}

TEST_CASE("frame log probability factorizes over pixels", "[model]") {
    Rng rng(15);
    FactoredModel m(1, kNumPixelSymbols, 1, 0.5);
    PixelGrid in = random_frame(3, 3, rng);
    PixelGrid out = random_frame(3, 3, rng);
    m.update(in, 0, out);
    PixelGrid probe = random_frame(3, 3, rng);
    double direct = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) direct += std::log(m.predict_pixel(in, 0, r, c)[probe.at(r, c)]);
    REQUIRE(m.frame_log_prob(in, 0, probe) == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("log loss of a fresh model on one pixel is ln 5", "[model]") {
    FactoredModel m(1, kNumPixelSymbols, 1, 0.5);
    std::vector<FactoredModel::Triple> data;
    data.push_back({PixelGrid(1, 1), 0, PixelGrid(1, 1)});
    LossReport rep = m.log_loss(data);
    REQUIRE(rep.log_loss == Catch::Approx(std::log(5.0)).margin(1e-12));
    REQUIRE(rep.l1_style == Catch::Approx(0.8).margin(1e-12));
    REQUIRE(m.mean_one_minus_p(data) == Catch::Approx(0.8).margin(1e-12));
}

TEST_CASE("empty datasets are rejected", "[model]") {
    FactoredModel m(1, kNumPixelSymbols, 1, 0.5);
    std::vector<FactoredModel::Triple> empty;
    REQUIRE_THROWS_AS(m.log_loss(empty), EmptyDatasetError);
    REQUIRE_THROWS_AS(m.mean_one_minus_p(empty), EmptyDatasetError);
}

TEST_CASE("a trained model sharpens toward the observed successor", "[model]") {
    // Train on one deterministic pixel rule; prediction mass concentrates.
    FactoredModel m(1, kNumPixelSymbols, 1, 0.02);
    PixelGrid in(2, 2);
    in.at(0, 0) = kShip;
    PixelGrid out(2, 2);
    out.at(1, 1) = kShip;
    for (int i = 0; i < 20; ++i) m.update(in, 0, out);
    REQUIRE(std::exp(m.frame_log_prob(in, 0, out)) > 0.98);
    Rng rng(4);
    PixelGrid sampled = m.sample_next(in, 0, rng);
    REQUIRE(sampled == out);
}

TEST_CASE("capacity overflow raises the typed error", "[model]") {
    FactoredModel m(1, kNumPixelSymbols, 1, 0.5, /*max_contexts=*/1);
    Rng rng(21);
    PixelGrid in = random_frame(2, 3, rng);  // 6 distinct border contexts
    PixelGrid out = random_frame(2, 3, rng);
    REQUIRE_THROWS_AS(m.update(in, 0, out), ModelCapacityError);
}

TEST_CASE("save/load round-trips the full count state", "[model]") {
    Rng rng(33);
    FactoredModel m(2, kNumPixelSymbols, 2, 0.5);
    for (int i = 0; i < 4; ++i) m.update(random_frame(4, 5, rng), i % 2, random_frame(4, 5, rng));
    std::stringstream ss;
    m.save(ss);
    FactoredModel back = FactoredModel::load(ss);
    REQUIRE(back == m);
    REQUIRE(back.checksum() == m.checksum());
    REQUIRE(back.n_contexts() == m.n_contexts());
}

TEST_CASE("corrupted snapshots are rejected", "[model]") {
    std::stringstream bad1("wrong_header 1 2 3 0.5\n");
    REQUIRE_THROWS_AS(FactoredModel::load(bad1), ParseError);
    std::stringstream bad2("factored_model 1 5 1 0.5\n0 0 12 1 2 3\n");  // truncated counts
    REQUIRE_THROWS_AS(FactoredModel::load(bad2), ParseError);
}

TEST_CASE("per-depth models are isolated in unrolled mode", "[model]") {
    FactoredModel proto(1, kNumPixelSymbols, 1, 0.5);
    UnrolledModel stack(ModelMode::unrolled, 3, proto);
    Rng rng(55);
    PixelGrid in = random_frame(3, 3, rng);
    PixelGrid out = random_frame(3, 3, rng);
    auto c1 = stack.at_depth(1).checksum();
    auto c3 = stack.at_depth(3).checksum();
    stack.update_depth(2, in, 0, out);
    REQUIRE(stack.at_depth(1).checksum() == c1);
    REQUIRE(stack.at_depth(3).checksum() == c3);
    REQUIRE(stack.at_depth(2).n_contexts() > 0);
}

TEST_CASE("single mode aliases one model at every depth", "[model]") {
    FactoredModel proto(1, kNumPixelSymbols, 1, 0.5);
    UnrolledModel stack(ModelMode::single, 5, proto);
    Rng rng(56);
    PixelGrid in = random_frame(3, 3, rng);
    PixelGrid out = random_frame(3, 3, rng);
    stack.update_depth(4, in, 0, out);
    REQUIRE(stack.at_depth(1).checksum() == stack.at_depth(4).checksum());
    REQUIRE(stack.at_depth(1).n_contexts() > 0);
    REQUIRE_THROWS_AS(stack.at_depth(6), ConfigError);
    REQUIRE_THROWS_AS(stack.at_depth(0), ConfigError);
}

TEST_CASE("tabular count model matches its closed-form prediction", "[model]") {
    TabularModel m = TabularModel::make(3, 2, 0.5);
    m.update(0, 1, 2);
    m.update(0, 1, 2);
    m.update(0, 1, 1);
    auto p = m.predict(0, 1);
    REQUIRE(p[2] == Catch::Approx(2.5 / 4.5).margin(1e-12));
    REQUIRE(p[1] == Catch::Approx(1.5 / 4.5).margin(1e-12));
    REQUIRE(p[0] == Catch::Approx(0.5 / 4.5).margin(1e-12));
}

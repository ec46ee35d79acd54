// Value-error bound tests: perfect-model degeneracy, the factor-2 identity
// for deterministic rows, inequality sweeps, and the counterexample values.

#include <catch2/catch_amalgamated.hpp>

#include "hdmc/bounds.hpp"
#include "hdmc/coin.hpp"
#include "hdmc/random_mdp.hpp"

using namespace hdmc;

TEST_CASE("l1 distance basics", "[bounds]") {
    std::vector<double> p{0.5, 0.5, 0.0};
    std::vector<double> q{0.0, 0.5, 0.5};
    REQUIRE(l1_distance(p, q) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(l1_distance(p, p) == 0.0);
}

TEST_CASE("a perfect model has zero value error and zero bounds", "[bounds]") {
    Rng rng(41);
    TabularMdp env = random_stochastic_model(4, 2, 1.0, rng);
    StateActionDist xi = random_state_action_dist(4, 2, rng);
    MarkovPolicy pi = random_markov_policy(4, 2, rng);
    ErrorReport rep = compute_error_report(env, env, xi, pi, 4, 0.9, 1.0);
    REQUIRE(rep.eps_val == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(rep.one_step == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(rep.multi_step == Catch::Approx(0.0).margin(1e-12));
    // The joint hallucinated bound is NOT zero for a perfect model: its two
    // chains run independently, which is the looseness the counterexamples
    // demonstrate. It still upper-bounds the (zero) value error.
    REQUIRE(rep.hallucinated_joint >= 0.0);
}

TEST_CASE("factor-2 identity for deterministic environment rows", "[bounds]") {
    // |P_s^a - Ph_z^a|_1 = 2 (1 - Ph_z^a(sigma_s^a)) when P is a point mass.
    Rng rng(43);
    for (int i = 0; i < 1000; ++i) {
        int S = 2 + rng.uniform_int(5);
        std::vector<double> row(S);
        detail::fill_dirichlet_row(row, 1.0, rng);
        int sigma = rng.uniform_int(S);
        std::vector<double> point(S, 0.0);
        point[sigma] = 1.0;
        double lhs = l1_distance(point, row);
        double rhs = 2.0 * (1.0 - row[sigma]);
        REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
    }
}

TEST_CASE("horizon-1 value error reduces to zero for shared rewards", "[bounds]") {
    // Q_1 = R on both sides; with the reward function shared, eps_val(T=1) = 0.
    Rng rng(47);
    TabularMdp env = random_stochastic_model(3, 2, 1.0, rng);
    TabularMdp model = random_stochastic_model(3, 2, 1.0, rng);
    model.rewards = env.rewards;
    StateActionDist xi = random_state_action_dist(3, 2, rng);
    MarkovPolicy pi = random_markov_policy(3, 2, rng);
    REQUIRE(value_error(env, model, xi, pi, 1, 0.9) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("bounds hold on random stochastic instances", "[bounds]") {
    Rng rng(53);
    for (int i = 0; i < 20; ++i) {
        int S = 2 + rng.uniform_int(4);
        int A = 2 + rng.uniform_int(2);
        TabularMdp env = random_stochastic_model(S, A, 1.0, rng);
        TabularMdp model = random_stochastic_model(S, A, 1.0, rng);
        model.rewards = env.rewards;
        StateActionDist xi = random_state_action_dist(S, A, rng);
        MarkovPolicy pi = random_markov_policy(S, A, rng);
        int T = 2 + rng.uniform_int(3);
        double gamma = rng.bernoulli(0.5) ? 0.5 : 0.9;
        ErrorReport rep = compute_error_report(env, model, xi, pi, T, gamma, 1.0);
        REQUIRE(rep.eps_val <= rep.one_step + 1e-9);
        REQUIRE(rep.eps_val <= rep.multi_step + 1e-9);
        REQUIRE(rep.eps_val <= rep.hallucinated_joint + 1e-9);
    }
}

TEST_CASE("tightness chain holds on random deterministic instances", "[bounds]") {
    Rng rng(59);
    for (int i = 0; i < 20; ++i) {
        int S = 2 + rng.uniform_int(4);
        int A = 2 + rng.uniform_int(2);
        DeterministicMdp env = random_deterministic_mdp(S, A, rng);
        TabularMdp model = random_stochastic_model(S, A, 1.0, rng);
        model.rewards = env.rewards;
        BlindPolicy policy = BlindPolicy::hashed_table(A, rng.next_u64());
        StateActionDist xi = random_state_action_dist(S, A, rng);
        int T = 2 + rng.uniform_int(3);
        double gamma = rng.bernoulli(0.5) ? 0.5 : 0.9;
        ChainReport rep = verify_tightness_chain(env, model, xi, policy, T, gamma, 1.0);
        INFO(rep.violation);
        REQUIRE(rep.holds);
    }
}

TEST_CASE("joint expectation is positive for a perfect model on the stochastic coin", "[bounds]") {
    TabularMdp coin = make_coin_mdp_stochastic();
    StateActionDist xi = StateActionDist::point_mass(3, 1, kCoinStart, 0);
    MarkovPolicy pi = MarkovPolicy::uniform(3, 1);
    // After one transition the two independent chains disagree half the time;
    // each disagreeing pair contributes |P_h - P_t|_1 = 2.
    JointDist j = exact_joint_dist(coin, coin, xi, pi, 2);
    REQUIRE(j.at(kCoinHeads, 0, kCoinTails, 0) == Catch::Approx(0.25).margin(1e-14));
    REQUIRE(j.at(kCoinTails, 0, kCoinHeads, 0) == Catch::Approx(0.25).margin(1e-14));
    REQUIRE(joint_one_step_expectation(coin, coin, j) == Catch::Approx(1.0).margin(1e-12));
    // The standard (marginal) one-step error is exactly zero.
    StateActionDist d2 = exact_state_action_dist(coin, xi, pi, 2);
    double standard = 0;
    for (int s = 0; s < 3; ++s) standard += d2(s, 0) * l1_distance(coin.row(s, 0), coin.row(s, 0));
    REQUIRE(standard == 0.0);
}

TEST_CASE("independent action sampling decouples a perfect model on the deterministic coin", "[bounds]") {
    DeterministicMdp det = make_coin_mdp_deterministic();
    TabularMdp tab = det.to_tabular();
    BlindPolicy hold = make_coin_set_and_hold_policy();
    std::vector<double> mu{1.0, 0.0, 0.0};
    // Chains sharing only the start state pick opposite orientations half the
    // time; each such pair contributes 2.
    double indep = independent_execution_expectation(tab, tab, mu, hold, 2);
    REQUIRE(indep == Catch::Approx(1.0).margin(1e-12));
    // With one shared action sequence the perfect model never deviates.
    StateActionDist xi = StateActionDist::zeros(3, 2);
    xi(kCoinStart, kSetHeads) = 0.5;
    xi(kCoinStart, kSetTails) = 0.5;
    REQUIRE(hallucinated_blind_bound(det, tab, xi, hold, 4, 0.9, 1.0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("a wrong model is caught by every bound on the coin", "[bounds]") {
    TabularMdp coin = make_coin_mdp_stochastic();
    TabularMdp wrong = coin;
    // The wrong model believes the coin always lands heads.
    wrong.row(kCoinStart, 0)[kCoinHeads] = 1.0;
    wrong.row(kCoinStart, 0)[kCoinTails] = 0.0;
    StateActionDist xi = StateActionDist::point_mass(3, 1, kCoinStart, 0);
    MarkovPolicy pi = MarkovPolicy::uniform(3, 1);
    const int T = 3;
    const double gamma = 0.9;
    double eps = value_error(coin, wrong, xi, pi, T, gamma);
    // Qh(start) = gamma * (1 + gamma) = 1.71 vs Q(start) = 0.855.
    REQUIRE(eps == Catch::Approx(0.855).margin(1e-12));
    ErrorReport rep = compute_error_report(coin, wrong, xi, pi, T, gamma, 1.0);
    REQUIRE(rep.one_step >= eps - 1e-12);
    REQUIRE(rep.multi_step >= eps - 1e-12);
    REQUIRE(rep.hallucinated_joint >= eps - 1e-12);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mdplab/evaluation.hpp"
#include "oracles.hpp"

using namespace mdplab;

namespace {

const oracles::TwoStateChain kFixture{0.3, 0.2};

Mdp fixture_mdp() {
    return oracles::chain_as_mdp(kFixture.transition(), {1.0, 0.0}, {1.0, 0.0});
}

} // namespace

TEST_CASE("eval_discounted: gamma = 0 is the myopic case") {
    const Mdp mdp = garnet(5, 3, 3, 0.2, 17);
    const Policy pi = Policy::uniform(5, 3);
    const DiscountedEval eval = eval_discounted(mdp, pi, 0.0);
    const InducedChain chain = induce_chain(mdp, pi);
    for (int x = 0; x < 5; ++x) {
        CHECK(eval.v[x] == doctest::Approx(chain.reward[x]).epsilon(1e-13));
        for (int a = 0; a < 3; ++a) {
            CHECK(eval.q(x, a) == doctest::Approx(mdp.reward(x, a)).epsilon(1e-13));
            CHECK(eval.adv(x, a) ==
                  doctest::Approx(mdp.reward(x, a) - chain.reward[x]).epsilon(1e-13));
        }
    }
}

TEST_CASE("eval_discounted: 2-state fixture return") {
    const DiscountedEval eval = eval_discounted(fixture_mdp(), Policy::uniform(2, 1), 0.9);
    // eta = 0.1 * mu^T (I - 0.9 P)^{-1} r with det 0.055: 28/55
    CHECK(eval.eta == doctest::Approx(28.0 / 55.0).epsilon(1e-12));
    CHECK(eval.bellman_residual <= 1e-12);
    CHECK(eval.adv_mean_residual <= 1e-12);
}

TEST_CASE("eval_discounted: constant reward collapses to c/(1-gamma)") {
    Mdp mdp = garnet(4, 2, 2, 0.0, 5);
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 2; ++a) mdp.reward(x, a) = 3.0;
    const DiscountedEval eval = eval_discounted(mdp, Policy::uniform(4, 2), 0.8);
    for (int x = 0; x < 4; ++x) {
        CHECK(eval.v[x] == doctest::Approx(3.0 / 0.2).epsilon(1e-11));
        for (int a = 0; a < 2; ++a) CHECK(eval.adv(x, a) == doctest::Approx(0.0).epsilon(1e-10));
    }
    CHECK(eval.eta == doctest::Approx(3.0).epsilon(1e-11));
}

TEST_CASE("eval_discounted: gamma outside [0,1) rejected") {
    CHECK_THROWS_AS(eval_discounted(fixture_mdp(), Policy::uniform(2, 1), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_discounted(fixture_mdp(), Policy::uniform(2, 1), -0.1),
                    std::invalid_argument);
}

TEST_CASE("eval_average: single state") {
    Mdp mdp = Mdp::zeros(1, 1);
    mdp.transition_prob(0, 0, 0) = 1.0;
    mdp.reward(0, 0) = 0.7;
    mdp.initial_dist = {1.0};
    const AverageEval eval = eval_average(mdp, Policy::uniform(1, 1));
    CHECK(eval.eta == doctest::Approx(0.7));
    CHECK(eval.v[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eval_average: 2-state fixture") {
    const AverageEval eval = eval_average(fixture_mdp(), Policy::uniform(2, 1));
    CHECK(eval.eta == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(eval.v[0] == doctest::Approx(1.2).epsilon(1e-11));
    CHECK(eval.v[1] == doctest::Approx(-0.8).epsilon(1e-11));
    CHECK(eval.poisson_residual <= 1e-12);
    CHECK(eval.normalization_residual <= 1e-12);
    CHECK(eval.used_group_inverse);
}

TEST_CASE("eval_average: doubly stochastic chain averages the rewards") {
    const Matrix p{{0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}};
    const Vector r{3.0, 0.0, -1.5};
    const Mdp mdp = oracles::chain_as_mdp(p, r, {1.0, 0.0, 0.0});
    const AverageEval eval = eval_average(mdp, Policy::uniform(3, 1));
    CHECK(eval.eta == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("eval_average: multichain rejected") {
    const Mdp mdp = oracles::chain_as_mdp(Matrix::identity(2), {1.0, 0.0}, {0.5, 0.5});
    CHECK_THROWS_AS(eval_average(mdp, Policy::uniform(2, 1)), NotUnichainError);
}

TEST_CASE("eval_average: periodic chain uses the direct Poisson route") {
    Matrix cycle(3, 3);
    for (int i = 0; i < 3; ++i) cycle(i, (i + 1) % 3) = 1.0;
    const Vector r{3.0, 0.0, 0.0};
    const Mdp mdp = oracles::chain_as_mdp(cycle, r, {1.0, 0.0, 0.0});
    const AverageEval eval = eval_average(mdp, Policy::uniform(3, 1));
    CHECK_FALSE(eval.used_group_inverse);
    CHECK(eval.eta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval.poisson_residual <= 1e-10);
    CHECK(eval.normalization_residual <= 1e-10);
}

TEST_CASE("advantage is zero-mean under its own policy (property)") {
    DeterministicRng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const int na = 2 + static_cast<int>(rng.below(4));
        const Mdp mdp = garnet(n, na, std::max(2, n / 2), 0.3, 4000 + trial);
        const Policy pi = oracles::random_policy(rng, n, na);

        const DiscountedEval dis = eval_discounted(mdp, pi, 0.9);
        CHECK(dis.adv_mean_residual <= 1e-10);

        if (validate_reachability(mdp, pi).unichain) {
            const AverageEval avg = eval_average(mdp, pi);
            CHECK(avg.adv_mean_residual <= 1e-10);
            CHECK(avg.poisson_residual <= 1e-9);
            CHECK(avg.normalization_residual <= 1e-9);
        }
    }
}

TEST_CASE("eta equals the occupancy-weighted reward (property)") {
    DeterministicRng rng(22);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const Mdp mdp = garnet(n, 3, std::max(2, n / 2), 0.0, 5000 + trial);
        const Policy pi = oracles::random_policy(rng, n, 3);
        const InducedChain chain = induce_chain(mdp, pi);
        for (double gamma : {0.0, 0.5, 0.9, 0.99}) {
            const DiscountedEval eval = eval_discounted(mdp, pi, gamma);
            const Vector d = occupancy(chain, mdp.initial_dist, gamma).dist;
            CHECK(eval.eta == doctest::Approx(dot(d, chain.reward)).epsilon(1e-10));
        }
    }
}

TEST_CASE("reward shift equivariance (property)") {
    DeterministicRng rng(23);
    const double shift = 2.75;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const Mdp mdp = garnet(n, 2, n, 0.0, 6000 + trial); // full branching: irreducible
        Mdp shifted = mdp;
        for (int x = 0; x < n; ++x)
            for (int a = 0; a < 2; ++a) shifted.reward(x, a) += shift;
        const Policy pi = oracles::random_policy(rng, n, 2);

        const DiscountedEval dis = eval_discounted(mdp, pi, 0.9);
        const DiscountedEval dis_shifted = eval_discounted(shifted, pi, 0.9);
        CHECK(dis_shifted.eta - dis.eta == doctest::Approx(shift).epsilon(1e-10));
        CHECK(max_abs_diff(dis_shifted.adv, dis.adv) <= 1e-10);

        const AverageEval avg = eval_average(mdp, pi);
        const AverageEval avg_shifted = eval_average(shifted, pi);
        CHECK(avg_shifted.eta - avg.eta == doctest::Approx(shift).epsilon(1e-10));
        CHECK(max_abs_diff(avg_shifted.adv, avg.adv) <= 1e-10);
    }
}

TEST_CASE("limit_check: single state has exactly zero gaps") {
    Mdp mdp = Mdp::zeros(1, 1);
    mdp.transition_prob(0, 0, 0) = 1.0;
    mdp.reward(0, 0) = 0.3;
    mdp.initial_dist = {1.0};
    const LimitCheckReport report =
        limit_check(mdp, Policy::uniform(1, 1), default_gamma_schedule());
    for (const auto& row : report.rows) {
        CHECK(row.eta_gap <= 1e-12);
        CHECK(row.v_gap <= 1e-9);
        CHECK(row.q_gap <= 1e-9);
        CHECK(row.adv_gap <= 1e-12);
    }
}

TEST_CASE("limit_check: 2-state fixture converges to the average quantities") {
    const LimitCheckReport report =
        limit_check(fixture_mdp(), Policy::uniform(2, 1), default_gamma_schedule());
    REQUIRE(report.rows.size() == 6);
    const auto& last = report.rows.back();
    CHECK(last.eta_gap <= 1e-4);
    CHECK(last.v_gap <= 1e-4);
    CHECK(last.q_gap <= 1e-4);
    CHECK(last.adv_gap <= 1e-4);
    for (size_t i = 0; i + 1 < report.rows.size(); ++i) {
        CHECK(report.rows[i + 1].eta_gap <= report.rows[i].eta_gap + 1e-9);
        CHECK(report.rows[i + 1].adv_gap <= report.rows[i].adv_gap + 1e-9);
    }
    CHECK(report.tail_monotone);
}

TEST_CASE("limit_check: advantage gaps vanish on random aperiodic instances") {
    DeterministicRng rng(24);
    int tested = 0;
    for (int trial = 0; tested < 8 && trial < 40; ++trial) {
        const Mdp mdp = garnet(5, 3, 3, 0.2, 7000 + trial);
        const Policy pi = oracles::random_policy(rng, 5, 3);
        const auto diag = validate_reachability(mdp, pi);
        if (!(diag.unichain && diag.aperiodic)) continue;
        ++tested;
        const LimitCheckReport report = limit_check(mdp, pi, default_gamma_schedule());
        CHECK(report.rows.back().adv_gap <= 1e-4);
        CHECK(report.rows.back().eta_gap <= 1e-4);
    }
    CHECK(tested == 8);
}

TEST_CASE("limit_check: schedule must increase") {
    CHECK_THROWS_AS(limit_check(fixture_mdp(), Policy::uniform(2, 1), {0.9, 0.5}),
                    std::invalid_argument);
}

#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "bayestab/events.hpp"
#include "bayestab/posterior.hpp"

using namespace bayestab;

namespace {

// Independent slow re-implementations straight from the formulas, used to
// cross-check the production predicates on random draws.
bool slow_simpson(std::span<const double> p) {
    const double t1 = std::log(p[0]) + std::log(p[3]) - std::log(p[1]) - std::log(p[2]);
    const double t2 = std::log(p[4]) + std::log(p[7]) - std::log(p[5]) - std::log(p[6]);
    const double m11 = p[0] + p[4], m12 = p[1] + p[5], m21 = p[2] + p[6], m22 = p[3] + p[7];
    const double tm = std::log(m11) + std::log(m22) - std::log(m12) - std::log(m21);
    return t1 < 0.0 && t2 < 0.0 && tm > 0.0;
}

bool slow_concordance(std::span<const double> p, int rows, int cols) {
    double pc = 0.0, pd = 0.0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            for (int h = i + 1; h < rows; ++h)
                for (int k = 0; k < cols; ++k) {
                    if (k > j) pc += p[i * cols + j] * p[h * cols + k];
                    if (k < j) pd += p[i * cols + j] * p[h * cols + k];
                }
    return pc >= pd;
}

bool slow_positive_dependence(std::span<const double> p, int rows, int cols) {
    std::vector<double> rowsum(rows, 0.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) rowsum[i] += p[i * cols + j];
    for (int i = 0; i + 1 < rows; ++i)
        for (int j = 0; j + 1 < cols; ++j) {
            double ci = 0.0, cn = 0.0;
            for (int k = 0; k <= j; ++k) {
                ci += p[i * cols + k] / rowsum[i];
                cn += p[(i + 1) * cols + k] / rowsum[i + 1];
            }
            if (ci < cn) return false;
        }
    return true;
}

ProbabilityVector make222(std::array<double, 8> v) {
    return ProbabilityVector(std::vector<double>(v.begin(), v.end()), {2, 2, 2});
}

}  // namespace

TEST_SUITE("simpson_event") {
    TEST_CASE("uniform is false: strict inequalities fail at independence") {
        CHECK_FALSE(simpson_event()(make222({.125, .125, .125, .125, .125, .125, .125, .125})));
    }

    TEST_CASE("agrees with the three inequalities computed by odds_ratios_222") {
        // counts [2,8,8,2 | 8,2,2,8] normalized: strata pull opposite ways
        std::vector<double> v{2, 8, 8, 2, 8, 2, 2, 8};
        for (double& x : v) x /= 40.0;
        const ProbabilityVector p(v, {2, 2, 2});
        const auto o = odds_ratios_222(p);
        const bool expect = o.theta_yz_given_x1 < 1.0 && o.theta_yz_given_x2 < 1.0 &&
                            o.theta_yz_marginal > 1.0;
        CHECK(simpson_event()(p) == expect);
    }

    TEST_CASE("no marginal reversal means false") {
        // theta1 = theta2 = 0.5 by construction, marginal below 1
        std::vector<double> v{0.1, 0.2, 0.1, 0.1, 0.5 / 11, 1.0 / 11, 2.0 / 11, 2.0 / 11};
        const ProbabilityVector p(v, {2, 2, 2});
        const auto o = odds_ratios_222(p);
        REQUIRE(o.theta_yz_given_x1 == doctest::Approx(0.5).epsilon(1e-12));
        REQUIRE(o.theta_yz_given_x2 == doctest::Approx(0.5).epsilon(1e-12));
        REQUIRE(o.theta_yz_marginal < 1.0);
        CHECK_FALSE(simpson_event()(p));
    }

    TEST_CASE("0/0 odds ratios make the event false, not an error") {
        CHECK_FALSE(simpson_event()(make222({0.0, 0.0, 0.3, 0.2, 0.1, 0.1, 0.1, 0.2})));
    }

    TEST_CASE("matches the slow reimplementation on random posterior draws") {
        DirichletParams params{{2, 2, 2}, {19.5, 132.5, 11.5, 52.5, 0.5, 9.5, 6.5, 97.5}};
        const EventPredicate e = simpson_event();
        for (int i = 0; i < 1000; ++i) {
            CounterRng rng(101, static_cast<uint64_t>(i));
            std::array<double, 8> buf;
            sample_dirichlet(params, rng, buf);
            CHECK(e(std::span<const double>(buf)) == slow_simpson(buf));
        }
    }
}

TEST_SUITE("epsilon_null_event") {
    TEST_CASE("uniform is inside any band") {
        CHECK(epsilon_null_event(0.1)(make222({.125, .125, .125, .125, .125, .125, .125, .125})));
    }

    TEST_CASE("log odds beyond epsilon is outside") {
        // theta1 = e^{0.2}: p111 = k e^{0.2}, p112 = p121 = p122 = k
        const double k = 1.0 / 64.0;
        const double t = k * std::exp(0.2);
        const double fill = (1.0 - t - 3.0 * k - 4.0 * k) / 1.0;
        std::array<double, 8> v{t, k, k, k, k, k, k, k};
        v[7] += fill;  // keep the sum at 1; stratum-2 ratio stays finite
        // stratum 2 ratio is now (k)(k+fill)/(k k) > 1; use a wide band for it
        CHECK_FALSE(epsilon_null_event(0.1)(v));
    }

    TEST_CASE("the boundary is inclusive") {
        // theta1 = exp(eps) exactly through the predicate's own arithmetic:
        // p111 = E/64 with E = exp(0.1), p112 = p121 = p122 = 1/64; both
        // products are exact power-of-two scalings, so num == den * E.
        const double E = std::exp(0.1);
        const double k = 1.0 / 64.0;
        std::array<double, 8> v{E * k, k, k, k, 0.0, 0.0, 0.0, 0.0};
        const double used = E * k + 3.0 * k;
        for (int i = 4; i < 8; ++i) v[i] = (1.0 - used) / 4.0;  // stratum 2 at independence
        CHECK(epsilon_null_event(0.1)(v));
        // nudging the cell one ulp up leaves the band
        std::array<double, 8> w = v;
        w[0] = std::nextafter(w[0], 1.0);
        CHECK_FALSE(epsilon_null_event(0.1)(w));
    }

    TEST_CASE("zero and 0/0 odds ratios are outside") {
        CHECK_FALSE(epsilon_null_event(0.1)(make222({0.0, 0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.2})));
        CHECK_FALSE(epsilon_null_event(0.1)(make222({0.0, 0.0, 0.3, 0.2, 0.1, 0.1, 0.1, 0.2})));
    }

    TEST_CASE("rejects nonpositive epsilon") {
        CHECK_THROWS_AS(epsilon_null_event(0.0), InputError);
    }
}

TEST_SUITE("concordance_event") {
    TEST_CASE("job satisfaction plug-in is concordant") {
        const std::vector<long long> js{1, 3, 10, 6, 2, 3, 10, 7, 1, 6, 14, 12, 0, 1, 9, 11};
        const auto t = validate_table(js, std::array<int, 2>{4, 4});
        CHECK(concordance_event(4, 4)(plugin_probs(t)));
    }

    TEST_CASE("uniform is concordant by the inclusive inequality") {
        const ProbabilityVector p(std::vector<double>(16, 1.0 / 16), {4, 4});
        CHECK(concordance_event(4, 4)(p));
    }

    TEST_CASE("anti-diagonal is discordant") {
        const ProbabilityVector p({0.0, 0.5, 0.5, 0.0}, {2, 2});
        CHECK_FALSE(concordance_event(2, 2)(p));
    }
}

TEST_SUITE("positive_dependence_event") {
    TEST_CASE("diagonal mass is positively dependent") {
        std::vector<double> v(16, 0.0);
        for (int i = 0; i < 4; ++i) v[i * 4 + i] = 0.25;
        CHECK(positive_dependence_event(4, 4)(ProbabilityVector(v, {4, 4})));
    }

    TEST_CASE("uniform holds with equality") {
        const ProbabilityVector p(std::vector<double>(16, 1.0 / 16), {4, 4});
        CHECK(positive_dependence_event(4, 4)(p));
    }

    TEST_CASE("stochastically smaller second row fails") {
        const ProbabilityVector p({0.1, 0.4, 0.4, 0.1}, {2, 2});
        // CDF comparison at the single cutpoint: 0.2 vs 0.8
        CHECK_FALSE(positive_dependence_event(2, 2)(p));
    }

    TEST_CASE("zero row mass raises") {
        const ProbabilityVector p({0.5, 0.5, 0.0, 0.0}, {2, 2});
        CHECK_THROWS_AS(positive_dependence_event(2, 2)(p), ZeroRowMassError);
    }

    TEST_CASE("implies concordance on random Dirichlet draws") {
        DirichletParams params{{4, 4}, std::vector<double>(16, 0.7)};
        const EventPredicate pos = positive_dependence_event(4, 4);
        const EventPredicate conc = concordance_event(4, 4);
        int pos_count = 0;
        for (int i = 0; i < 10000; ++i) {
            CounterRng rng(271828, static_cast<uint64_t>(i));
            std::array<double, 16> buf;
            sample_dirichlet(params, rng, buf);
            if (pos(std::span<const double>(buf))) {
                ++pos_count;
                CHECK(conc(std::span<const double>(buf)));
            }
        }
        CHECK(pos_count > 0);  // the implication was actually exercised
    }
}

TEST_SUITE("cross-checks") {
    TEST_CASE("all predicates match slow reimplementations on random tables") {
        CounterRng gen(31337);
        const EventPredicate conc = concordance_event(4, 4);
        const EventPredicate pos = positive_dependence_event(4, 4);
        for (int rep = 0; rep < 1000; ++rep) {
            // random integer table, then plug-in probabilities
            std::vector<long long> cells(16);
            long long total = 0;
            for (auto& c : cells) {
                c = static_cast<long long>(gen.next_u64() % 7);
                total += c;
            }
            if (total == 0) continue;
            const auto t = validate_table(cells, std::array<int, 2>{4, 4});
            const auto p = plugin_probs(t);
            CHECK(conc(p) == slow_concordance(p.span(), 4, 4));
            bool rows_ok = true;
            for (int i = 0; i < 4 && rows_ok; ++i) {
                long long rs = 0;
                for (int j = 0; j < 4; ++j) rs += cells[i * 4 + j];
                rows_ok = rs > 0;
            }
            if (rows_ok)
                CHECK(pos(p) == slow_positive_dependence(p.span(), 4, 4));
        }
    }

    TEST_CASE("simpson and epsilon-null are consistent with direct odds ratios") {
        DirichletParams params{{2, 2, 2}, {19.5, 132.5, 11.5, 52.5, 0.5, 9.5, 6.5, 97.5}};
        const EventPredicate p1 = simpson_event();
        const EventPredicate p0 = epsilon_null_event(0.1);
        for (int i = 0; i < 2000; ++i) {
            CounterRng rng(424242, static_cast<uint64_t>(i));
            std::array<double, 8> buf;
            sample_dirichlet(params, rng, buf);
            const ProbabilityVector p(std::vector<double>(buf.begin(), buf.end()), {2, 2, 2});
            const auto o = odds_ratios_222(p);
            CHECK(p1(p) == (o.theta_yz_given_x1 < 1.0 && o.theta_yz_given_x2 < 1.0 &&
                            o.theta_yz_marginal > 1.0));
            CHECK(p0(p) == (std::fabs(std::log(o.theta_yz_given_x1)) <= 0.1 &&
                            std::fabs(std::log(o.theta_yz_given_x2)) <= 0.1));
        }
    }
}

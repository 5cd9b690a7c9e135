#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bayestab/null_dist.hpp"
#include "bayestab/posterior.hpp"

namespace bayestab {

// log multinomial pmf with its coefficient, log-space throughout; -inf when a
// cell with zero probability has positive count.
double log_multinomial_pmf(std::span<const long long> cells, std::span<const double> probs);

// Importance weight of a fixed-margins proposal against the multinomial
// alternative: exp(log multinomial - log multivariate hypergeometric).
double importance_log_weight(std::span<const long long> cells, std::span<const double> alternative,
                             const RxCMargins& margins);
double importance_weight(const ContingencyTable& proposal, const ProbabilityVector& alternative);

// m with-replacement draws proportional to weights, via a Vose alias table
// built and consumed sequentially. Throws AllZeroWeightsError.
std::vector<size_t> weighted_resample_indices(std::span<const double> weights, long long m,
                                              CounterRng& rng);

struct PowerStudyConfig {
    RxCMargins margins;
    std::vector<double> alternative;  // multinomial cell probabilities, row-major
    long long n_proposals = 100000;
    long long n_resample = 10000;
    long long n_null_reference = 10000;
    long long n_posterior = 1000;  // draws per posterior-concordance evaluation
    double prior_concentration = 0.5;
    uint64_t seed = 0;
    Exec mode = Exec::parallel;
};

struct ArmSummary {
    double mean_p, mean_p_se;
    double median_p, median_p_se;
    double frac_below_10, frac_below_10_se;
    double frac_below_05, frac_below_05_se;
};

struct PowerSummary {
    ArmSummary gamma_arm;      // deterministic gamma-hat statistic
    ArmSummary posterior_arm;  // posterior concordance probability statistic
    long long n_realizations;
    uint64_t seed;
};

// Section-3.1 pipeline: importance-sample realizations from the truncated
// multinomial alternative, evaluate both statistics per realization and for a
// fresh null reference sample, assign p-values by the inclusive reference
// comparison, and summarize both arms from the same paired draws.
PowerSummary power_study(const PowerStudyConfig& config);

struct GaussianDemoResult {
    double lrt_power, lrt_power_se;
    double bayes_power, bayes_power_se;
    double chi2_critical;   // (1-alpha) quantile of chi^2_K
    double z_critical;      // (1-alpha) normal quantile
    double bayes_power_closed_form;  // Phi(mu1 - z)
};

// K unit-variance coordinates with mean (mu1, 0, ..., 0): Monte Carlo power
// of the ||y||^2 likelihood-ratio region versus the first-coordinate region.
GaussianDemoResult gaussian_demo(int k, double mu1, double alpha, long long n_mc, uint64_t seed,
                                 Exec mode = Exec::parallel);

}  // namespace bayestab

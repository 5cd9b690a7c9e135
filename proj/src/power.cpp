#include "bayestab/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bayestab/log_factorial.hpp"
#include "bayestab/special_functions.hpp"
#include "bayestab/sums.hpp"
#include "bayestab/table.hpp"

namespace bayestab {

double log_multinomial_pmf(std::span<const long long> cells, std::span<const double> probs) {
    if (cells.size() != probs.size()) throw InputError("cell/probability length mismatch");
    long long n = 0;
    for (long long c : cells) n += c;
    double lp = log_factorial(n);
    for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == 0) continue;
        if (probs[i] <= 0.0) return -std::numeric_limits<double>::infinity();
        lp += static_cast<double>(cells[i]) * std::log(probs[i]) - log_factorial(cells[i]);
    }
    return lp;
}

double importance_log_weight(std::span<const long long> cells, std::span<const double> alternative,
                             const RxCMargins& margins) {
    return log_multinomial_pmf(cells, alternative) - rxc_log_pmf(cells, margins);
}

double importance_weight(const ContingencyTable& proposal, const ProbabilityVector& alternative) {
    const RxCMargins m = RxCMargins::from_table(proposal);
    return std::exp(importance_log_weight(proposal.counts(), alternative.span(), m));
}

std::vector<size_t> weighted_resample_indices(std::span<const double> weights, long long m,
                                              CounterRng& rng) {
    if (m < 1) throw InputError("resample size must be >= 1");
    const size_t k = weights.size();
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || std::isnan(w)) throw InputError("negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw AllZeroWeightsError("all resampling weights are zero");

    // Vose alias table
    std::vector<double> prob(k);
    std::vector<size_t> alias(k, 0);
    std::vector<double> scaled(k);
    for (size_t i = 0; i < k; ++i) scaled[i] = weights[i] * static_cast<double>(k) / total;
    std::vector<size_t> small, large;
    small.reserve(k);
    large.reserve(k);
    for (size_t i = 0; i < k; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
        const size_t s = small.back();
        small.pop_back();
        const size_t l = large.back();
        large.pop_back();
        prob[s] = scaled[s];
        alias[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (size_t s : small) prob[s] = 1.0;
    for (size_t l : large) prob[l] = 1.0;

    std::vector<size_t> out(m);
    for (long long i = 0; i < m; ++i) {
        const size_t cell = static_cast<size_t>(rng.next_double() * static_cast<double>(k));
        const size_t c = std::min(cell, k - 1);
        out[i] = (rng.next_double() < prob[c]) ? c : alias[c];
    }
    return out;
}

namespace {

// count of reference values >= x, from an ascending-sorted array
long long count_geq(const std::vector<double>& sorted_ref, double x) {
    return static_cast<long long>(sorted_ref.end() -
                                  std::lower_bound(sorted_ref.begin(), sorted_ref.end(), x));
}

ArmSummary summarize(std::vector<double> pvals) {
    const size_t m = pvals.size();
    ArmSummary s{};
    NeumaierSum mean_acc;
    for (double p : pvals) mean_acc.add(p);
    s.mean_p = mean_acc.value() / static_cast<double>(m);
    NeumaierSum var_acc;
    for (double p : pvals) var_acc.add((p - s.mean_p) * (p - s.mean_p));
    s.mean_p_se = std::sqrt(var_acc.value() / static_cast<double>(m - 1)) /
                  std::sqrt(static_cast<double>(m));

    std::sort(pvals.begin(), pvals.end());
    s.median_p = (m % 2 == 1) ? pvals[m / 2] : 0.5 * (pvals[m / 2 - 1] + pvals[m / 2]);
    // order-statistic band: half-width of the ~68% central band of the median
    const double half = 0.5 * std::sqrt(static_cast<double>(m));
    const size_t lo = static_cast<size_t>(std::max(0.0, std::floor(m / 2.0 - half)));
    const size_t hi = static_cast<size_t>(std::min(static_cast<double>(m - 1), std::ceil(m / 2.0 + half)));
    s.median_p_se = 0.5 * (pvals[hi] - pvals[lo]);

    const auto frac_below = [&](double t) {
        return static_cast<double>(std::lower_bound(pvals.begin(), pvals.end(), t) -
                                   pvals.begin()) /
               static_cast<double>(m);
    };
    s.frac_below_10 = frac_below(0.10);
    s.frac_below_05 = frac_below(0.05);
    s.frac_below_10_se = std::sqrt(s.frac_below_10 * (1.0 - s.frac_below_10) / static_cast<double>(m));
    s.frac_below_05_se = std::sqrt(s.frac_below_05 * (1.0 - s.frac_below_05) / static_cast<double>(m));
    return s;
}

}  // namespace

PowerSummary power_study(const PowerStudyConfig& config) {
    config.margins.validate();
    if (config.n_proposals < 1 || config.n_resample < 1 || config.n_null_reference < 1 ||
        config.n_posterior < 1)
        throw InputError("power study sizes must be >= 1");
    const int R = config.margins.R(), C = config.margins.C();
    const size_t ncells = static_cast<size_t>(R) * C;
    if (config.alternative.size() != ncells) throw InputError("alternative length mismatch");
    const bool par = (config.mode == Exec::parallel);
    const EventPredicate conc = concordance_event(R, C);

    // 1-2) proposals from the null, with importance weights
    std::vector<int32_t> proposals(static_cast<size_t>(config.n_proposals) * ncells);
    std::vector<double> weights(config.n_proposals);
#pragma omp parallel for schedule(static) if (par)
    for (long long t = 0; t < config.n_proposals; ++t) {
        CounterRng rng(config.seed, 1, static_cast<uint64_t>(t));
        const std::vector<long long> cells = rxc_sample_cells(config.margins, rng);
        for (size_t i = 0; i < ncells; ++i)
            proposals[static_cast<size_t>(t) * ncells + i] = static_cast<int32_t>(cells[i]);
        const double lw = importance_log_weight(cells, config.alternative, config.margins);
        weights[t] = std::exp(lw);
    }

    // 3) weighted with-replacement resample of realizations
    CounterRng resample_rng(config.seed, 2);
    const std::vector<size_t> picked =
        weighted_resample_indices(weights, config.n_resample, resample_rng);

    const auto gamma_of = [&](std::span<const long long> cells) {
        const ConcordanceCounts cc = concordance_counts(cells, R, C);
        const long long denom = cc.concordant + cc.discordant;
        if (denom == 0) return -2.0;  // undefined ranks below every defined value
        return static_cast<double>(cc.concordant - cc.discordant) / static_cast<double>(denom);
    };
    const auto posterior_of = [&](std::span<const long long> cells, uint64_t stat_seed) {
        DirichletParams params;
        params.shape = {R, C};
        params.concentration.resize(ncells);
        for (size_t i = 0; i < ncells; ++i)
            params.concentration[i] =
                static_cast<double>(cells[i]) + config.prior_concentration;
        const long long hits =
            count_event_hits(params, conc, config.n_posterior, stat_seed, Exec::serial);
        return static_cast<double>(hits) / static_cast<double>(config.n_posterior);
    };

    // 4) both statistics per realization
    std::vector<double> alt_gamma(config.n_resample), alt_post(config.n_resample);
#pragma omp parallel for schedule(dynamic) if (par)
    for (long long r = 0; r < config.n_resample; ++r) {
        std::vector<long long> cells(ncells);
        const int32_t* src = proposals.data() + picked[r] * ncells;
        for (size_t i = 0; i < ncells; ++i) cells[i] = src[i];
        alt_gamma[r] = gamma_of(cells);
        alt_post[r] = posterior_of(cells, substream_seed(config.seed, 3, static_cast<uint64_t>(r)));
    }

    // 5) fresh null reference sample, both statistics
    std::vector<double> ref_gamma(config.n_null_reference), ref_post(config.n_null_reference);
#pragma omp parallel for schedule(dynamic) if (par)
    for (long long t = 0; t < config.n_null_reference; ++t) {
        CounterRng rng(config.seed, 4, static_cast<uint64_t>(t));
        const std::vector<long long> cells = rxc_sample_cells(config.margins, rng);
        ref_gamma[t] = gamma_of(cells);
        ref_post[t] = posterior_of(cells, substream_seed(config.seed, 5, static_cast<uint64_t>(t)));
    }

    // 6) p-values: proportion of reference statistics >= realization's
    std::sort(ref_gamma.begin(), ref_gamma.end());
    std::sort(ref_post.begin(), ref_post.end());
    std::vector<double> p_gamma(config.n_resample), p_post(config.n_resample);
    const double nref = static_cast<double>(config.n_null_reference);
    for (long long r = 0; r < config.n_resample; ++r) {
        p_gamma[r] = static_cast<double>(count_geq(ref_gamma, alt_gamma[r])) / nref;
        p_post[r] = static_cast<double>(count_geq(ref_post, alt_post[r])) / nref;
    }

    PowerSummary out;
    out.gamma_arm = summarize(std::move(p_gamma));
    out.posterior_arm = summarize(std::move(p_post));
    out.n_realizations = config.n_resample;
    out.seed = config.seed;
    return out;
}

GaussianDemoResult gaussian_demo(int k, double mu1, double alpha, long long n_mc, uint64_t seed,
                                 Exec mode) {
    if (k < 1 || n_mc < 1) throw InputError("gaussian_demo requires k >= 1 and n_mc >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha outside (0,1)");
    GaussianDemoResult r;
    r.chi2_critical = chi_squared_quantile(1.0 - alpha, static_cast<double>(k));
    r.z_critical = normal_quantile(1.0 - alpha);
    r.bayes_power_closed_form = normal_cdf(mu1 - r.z_critical);

    long long lrt_hits = 0, bayes_hits = 0;
    const bool par = (mode == Exec::parallel);
#pragma omp parallel for schedule(static) reduction(+ : lrt_hits, bayes_hits) if (par)
    for (long long i = 0; i < n_mc; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i));
        const double y1 = mu1 + rng.next_normal();
        double ss = y1 * y1;
        for (int j = 1; j < k; ++j) {
            const double y = rng.next_normal();
            ss += y * y;
        }
        if (ss >= r.chi2_critical) ++lrt_hits;
        if (y1 >= r.z_critical) ++bayes_hits;
    }
    const double n = static_cast<double>(n_mc);
    r.lrt_power = static_cast<double>(lrt_hits) / n;
    r.bayes_power = static_cast<double>(bayes_hits) / n;
    r.lrt_power_se = std::sqrt(r.lrt_power * (1.0 - r.lrt_power) / n);
    r.bayes_power_se = std::sqrt(r.bayes_power * (1.0 - r.bayes_power) / n);
    return r;
}

}  // namespace bayestab

#include "bayestab/test_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "bayestab/log_factorial.hpp"

namespace bayestab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double ratio_value(double num, double den) {
    if (den > 0.0) return num / den;
    if (num > 0.0) return std::numeric_limits<double>::infinity();
    return 0.0;  // no evidence either way; ranks lowest
}

}  // namespace

TestReport exact_p_value(const std::vector<double>& null_pmf, const std::vector<double>& statistics,
                         size_t observed_index) {
    if (null_pmf.size() != statistics.size())
        throw InputError("pmf and statistic vectors differ in length");
    if (observed_index >= statistics.size())
        throw ObservedNotInSpaceError("observed point outside the sample space");
    const double t_obs = statistics[observed_index];
    NeumaierSum p;
    uint64_t qual = 0;
    for (size_t i = 0; i < statistics.size(); ++i) {
        if (statistics[i] >= t_obs) {
            p.add(null_pmf[i]);
            ++qual;
        }
    }
    TestReport r;
    r.method = "exact";
    r.statistic = t_obs;
    r.p_value = p.value();
    r.qualifying_count = qual;
    r.table_count = statistics.size();
    return r;
}

StratifiedExactResult stratified_exact_test(const ContingencyTable& observed,
                                            const StratifiedExactConfig& config) {
    const auto t0 = Clock::now();
    const StratifiedMargins margins = StratifiedMargins::from_table(observed);
    StratifiedExactResult res;
    res.space = enumerate_stratified_space(margins);

    const auto& c = observed.counts();
    const StratifiedPoint obs_pt{c[0], c[4]};
    const auto it = std::find(res.space.begin(), res.space.end(), obs_pt);
    if (it == res.space.end())
        throw ObservedNotInSpaceError("observed table not in its own conditional space");
    res.observed_index = static_cast<size_t>(it - res.space.begin());

    const size_t n_pts = res.space.size();
    res.null_pmf.resize(n_pts);
    for (size_t i = 0; i < n_pts; ++i) res.null_pmf[i] = stratified_null_pmf(res.space[i], margins);

    res.p1_estimates.assign(n_pts, 0.0);
    res.p0_estimates.assign(n_pts, 0.0);

    const EventPredicate p1 = simpson_event();
    const EventPredicate p0 = epsilon_null_event(config.epsilon);
    const bool par = (config.mode == Exec::parallel);

#pragma omp parallel for schedule(dynamic) if (par)
    for (size_t i = 0; i < n_pts; ++i) {
        const ContingencyTable table = stratified_point_table(res.space[i], margins);
        const DirichletParams params = posterior_params(table, config.prior_concentration);
        const uint64_t point_seed = substream_seed(config.seed, static_cast<uint64_t>(i));
        if (config.ratio_statistic) {
            const PairCounts pc = count_event_pair_hits(params, p1, config.n_alt_draws, p0,
                                                        config.n_null_draws, point_seed,
                                                        Exec::serial);
            res.p1_estimates[i] =
                static_cast<double>(pc.hits_a) / static_cast<double>(config.n_alt_draws);
            res.p0_estimates[i] =
                static_cast<double>(pc.hits_b) / static_cast<double>(config.n_null_draws);
        } else {
            const long long hits =
                count_event_hits(params, p1, config.n_alt_draws, point_seed, Exec::serial);
            res.p1_estimates[i] =
                static_cast<double>(hits) / static_cast<double>(config.n_alt_draws);
        }
    }

    res.statistics.resize(n_pts);
    for (size_t i = 0; i < n_pts; ++i)
        res.statistics[i] = config.ratio_statistic
                                ? ratio_value(res.p1_estimates[i], res.p0_estimates[i])
                                : res.p1_estimates[i];

    res.report = exact_p_value(res.null_pmf, res.statistics, res.observed_index);
    res.report.method = "exact-stratified";
    res.report.seed = config.seed;
    res.report.n_samples = config.n_alt_draws;

    const double p1o = res.p1_estimates[res.observed_index];
    const double se1 = std::sqrt(p1o * (1.0 - p1o) / static_cast<double>(config.n_alt_draws));
    if (config.ratio_statistic) {
        const double p0o = res.p0_estimates[res.observed_index];
        const double se0 = std::sqrt(p0o * (1.0 - p0o) / static_cast<double>(config.n_null_draws));
        const double r = res.statistics[res.observed_index];
        // delta method; infinite/zero denominators leave the s.e. undefined -> 0
        res.report.statistic_se =
            (p1o > 0.0 && p0o > 0.0)
                ? r * std::sqrt(se1 * se1 / (p1o * p1o) + se0 * se0 / (p0o * p0o))
                : 0.0;
    } else {
        res.report.statistic_se = se1;
    }
    res.report.wall_clock_seconds = seconds_since(t0);
    return res;
}

EnumStatistic EnumStatistic::from_value(std::string name,
                                        std::function<double(std::span<const long long>)> value) {
    EnumStatistic s;
    s.name = std::move(name);
    s.value = value;
    s.make_qualifier = [value](std::span<const long long> observed) {
        const double t_obs = value(observed);
        return [value, t_obs](std::span<const long long> cells) {
            return value(cells) >= t_obs;
        };
    };
    return s;
}

EnumStatistic gamma_statistic(int rows, int cols) {
    EnumStatistic s;
    s.name = "gamma";
    s.value = [rows, cols](std::span<const long long> cells) {
        const ConcordanceCounts cc = concordance_counts(cells, rows, cols);
        const long long denom = cc.concordant + cc.discordant;
        if (denom == 0) return -2.0;  // below every defined gamma in [-1,1]
        return static_cast<double>(cc.concordant - cc.discordant) / static_cast<double>(denom);
    };
    s.make_qualifier = [rows, cols](std::span<const long long> observed) {
        const ConcordanceCounts obs = concordance_counts(observed, rows, cols);
        return [rows, cols, obs](std::span<const long long> cells) {
            return gamma_geq(concordance_counts(cells, rows, cols), obs);
        };
    };
    return s;
}

TestReport exact_p_value_enumerated(const RxCMargins& margins, const EnumStatistic& statistic,
                                    const ContingencyTable& observed, Exec mode) {
    const auto t0 = Clock::now();
    margins.validate();
    if (observed.rank() != 2 || observed.row_sums() != margins.rows ||
        observed.col_sums() != margins.cols)
        throw ObservedNotInSpaceError("observed table does not match the margins");

    const auto qualifies = statistic.make_qualifier(observed.counts());
    const double margin_term = rxc_log_pmf_margin_term(margins);
    const auto comps = first_row_compositions(margins);

    struct Accum {
        uint64_t count = 0, qual = 0;
        NeumaierSum p_qual, p_all;
    };
    std::vector<Accum> accs(comps.size());
    const bool par = (mode == Exec::parallel);

#pragma omp parallel for schedule(dynamic) if (par)
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        Accum a;
        rxc_enumerate_under_first_row(margins, comps[ci], [&](std::span<const long long> cells) {
            double lp = margin_term;
            for (long long v : cells) lp -= log_factorial(v);
            const double pm = std::exp(lp);
            ++a.count;
            a.p_all.add(pm);
            if (qualifies(cells)) {
                ++a.qual;
                a.p_qual.add(pm);
            }
        });
        accs[ci] = a;
    }

    TestReport r;
    NeumaierSum p_qual, p_all;
    for (const Accum& a : accs) {
        r.table_count += a.count;
        r.qualifying_count += a.qual;
        p_qual.add(a.p_qual);
        p_all.add(a.p_all);
    }
    r.method = "exact-enumeration";
    r.statistic = statistic.value(observed.counts());
    r.p_value = p_qual.value();
    r.total_probability = p_all.value();
    r.wall_clock_seconds = seconds_since(t0);
    return r;
}

TableStatistic posterior_event_statistic(const EventPredicate& predicate, int rows, int cols,
                                         double prior_concentration, long long n_samples) {
    TableStatistic s;
    s.name = "posterior[" + predicate.name + "]";
    s.n_samples = n_samples;
    s.eval = [predicate, rows, cols, prior_concentration, n_samples](
                 std::span<const long long> cells, uint64_t stat_seed) {
        DirichletParams params;
        params.shape = {rows, cols};
        params.concentration.resize(cells.size());
        for (size_t i = 0; i < cells.size(); ++i)
            params.concentration[i] = static_cast<double>(cells[i]) + prior_concentration;
        const long long hits =
            count_event_hits(params, predicate, n_samples, stat_seed, Exec::serial);
        return static_cast<double>(hits) / static_cast<double>(n_samples);
    };
    return s;
}

TestReport mc_significance(const RxCMargins& margins, const TableStatistic& statistic,
                           double observed_stat, long long n_null, uint64_t seed, Exec mode) {
    const auto t0 = Clock::now();
    margins.validate();
    if (n_null < 1) throw InputError("n_null must be >= 1");
    long long hits = 0;
    const bool par = (mode == Exec::parallel);

#pragma omp parallel for schedule(dynamic) reduction(+ : hits) if (par)
    for (long long t = 0; t < n_null; ++t) {
        CounterRng rng(seed, static_cast<uint64_t>(t), 0);
        const std::vector<long long> cells = rxc_sample_cells(margins, rng);
        const double s =
            statistic.eval(cells, substream_seed(seed, static_cast<uint64_t>(t), 1));
        if (s >= observed_stat) ++hits;
    }

    TestReport r;
    r.method = "mc-significance";
    r.statistic = observed_stat;
    r.p_value = static_cast<double>(hits) / static_cast<double>(n_null);
    r.p_value_se = std::sqrt(r.p_value * (1.0 - r.p_value) / static_cast<double>(n_null));
    r.seed = seed;
    r.n_samples = statistic.n_samples;
    r.n_null = n_null;
    r.wall_clock_seconds = seconds_since(t0);
    return r;
}

std::vector<size_t> bayes_region(const std::vector<double>& ratios, double delta) {
    std::vector<size_t> region;
    for (size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] >= delta) region.push_back(i);
    return region;
}

AlphaRegion bayes_region_alpha(const std::vector<double>& ratios,
                               const std::vector<double>& null_pmf, double alpha) {
    if (ratios.size() != null_pmf.size()) throw InputError("ratio/pmf length mismatch");
    if (alpha < 0.0 || alpha > 1.0) throw InputError("alpha outside [0,1]");
    std::vector<size_t> order(ratios.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return ratios[a] > ratios[b]; });

    AlphaRegion out;
    out.delta_alpha = std::numeric_limits<double>::infinity();
    out.null_mass = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        // whole tie group in or out
        size_t j = i;
        double group_mass = 0.0;
        while (j < order.size() && ratios[order[j]] == ratios[order[i]]) {
            group_mass += null_pmf[order[j]];
            ++j;
        }
        if (out.null_mass + group_mass > alpha) break;
        for (size_t k = i; k < j; ++k) out.region.push_back(order[k]);
        out.null_mass += group_mass;
        out.delta_alpha = ratios[order[i]];
        i = j;
    }
    std::sort(out.region.begin(), out.region.end());
    return out;
}

std::vector<AlphaRegion> conditional_bayes_region(const std::vector<PartitionData>& partitions,
                                                  double alpha) {
    std::vector<AlphaRegion> out;
    out.reserve(partitions.size());
    for (const PartitionData& p : partitions)
        out.push_back(bayes_region_alpha(p.ratios, p.null_pmf, alpha));
    return out;
}

void FiniteModel::validate() const {
    const int m = n_params();
    if (m == 0 || static_cast<int>(likelihood.size()) != m ||
        static_cast<int>(labels.size()) != m)
        throw InputError("finite model fields disagree in length");
    double ps = 0.0;
    for (double w : prior) {
        if (w < 0.0) throw InputError("negative prior weight");
        ps += w;
    }
    if (std::fabs(ps - 1.0) > 1e-9) throw InputError("prior weights must sum to 1");
    const int s = n_points();
    for (const auto& row : likelihood) {
        if (static_cast<int>(row.size()) != s) throw InputError("ragged likelihood matrix");
        double rs = 0.0;
        for (double v : row) {
            if (v < 0.0) throw InputError("negative likelihood");
            rs += v;
        }
        if (std::fabs(rs - 1.0) > 1e-9) throw InputError("likelihood rows must sum to 1");
    }
}

std::vector<double> FiniteModel::marginal() const {
    std::vector<double> out(n_points(), 0.0);
    for (int p = 0; p < n_params(); ++p)
        for (int n = 0; n < n_points(); ++n) out[n] += prior[p] * likelihood[p][n];
    return out;
}

std::vector<double> FiniteModel::null_joint() const {
    std::vector<double> out(n_points(), 0.0);
    for (int p = 0; p < n_params(); ++p)
        if (labels[p] == Label::null_event)
            for (int n = 0; n < n_points(); ++n) out[n] += prior[p] * likelihood[p][n];
    return out;
}

std::vector<double> FiniteModel::alt_joint() const {
    std::vector<double> out(n_points(), 0.0);
    for (int p = 0; p < n_params(); ++p)
        if (labels[p] == Label::alt_event)
            for (int n = 0; n < n_points(); ++n) out[n] += prior[p] * likelihood[p][n];
    return out;
}

std::vector<double> FiniteModel::ratio_statistic() const {
    const std::vector<double> a = null_joint();
    const std::vector<double> b = alt_joint();
    std::vector<double> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = ratio_value(b[i], a[i]);
    return out;
}

namespace {

double mean_event_probability(const FiniteModel& model, std::span<const size_t> region,
                              FiniteModel::Label which) {
    model.validate();
    double prior_mass = 0.0;
    for (int p = 0; p < model.n_params(); ++p)
        if (model.labels[p] == which) prior_mass += model.prior[p];
    if (prior_mass <= 0.0) throw EmptyNullEventError("event has zero prior mass");
    const std::vector<double> joint = (which == FiniteModel::Label::null_event)
                                          ? model.null_joint()
                                          : model.alt_joint();
    double s = 0.0;
    for (size_t n : region) {
        if (n >= joint.size()) throw InputError("region index outside the sample space");
        s += joint[n];
    }
    return s / prior_mass;
}

}  // namespace

double mean_significance(const FiniteModel& model, std::span<const size_t> region) {
    return mean_event_probability(model, region, FiniteModel::Label::null_event);
}

double mean_power(const FiniteModel& model, std::span<const size_t> region) {
    return mean_event_probability(model, region, FiniteModel::Label::alt_event);
}

double average_risk(const FiniteModel& model, std::span<const size_t> region, double lambda1,
                    double lambda2) {
    model.validate();
    if (lambda1 < 0.0 || lambda2 < 0.0) throw InputError("loss weights must be nonnegative");
    const std::vector<double> marg = model.marginal();
    const std::vector<double> a = model.null_joint();
    const std::vector<double> b = model.alt_joint();
    std::vector<char> in(model.n_points(), 0);
    for (size_t n : region) {
        if (n >= in.size()) throw InputError("region index outside the sample space");
        in[n] = 1;
    }
    double risk = 0.0;
    for (int n = 0; n < model.n_points(); ++n) {
        if (marg[n] <= 0.0) continue;
        // Pr(n) * lambda * Pr(event | n), with Pr(event|n) = joint/marginal
        if (in[n])
            risk += marg[n] * lambda1 * (a[n] / marg[n]);
        else
            risk += marg[n] * lambda2 * (b[n] / marg[n]);
    }
    return risk;
}

}  // namespace bayestab

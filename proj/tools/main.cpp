#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "bayestab/log_factorial.hpp"
#include "bayestab/report.hpp"
#include "bayestab/table_io.hpp"

namespace {

using namespace bayestab;
using Clock = std::chrono::steady_clock;

struct CommonOpts {
    std::string table_path;
    std::string out_path;
    uint64_t seed = 0;
    int threads = 0;
};

void apply_threads(int flag_threads) {
    if (const char* env = std::getenv("BAYESTAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            omp_set_num_threads(n);
            return;
        }
    }
    if (flag_threads > 0) omp_set_num_threads(flag_threads);
}

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw InputError("cannot open output file: " + out_path);
        f << report.dump(2) << "\n";
    }
}

Json config_echo(const CommonOpts& c) {
    Json j;
    j["table"] = c.table_path;
    j["seed"] = c.seed;
    return j;
}

uint64_t cells_seed(std::span<const long long> cells) {
    uint64_t h = 0x2545f4914f6cdd1dULL;
    for (long long v : cells) h = mix64(h ^ static_cast<uint64_t>(v));
    return h;
}

int run_test(const CommonOpts& common, const std::string& test_name, const std::string& mode_in,
             double prior, double epsilon, long long n_posterior, long long n_null,
             bool paper_scale, bool allow_long) {
    const auto t0 = Clock::now();
    const ContingencyTable table = parse_table_file(common.table_path);

    std::string mode = mode_in;
    if (mode == "auto")
        mode = (test_name == "concordance" || test_name == "positive-dependence") ? "mc" : "exact";

    Json out;
    Json cfg = config_echo(common);
    cfg["command"] = "test";
    cfg["test"] = test_name;
    cfg["mode"] = mode;
    cfg["prior"] = prior;
    cfg["epsilon"] = epsilon;
    cfg["paper_scale"] = paper_scale;

    if (test_name == "simpson" || test_name == "simpson-ratio") {
        if (mode != "exact")
            throw UnsupportedCombinationError("test " + test_name + " supports mode=exact only");
        StratifiedExactConfig sc;
        sc.prior_concentration = prior;
        sc.epsilon = epsilon;
        sc.ratio_statistic = (test_name == "simpson-ratio");
        sc.seed = common.seed;
        sc.n_alt_draws = paper_scale ? 2000000 : n_posterior;
        sc.n_null_draws = paper_scale ? 1000000 : n_posterior;
        cfg["n_posterior"] = sc.n_alt_draws;
        if (sc.ratio_statistic) cfg["n_posterior_denominator"] = sc.n_null_draws;
        const StratifiedExactResult res = stratified_exact_test(table, sc);
        out["config"] = cfg;
        out["report"] = to_json(res.report);
        out["observed_p1"] = res.p1_estimates[res.observed_index];
        if (sc.ratio_statistic) out["observed_p0"] = res.p0_estimates[res.observed_index];
        out["space_points"] = res.space.size();
    } else if (test_name == "gamma-exact") {
        if (table.rank() != 2) throw UnsupportedCombinationError("gamma-exact requires an RxC table");
        const RxCMargins margins = RxCMargins::from_table(table);
        const int R = margins.R(), C = margins.C();
        if (mode == "exact") {
            cfg["n_posterior"] = 0;
            TestReport rep = exact_p_value_enumerated(margins, gamma_statistic(R, C), table);
            out["config"] = cfg;
            out["report"] = to_json(rep);
            out["table_count_dp"] = rxc_count(margins);
        } else if (mode == "mc") {
            cfg["n_null"] = n_null;
            TableStatistic stat;
            stat.name = "gamma";
            stat.n_samples = 0;
            const EnumStatistic g = gamma_statistic(R, C);
            stat.eval = [g](std::span<const long long> cells, uint64_t) { return g.value(cells); };
            const double observed = g.value(table.counts());
            TestReport rep = mc_significance(margins, stat, observed, n_null, common.seed);
            out["config"] = cfg;
            out["report"] = to_json(rep);
        } else {
            throw UnsupportedCombinationError("gamma-exact supports mode=exact or mode=mc");
        }
    } else if (test_name == "concordance" || test_name == "positive-dependence") {
        if (table.rank() != 2)
            throw UnsupportedCombinationError(test_name + " requires an RxC table");
        const RxCMargins margins = RxCMargins::from_table(table);
        const int R = margins.R(), C = margins.C();
        const EventPredicate pred = (test_name == "concordance")
                                        ? concordance_event(R, C)
                                        : positive_dependence_event(R, C);
        const long long n_obs_draws = paper_scale ? 10000000 : n_posterior;
        const long long n_tab_draws = paper_scale ? 10000 : n_posterior;
        const long long n_tables = paper_scale ? 50000 : n_null;
        cfg["n_posterior"] = n_tab_draws;
        cfg["n_posterior_observed"] = n_obs_draws;
        cfg["n_null"] = n_tables;
        const EventEstimate obs = event_probability(table, pred, prior, n_obs_draws,
                                                    substream_seed(common.seed, 0));
        if (mode == "mc") {
            const TableStatistic stat = posterior_event_statistic(pred, R, C, prior, n_tab_draws);
            TestReport rep = mc_significance(margins, stat, obs.estimate, n_tables,
                                             substream_seed(common.seed, 1));
            rep.statistic = obs.estimate;
            rep.statistic_se = obs.std_error;
            rep.seed = common.seed;
            out["config"] = cfg;
            out["report"] = to_json(rep);
            out["observed"] = to_json(obs);
        } else if (mode == "exact") {
            if (!allow_long)
                throw UnsupportedCombinationError(
                    "mode=exact with a posterior statistic enumerates the full space; "
                    "pass --allow-long if you mean it");
            EnumStatistic stat;
            stat.name = "posterior[" + pred.name + "]";
            const uint64_t seed = common.seed;
            auto value = [pred, R, C, prior, n_tab_draws, seed](std::span<const long long> cells) {
                DirichletParams params;
                params.shape = {R, C};
                params.concentration.assign(cells.size(), 0.0);
                for (size_t i = 0; i < cells.size(); ++i)
                    params.concentration[i] = static_cast<double>(cells[i]) + prior;
                const long long hits = count_event_hits(
                    params, pred, n_tab_draws, substream_seed(seed, cells_seed(cells)),
                    Exec::serial);
                return static_cast<double>(hits) / static_cast<double>(n_tab_draws);
            };
            stat.value = value;
            stat.make_qualifier = [value](std::span<const long long> observed) {
                const double t_obs = value(observed);
                return [value, t_obs](std::span<const long long> cells) {
                    return value(cells) >= t_obs;
                };
            };
            TestReport rep = exact_p_value_enumerated(margins, stat, table);
            rep.seed = common.seed;
            rep.n_samples = n_tab_draws;
            out["config"] = cfg;
            out["report"] = to_json(rep);
            out["observed"] = to_json(obs);
        } else {
            throw UnsupportedCombinationError(test_name + " supports mode=mc (or exact with --allow-long)");
        }
    } else {
        throw UnsupportedCombinationError("unknown test: " + test_name);
    }

    out["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    emit(out, common.out_path);
    return 0;
}

int run_enumerate(const CommonOpts& common, bool force) {
    const auto t0 = Clock::now();
    const ContingencyTable table = parse_table_file(common.table_path);
    Json out;
    Json cfg = config_echo(common);
    cfg["command"] = "enumerate";
    out["config"] = cfg;

    if (table.rank() == 2) {
        const RxCMargins margins = RxCMargins::from_table(table);
        const uint64_t dp = rxc_count(margins);
        out["table_count_dp"] = dp;
        if (dp <= 100000000ULL || force) {
            NeumaierSum total;
            const double margin_term = rxc_log_pmf_margin_term(margins);
            struct Acc {
                uint64_t n = 0;
                NeumaierSum s;
            };
            const auto comps = first_row_compositions(margins);
            std::vector<Acc> accs(comps.size());
#pragma omp parallel for schedule(dynamic)
            for (size_t ci = 0; ci < comps.size(); ++ci) {
                Acc a;
                rxc_enumerate_under_first_row(
                    margins, comps[ci], [&](std::span<const long long> cells) {
                        double lp = margin_term;
                        for (long long v : cells) lp -= log_factorial(v);
                        a.s.add(std::exp(lp));
                        ++a.n;
                    });
                accs[ci] = a;
            }
            uint64_t n = 0;
            for (const Acc& a : accs) {
                n += a.n;
                total.add(a.s);
            }
            out["table_count_enumerated"] = n;
            out["counts_agree"] = (n == dp);
            out["pmf_total"] = total.value();
        } else {
            out["table_count_enumerated"] = nullptr;
            out["note"] = "space too large to stream by default; pass --force";
        }
    } else {
        const StratifiedMargins margins = StratifiedMargins::from_table(table);
        const auto space = enumerate_stratified_space(margins);
        NeumaierSum total;
        for (const StratifiedPoint& pt : space) total.add(stratified_null_pmf(pt, margins));
        out["space_points"] = space.size();
        out["pmf_total"] = total.value();
    }
    out["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    emit(out, common.out_path);
    return 0;
}

int run_region(const CommonOpts& common, const std::string& test_name, double alpha, double prior,
               double epsilon, long long n_posterior) {
    const auto t0 = Clock::now();
    if (test_name != "simpson" && test_name != "simpson-ratio")
        throw UnsupportedCombinationError("region supports --test simpson or simpson-ratio");
    const ContingencyTable table = parse_table_file(common.table_path);
    if (table.rank() != 3)
        throw UnsupportedCombinationError("region requires a stratified 2x2x2 table");

    StratifiedExactConfig sc;
    sc.prior_concentration = prior;
    sc.epsilon = epsilon;
    sc.ratio_statistic = (test_name == "simpson-ratio");
    sc.seed = common.seed;
    sc.n_alt_draws = n_posterior;
    sc.n_null_draws = n_posterior;
    const StratifiedExactResult res = stratified_exact_test(table, sc);

    // Remark-2.3 ratio for the plain Simpson statistic; the ratio statistic
    // is already a P1/P0 ratio.
    std::vector<double> ratios(res.space.size());
    for (size_t i = 0; i < ratios.size(); ++i) {
        if (sc.ratio_statistic) {
            ratios[i] = res.statistics[i];
        } else {
            const double p1 = res.p1_estimates[i];
            ratios[i] = (p1 < 1.0) ? p1 / (1.0 - p1) : std::numeric_limits<double>::infinity();
        }
    }
    const AlphaRegion region = bayes_region_alpha(ratios, res.null_pmf, alpha);

    Json out;
    Json cfg = config_echo(common);
    cfg["command"] = "region";
    cfg["test"] = test_name;
    cfg["alpha"] = alpha;
    cfg["prior"] = prior;
    cfg["epsilon"] = epsilon;
    cfg["n_posterior"] = n_posterior;
    out["config"] = cfg;
    out["space_points"] = res.space.size();
    out["region_size"] = region.region.size();
    out["delta_alpha"] = std::isinf(region.delta_alpha) ? Json("inf") : Json(region.delta_alpha);
    out["null_mass"] = region.null_mass;
    Json pts = Json::array();
    for (size_t i : region.region)
        pts.push_back(Json::array({res.space[i].n111, res.space[i].n211}));
    out["region_points"] = pts;
    out["observed_in_region"] =
        std::binary_search(region.region.begin(), region.region.end(), res.observed_index);
    out["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    emit(out, common.out_path);
    return 0;
}

int run_power(const CommonOpts& common, long long n_proposals, long long n_resample,
              long long n_null, long long n_posterior, double prior, bool paper_scale) {
    const auto t0 = Clock::now();
    const ContingencyTable table = parse_table_file(common.table_path);
    if (table.rank() != 2) throw UnsupportedCombinationError("power requires an RxC table");

    PowerStudyConfig pc;
    pc.margins = RxCMargins::from_table(table);
    pc.alternative = plugin_probs(table).values();
    pc.prior_concentration = prior;
    pc.seed = common.seed;
    pc.n_proposals = paper_scale ? 1000000 : n_proposals;
    pc.n_resample = paper_scale ? 100000 : n_resample;
    pc.n_null_reference = paper_scale ? 100000 : n_null;
    pc.n_posterior = paper_scale ? 10000 : n_posterior;

    const PowerSummary summary = power_study(pc);

    Json out;
    Json cfg = config_echo(common);
    cfg["command"] = "power";
    cfg["n_proposals"] = pc.n_proposals;
    cfg["n_resample"] = pc.n_resample;
    cfg["n_null_reference"] = pc.n_null_reference;
    cfg["n_posterior"] = pc.n_posterior;
    cfg["prior"] = prior;
    cfg["paper_scale"] = paper_scale;
    out["config"] = cfg;
    out["summary"] = to_json(summary);
    out["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    emit(out, common.out_path);
    return 0;
}

int run_demo(const CommonOpts& common, int k, double mu1, double alpha, long long n_mc) {
    const auto t0 = Clock::now();
    const GaussianDemoResult res = gaussian_demo(k, mu1, alpha, n_mc, common.seed);
    Json out;
    Json cfg = config_echo(common);
    cfg["command"] = "demo";
    cfg["k"] = k;
    cfg["mu1"] = mu1;
    cfg["alpha"] = alpha;
    cfg["n_mc"] = n_mc;
    out["config"] = cfg;
    out["result"] = to_json(res);
    out["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    emit(out, common.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo Bayes-optimal tests for cross-tabulated count data"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string test_name = "simpson";
    std::string mode = "auto";
    double prior = 0.5, epsilon = 0.1, alpha = 0.05, mu1 = 3.2;
    long long n_posterior = 100000, n_null = 10000;
    long long n_proposals = 100000, n_resample = 10000, n_ref = 10000, n_post_power = 1000;
    long long n_mc = 1000000;
    int demo_k = 100;
    bool paper_scale = false, allow_long = false, force = false;

    const auto add_common = [&](CLI::App* cmd, bool needs_table, bool needs_seed) {
        if (needs_table)
            cmd->add_option("--table", common.table_path, "table file")->required();
        if (needs_seed) cmd->add_option("--seed", common.seed, "master RNG seed")->required();
        cmd->add_option("--out", common.out_path, "write the JSON report here (default stdout)");
        cmd->add_option("--threads", common.threads,
                        "worker count (BAYESTAB_THREADS overrides)");
    };

    CLI::App* test = app.add_subcommand("test", "run a significance test");
    add_common(test, true, true);
    test->add_option("--test", test_name,
                     "simpson | simpson-ratio | gamma-exact | concordance | positive-dependence")
        ->required();
    test->add_option("--mode", mode, "exact | mc | auto");
    test->add_option("--prior", prior, "Dirichlet prior concentration per cell");
    test->add_option("--epsilon", epsilon, "epsilon of the null neighborhood event");
    test->add_option("--n-posterior", n_posterior, "posterior draws per statistic");
    test->add_option("--n-null", n_null, "sampled null tables (mc mode)");
    test->add_flag("--paper-scale", paper_scale, "use the publication-scale sample sizes");
    test->add_flag("--allow-long", allow_long, "permit enumerated posterior statistics");

    CLI::App* enumerate = app.add_subcommand("enumerate", "count/stream the conditional space");
    add_common(enumerate, true, false);
    enumerate->add_flag("--force", force, "stream even very large spaces");

    CLI::App* region = app.add_subcommand("region", "Bayes rejection region at level alpha");
    add_common(region, true, true);
    region->add_option("--test", test_name, "simpson | simpson-ratio");
    region->add_option("--alpha", alpha, "significance level");
    region->add_option("--prior", prior, "Dirichlet prior concentration per cell");
    region->add_option("--epsilon", epsilon, "epsilon of the null neighborhood event");
    region->add_option("--n-posterior", n_posterior, "posterior draws per point");

    CLI::App* power = app.add_subcommand("power", "importance-sampling power study");
    add_common(power, true, true);
    power->add_option("--n-proposals", n_proposals, "null proposals");
    power->add_option("--n-resample", n_resample, "alternative realizations");
    power->add_option("--n-null", n_ref, "null reference sample");
    power->add_option("--n-posterior", n_post_power, "posterior draws per statistic");
    power->add_option("--prior", prior, "Dirichlet prior concentration per cell");
    power->add_flag("--paper-scale", paper_scale, "use the publication-scale sample sizes");

    CLI::App* demo = app.add_subcommand("demo", "Gaussian rejection-region power comparison");
    add_common(demo, false, true);
    demo->add_option("--k", demo_k, "dimension");
    demo->add_option("--mu1", mu1, "mean of the first coordinate");
    demo->add_option("--alpha", alpha, "significance level");
    demo->add_option("--n-mc", n_mc, "Monte Carlo draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        apply_threads(common.threads);
        if (test->parsed())
            return run_test(common, test_name, mode, prior, epsilon, n_posterior, n_null,
                            paper_scale, allow_long);
        if (enumerate->parsed()) return run_enumerate(common, force);
        if (region->parsed())
            return run_region(common, test_name, alpha, prior, epsilon, n_posterior);
        if (power->parsed())
            return run_power(common, n_proposals, n_resample, n_ref, n_post_power, prior,
                             paper_scale);
        if (demo->parsed()) return run_demo(common, demo_k, mu1, alpha, n_mc);
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

// Wall-clock comparison of the serial reference kernels against their OpenMP
// counterparts. Both paths produce bit-identical results (the unit tests
// assert that); this binary reports the speedup actually realized.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "bayestab/power.hpp"
#include "bayestab/table_io.hpp"
#include "bayestab/test_engine.hpp"

using namespace bayestab;
using Clock = std::chrono::steady_clock;

namespace {

template <class Fn>
double time_seconds(Fn&& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-44s serial %8.3fs   openmp %8.3fs   speedup %.2fx\n", name, serial, parallel,
                serial / parallel);
    std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
    bool full = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--full") == 0) full = true;

    const auto dp = parse_table_file(std::string(BAYESTAB_DATA_DIR) + "/death_penalty.txt");
    const auto js = parse_table_file(std::string(BAYESTAB_DATA_DIR) + "/job_satisfaction.txt");
    const auto js_margins = RxCMargins::from_table(js);

    std::printf("kernel benchmark, %d workers (--full for publication-scale sizes)\n\n",
                omp_get_max_threads());

    {
        const long long n = full ? 2000000 : 500000;
        const auto params = posterior_params(dp, 0.5);
        const EventPredicate e = simpson_event();
        long long h1 = 0, h2 = 0;
        const double ts = time_seconds(
            [&] { h1 = count_event_hits(params, e, n, 42, Exec::serial); });
        const double tp = time_seconds(
            [&] { h2 = count_event_hits(params, e, n, 42, Exec::parallel); });
        report("posterior event counting (2x2x2 Simpson)", ts, tp);
        if (h1 != h2) std::printf("  MISMATCH: %lld vs %lld\n", h1, h2);
    }

    {
        const auto stat = posterior_event_statistic(concordance_event(4, 4), 4, 4, 0.5,
                                                    full ? 10000 : 2000);
        const long long n_null = full ? 2000 : 500;
        TestReport r1, r2;
        const double ts = time_seconds(
            [&] { r1 = mc_significance(js_margins, stat, 0.9564, n_null, 7, Exec::serial); });
        const double tp = time_seconds(
            [&] { r2 = mc_significance(js_margins, stat, 0.9564, n_null, 7, Exec::parallel); });
        report("null-table posterior statistics (4x4)", ts, tp);
        if (r1.p_value != r2.p_value) std::printf("  MISMATCH\n");
    }

    {
        // full: the 90,208,550-table space; default: a ~5.9M-table subspace
        const RxCMargins m = full ? js_margins : RxCMargins{{10, 11, 17, 10}, {2, 7, 21, 18}};
        std::vector<long long> obs_cells;
        {
            CounterRng rng(3);
            obs_cells = rxc_sample_cells(m, rng);
        }
        const auto obs = validate_table(obs_cells, std::array<int, 2>{4, 4});
        TestReport r1, r2;
        const double ts = time_seconds(
            [&] { r1 = exact_p_value_enumerated(m, gamma_statistic(4, 4), obs, Exec::serial); });
        const double tp = time_seconds(
            [&] { r2 = exact_p_value_enumerated(m, gamma_statistic(4, 4), obs, Exec::parallel); });
        char label[80];
        std::snprintf(label, sizeof(label), "exact enumeration p-value (%llu tables)",
                      static_cast<unsigned long long>(r1.table_count));
        report(label, ts, tp);
        if (r1.p_value != r2.p_value || r1.qualifying_count != r2.qualifying_count)
            std::printf("  MISMATCH\n");
    }

    {
        const long long n = full ? 10000000 : 2000000;
        GaussianDemoResult r1, r2;
        const double ts =
            time_seconds([&] { r1 = gaussian_demo(100, 3.2, 0.05, n, 5, Exec::serial); });
        const double tp =
            time_seconds([&] { r2 = gaussian_demo(100, 3.2, 0.05, n, 5, Exec::parallel); });
        report("Gaussian power demo (K=100)", ts, tp);
        if (r1.lrt_power != r2.lrt_power) std::printf("  MISMATCH\n");
    }

    {
        PowerStudyConfig cfg;
        cfg.margins = js_margins;
        cfg.alternative = plugin_probs(js).values();
        cfg.seed = 11;
        cfg.n_proposals = full ? 100000 : 20000;
        cfg.n_resample = full ? 10000 : 2000;
        cfg.n_null_reference = full ? 10000 : 2000;
        cfg.n_posterior = full ? 1000 : 300;
        PowerSummary s1, s2;
        cfg.mode = Exec::serial;
        const double ts = time_seconds([&] { s1 = power_study(cfg); });
        cfg.mode = Exec::parallel;
        const double tp = time_seconds([&] { s2 = power_study(cfg); });
        report("importance-sampling power study", ts, tp);
        if (s1.gamma_arm.mean_p != s2.gamma_arm.mean_p) std::printf("  MISMATCH\n");
    }

    return 0;
}

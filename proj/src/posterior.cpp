#include "bayestab/posterior.hpp"

#include <algorithm>
#include <cmath>

namespace bayestab {

DirichletParams posterior_params(const ContingencyTable& table, double prior_concentration) {
    if (!(prior_concentration > 0.0))
        throw NonPositivePriorError("prior concentration must be positive");
    DirichletParams p;
    p.shape = table.shape();
    p.concentration.resize(table.counts().size());
    for (size_t i = 0; i < p.concentration.size(); ++i)
        p.concentration[i] = static_cast<double>(table.counts()[i]) + prior_concentration;
    return p;
}

void sample_dirichlet(const DirichletParams& params, CounterRng& rng, std::span<double> out) {
    const size_t k = params.concentration.size();
    for (int attempt = 0; attempt < 100; ++attempt) {
        double sum = 0.0;
        for (size_t i = 0; i < k; ++i) {
            out[i] = rng.next_gamma(params.concentration[i]);
            sum += out[i];
        }
        if (sum > 0.0) {
            const double inv = 1.0 / sum;
            for (size_t i = 0; i < k; ++i) out[i] *= inv;
            return;
        }
    }
    throw DegenerateDrawError("gamma sum underflowed to zero repeatedly");
}

ProbabilityVector sample_dirichlet(const DirichletParams& params, CounterRng& rng) {
    std::vector<double> v(params.concentration.size());
    sample_dirichlet(params, rng, v);
    return ProbabilityVector(std::move(v), params.shape);
}

long long count_event_hits(const DirichletParams& params, const EventPredicate& predicate,
                           long long n_samples, uint64_t seed, Exec mode) {
    if (n_samples < 1) throw InputError("n_samples must be >= 1");
    const size_t k = params.concentration.size();
    long long hits = 0;
    bool degenerate = false;
    const bool par = (mode == Exec::parallel);
#pragma omp parallel if (par) reduction(+ : hits) reduction(|| : degenerate)
    {
        std::vector<double> buf(k);
#pragma omp for schedule(static)
        for (long long i = 0; i < n_samples; ++i) {
            if (degenerate) continue;
            CounterRng rng(seed, static_cast<uint64_t>(i));
            try {
                sample_dirichlet(params, rng, buf);
            } catch (const DegenerateDrawError&) {
                degenerate = true;
                continue;
            }
            if (predicate(std::span<const double>(buf))) ++hits;
        }
    }
    if (degenerate) throw DegenerateDrawError("gamma sum underflowed to zero repeatedly");
    return hits;
}

EventEstimate event_probability(const ContingencyTable& table, const EventPredicate& predicate,
                                double prior_concentration, long long n_samples, uint64_t seed,
                                Exec mode) {
    const DirichletParams params = posterior_params(table, prior_concentration);
    const long long hits = count_event_hits(params, predicate, n_samples, seed, mode);
    const double est = static_cast<double>(hits) / static_cast<double>(n_samples);
    const double se = std::sqrt(est * (1.0 - est) / static_cast<double>(n_samples));
    return EventEstimate{est, se, n_samples, seed};
}

PairCounts count_event_pair_hits(const DirichletParams& params, const EventPredicate& a,
                                 long long n_a, const EventPredicate& b, long long n_b,
                                 uint64_t seed, Exec mode) {
    if (n_a < 1 || n_b < 1) throw InputError("n_samples must be >= 1");
    const size_t k = params.concentration.size();
    const long long n = std::max(n_a, n_b);
    long long hits_a = 0, hits_b = 0;
    bool degenerate = false;
    const bool par = (mode == Exec::parallel);
#pragma omp parallel if (par) reduction(+ : hits_a, hits_b) reduction(|| : degenerate)
    {
        std::vector<double> buf(k);
#pragma omp for schedule(static)
        for (long long i = 0; i < n; ++i) {
            if (degenerate) continue;
            CounterRng rng(seed, static_cast<uint64_t>(i));
            try {
                sample_dirichlet(params, rng, buf);
            } catch (const DegenerateDrawError&) {
                degenerate = true;
                continue;
            }
            const std::span<const double> p(buf);
            if (i < n_a && a(p)) ++hits_a;
            if (i < n_b && b(p)) ++hits_b;
        }
    }
    if (degenerate) throw DegenerateDrawError("gamma sum underflowed to zero repeatedly");
    return PairCounts{hits_a, hits_b};
}

}  // namespace bayestab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bayestab/events.hpp"
#include "bayestab/rng.hpp"
#include "bayestab/table.hpp"

namespace bayestab {

// Execution mode of the data-parallel kernels. Both modes produce bit
// identical results; the serial path is the reference the tests compare
// against and the baseline the benchmark times.
enum class Exec { serial, parallel };

struct DirichletParams {
    std::vector<int> shape;
    std::vector<double> concentration;
};

// concentration_cell = count_cell + prior_concentration.
DirichletParams posterior_params(const ContingencyTable& table, double prior_concentration);

// One Dirichlet draw: independent Gamma(concentration, 1) per cell normalized
// by the sum. Retries a bounded number of times if the sum underflows to 0,
// then throws DegenerateDrawError.
void sample_dirichlet(const DirichletParams& params, CounterRng& rng, std::span<double> out);
ProbabilityVector sample_dirichlet(const DirichletParams& params, CounterRng& rng);

struct EventEstimate {
    double estimate;      // proportion of draws in the event
    double std_error;     // sqrt(est*(1-est)/n)
    long long n_samples;
    uint64_t seed;
};

// Draw i uses the substream (seed, i), so the result does not depend on how
// draws are sharded across threads.
EventEstimate event_probability(const ContingencyTable& table, const EventPredicate& predicate,
                                double prior_concentration, long long n_samples, uint64_t seed,
                                Exec mode = Exec::parallel);

// Same kernel on prebuilt params.
long long count_event_hits(const DirichletParams& params, const EventPredicate& predicate,
                           long long n_samples, uint64_t seed, Exec mode);

// Single pass counting two events with different draw budgets: event A over
// draws [0, n_a), event B over draws [0, n_b). Shares the per-draw substreams.
struct PairCounts {
    long long hits_a, hits_b;
};
PairCounts count_event_pair_hits(const DirichletParams& params, const EventPredicate& a,
                                 long long n_a, const EventPredicate& b, long long n_b,
                                 uint64_t seed, Exec mode);

}  // namespace bayestab

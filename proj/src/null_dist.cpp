#include "bayestab/null_dist.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "bayestab/log_factorial.hpp"

namespace bayestab {

double hypergeom_log_pmf(long long x, long long m, long long n, long long k) {
    if (k < 0 || k > m + n || x < std::max<long long>(0, k - n) || x > std::min(k, m))
        return -std::numeric_limits<double>::infinity();
    return log_choose(m, x) + log_choose(n, k - x) - log_choose(m + n, k);
}

StratifiedMargins StratifiedMargins::from_table(const ContingencyTable& table) {
    if (table.shape() != std::vector<int>{2, 2, 2})
        throw ShapeMismatchError("stratified margins require shape [2,2,2]");
    const auto& c = table.counts();
    StratifiedMargins m;
    for (int s = 0; s < 2; ++s) {
        const long long* v = c.data() + 4 * s;
        m.stratum[s] = StratumMargins{v[0] + v[1], v[2] + v[3], v[0] + v[2], v[1] + v[3]};
    }
    return m;
}

namespace {

void check_stratum(const StratumMargins& s) {
    if (s.row1 < 0 || s.row2 < 0 || s.col1 < 0 || s.col2 < 0 ||
        s.row1 + s.row2 != s.col1 + s.col2)
        throw InconsistentMarginsError("stratum row and column totals disagree");
}

std::pair<long long, long long> stratum_range(const StratumMargins& s) {
    // admissible N_{s11}: max(0, col1-row2) .. min(col1, row1)
    return {std::max<long long>(0, s.col1 - s.row2), std::min(s.col1, s.row1)};
}

}  // namespace

ContingencyTable stratified_point_table(const StratifiedPoint& pt, const StratifiedMargins& m) {
    const long long xs[2] = {pt.n111, pt.n211};
    std::vector<long long> cells(8);
    for (int s = 0; s < 2; ++s) {
        const StratumMargins& sm = m.stratum[s];
        const long long x = xs[s];
        cells[4 * s + 0] = x;
        cells[4 * s + 1] = sm.row1 - x;
        cells[4 * s + 2] = sm.col1 - x;
        cells[4 * s + 3] = sm.row2 - (sm.col1 - x);
    }
    return ContingencyTable(std::move(cells), {2, 2, 2});
}

std::vector<StratifiedPoint> enumerate_stratified_space(const StratifiedMargins& m) {
    check_stratum(m.stratum[0]);
    check_stratum(m.stratum[1]);
    const auto [lo1, hi1] = stratum_range(m.stratum[0]);
    const auto [lo2, hi2] = stratum_range(m.stratum[1]);
    if (lo1 > hi1 || lo2 > hi2) throw InconsistentMarginsError("empty stratified sample space");
    std::vector<StratifiedPoint> pts;
    pts.reserve(static_cast<size_t>(hi1 - lo1 + 1) * (hi2 - lo2 + 1));
    for (long long x = lo1; x <= hi1; ++x)
        for (long long y = lo2; y <= hi2; ++y) pts.push_back(StratifiedPoint{x, y});
    return pts;
}

double stratified_null_pmf(const StratifiedPoint& pt, const StratifiedMargins& m) {
    const StratumMargins& s1 = m.stratum[0];
    const StratumMargins& s2 = m.stratum[1];
    const double lp = hypergeom_log_pmf(pt.n111, s1.row1, s1.row2, s1.col1) +
                      hypergeom_log_pmf(pt.n211, s2.row1, s2.row2, s2.col1);
    return std::exp(lp);
}

RxCMargins RxCMargins::from_table(const ContingencyTable& table) {
    return RxCMargins{table.row_sums(), table.col_sums()};
}

void RxCMargins::validate() const {
    if (rows.empty() || cols.empty()) throw InconsistentMarginsError("empty margin vector");
    long long rs = 0, cs = 0;
    for (long long r : rows) {
        if (r < 0) throw InconsistentMarginsError("negative row sum");
        rs += r;
    }
    for (long long c : cols) {
        if (c < 0) throw InconsistentMarginsError("negative column sum");
        cs += c;
    }
    if (rs != cs) throw InconsistentMarginsError("row and column totals disagree");
}

long long RxCMargins::total() const { return std::accumulate(rows.begin(), rows.end(), 0LL); }

double rxc_log_pmf_margin_term(const RxCMargins& m) {
    double t = -log_factorial(m.total());
    for (long long r : m.rows) t += log_factorial(r);
    for (long long c : m.cols) t += log_factorial(c);
    return t;
}

double rxc_log_pmf(std::span<const long long> cells, const RxCMargins& m) {
    double lp = rxc_log_pmf_margin_term(m);
    for (long long v : cells) lp -= log_factorial(v);
    return lp;
}

double rxc_log_pmf(const ContingencyTable& table) {
    if (table.rank() != 2) throw ShapeMismatchError("rxc_log_pmf requires a two-way table");
    return rxc_log_pmf(table.counts(), RxCMargins::from_table(table));
}

std::vector<std::vector<long long>> first_row_compositions(const RxCMargins& m) {
    m.validate();
    const int C = m.C();
    std::vector<std::vector<long long>> out;
    std::vector<long long> row(C, 0);
    std::vector<long long> tails(C, 0);
    for (int j = C - 2; j >= 0; --j) tails[j] = tails[j + 1] + m.cols[j + 1];
    auto rec = [&](auto&& self, int j, long long rem) -> void {
        if (j == C - 1) {
            if (rem > m.cols[j]) return;
            row[j] = rem;
            out.push_back(row);
            return;
        }
        const long long lo = std::max<long long>(0, rem - tails[j]);
        const long long hi = std::min(rem, m.cols[j]);
        for (long long x = lo; x <= hi; ++x) {
            row[j] = x;
            self(self, j + 1, rem - x);
        }
    };
    rec(rec, 0, m.rows[0]);
    return out;
}

namespace {

struct VecHash {
    size_t operator()(const std::vector<long long>& v) const {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (long long x : v) h = mix64(h ^ static_cast<uint64_t>(x));
        return static_cast<size_t>(h);
    }
};

}  // namespace

uint64_t rxc_count(const RxCMargins& m) {
    m.validate();
    const int R = m.R(), C = m.C();
    using StateMap = std::unordered_map<std::vector<long long>, uint64_t, VecHash>;
    StateMap states;
    states.emplace(m.cols, 1);
    std::vector<long long> comp(C, 0);
    for (int i = 0; i + 1 < R; ++i) {
        StateMap next;
        for (const auto& [rem, ways] : states) {
            std::vector<long long> tails(C, 0);
            for (int j = C - 2; j >= 0; --j) tails[j] = tails[j + 1] + rem[j + 1];
            auto rec = [&](auto&& self, int j, long long r) -> void {
                if (j == C - 1) {
                    if (r > rem[j]) return;
                    comp[j] = r;
                    std::vector<long long> nrem(C);
                    for (int k = 0; k < C; ++k) nrem[k] = rem[k] - comp[k];
                    next[nrem] += ways;
                    return;
                }
                const long long lo = std::max<long long>(0, r - tails[j]);
                const long long hi = std::min(r, rem[j]);
                for (long long x = lo; x <= hi; ++x) {
                    comp[j] = x;
                    self(self, j + 1, r - x);
                }
            };
            rec(rec, 0, m.rows[i]);
        }
        states = std::move(next);
    }
    // last row is forced to the remaining column sums
    uint64_t total = 0;
    for (const auto& [rem, ways] : states) {
        long long s = std::accumulate(rem.begin(), rem.end(), 0LL);
        if (s == m.rows[R - 1]) total += ways;
    }
    return total;
}

std::vector<long long> rxc_sample_cells(const RxCMargins& m, CounterRng& rng) {
    m.validate();
    const int R = m.R(), C = m.C();
    std::vector<long long> cells(static_cast<size_t>(R) * C, 0);
    std::vector<long long> colrem = m.cols;
    for (int i = 0; i + 1 < R; ++i) {
        long long rowrem = m.rows[i];
        long long tail = 0;
        for (int j = 0; j < C; ++j) tail += colrem[j];
        for (int j = 0; j + 1 < C; ++j) {
            tail -= colrem[j];
            const long long x = rng.next_hypergeom(colrem[j], tail, rowrem);
            cells[i * C + j] = x;
            colrem[j] -= x;
            rowrem -= x;
        }
        cells[i * C + C - 1] = rowrem;
        colrem[C - 1] -= rowrem;
    }
    for (int j = 0; j < C; ++j) cells[(R - 1) * C + j] = colrem[j];
    return cells;
}

ContingencyTable rxc_sample(const RxCMargins& m, CounterRng& rng) {
    return ContingencyTable(rxc_sample_cells(m, rng), {m.R(), m.C()});
}

}  // namespace bayestab

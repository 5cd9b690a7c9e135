#include "bayestab/table.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace bayestab {

namespace {

long long shape_product(std::span<const int> shape) {
    long long p = 1;
    for (int d : shape) {
        if (d <= 0) throw ShapeMismatchError("shape dimensions must be positive");
        p *= d;
    }
    return p;
}

}  // namespace

ContingencyTable::ContingencyTable(std::vector<long long> counts, std::vector<int> shape)
    : shape_(std::move(shape)), counts_(std::move(counts)) {
    const long long cells = shape_product(shape_);
    if (static_cast<long long>(counts_.size()) != cells)
        throw ShapeMismatchError("count array length does not match shape product");
    total_ = 0;
    for (long long c : counts_) {
        if (c < 0) throw NegativeCountError("negative cell count");
        total_ += c;
    }
}

long long ContingencyTable::at(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != rank()) throw ShapeMismatchError("index rank mismatch");
    long long flat = 0;
    for (int d = 0; d < rank(); ++d) {
        if (index[d] < 0 || index[d] >= shape_[d]) throw ShapeMismatchError("index out of range");
        flat = flat * shape_[d] + index[d];
    }
    return counts_[flat];
}

const std::vector<long long>& ContingencyTable::row_sums() const {
    if (rank() != 2) throw ShapeMismatchError("row_sums requires a two-way table");
    if (row_sums_.empty()) {
        const int r = shape_[0], c = shape_[1];
        row_sums_.assign(r, 0);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) row_sums_[i] += counts_[i * c + j];
    }
    return row_sums_;
}

const std::vector<long long>& ContingencyTable::col_sums() const {
    if (rank() != 2) throw ShapeMismatchError("col_sums requires a two-way table");
    if (col_sums_.empty()) {
        const int r = shape_[0], c = shape_[1];
        col_sums_.assign(c, 0);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) col_sums_[j] += counts_[i * c + j];
    }
    return col_sums_;
}

ContingencyTable validate_table(std::span<const long long> raw_counts, std::span<const int> shape) {
    return ContingencyTable(std::vector<long long>(raw_counts.begin(), raw_counts.end()),
                            std::vector<int>(shape.begin(), shape.end()));
}

ProbabilityVector::ProbabilityVector(std::vector<double> values, std::vector<int> shape)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (static_cast<long long>(values_.size()) != shape_product(shape_))
        throw ShapeMismatchError("value array length does not match shape product");
    double sum = 0.0;
    for (double v : values_) {
        if (v < 0.0 || std::isnan(v)) throw InputError("probability values must be nonnegative");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw InputError("probability values must sum to 1");
}

ProbabilityVector plugin_probs(const ContingencyTable& table) {
    if (table.total() == 0) throw EmptyTableError("plugin_probs on an empty table");
    std::vector<double> v(table.counts().size());
    const double n = static_cast<double>(table.total());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(table.counts()[i]) / n;
    return ProbabilityVector(std::move(v), table.shape());
}

namespace {

double extended_ratio(double num, double den) {
    if (num > 0.0 && den > 0.0) return num / den;
    if (num == 0.0 && den > 0.0) return 0.0;
    if (num > 0.0 && den == 0.0) return std::numeric_limits<double>::infinity();
    throw IndeterminateOddsRatioError("odds ratio 0/0");
}

}  // namespace

OddsRatioSet odds_ratios_222(const ProbabilityVector& p) {
    if (p.shape() != std::vector<int>{2, 2, 2})
        throw ShapeMismatchError("odds_ratios_222 requires shape [2,2,2]");
    const auto& v = p.values();
    // flat index = 4x + 2y + z
    const double m11 = v[0] + v[4], m12 = v[1] + v[5];
    const double m21 = v[2] + v[6], m22 = v[3] + v[7];
    return OddsRatioSet{extended_ratio(v[0] * v[3], v[1] * v[2]),
                        extended_ratio(v[4] * v[7], v[5] * v[6]),
                        extended_ratio(m11 * m22, m12 * m21)};
}

ConcordancePair concordance_probs(std::span<const double> p, int rows, int cols) {
    // suf[i][j] = sum over h>=i, k>=j; pre[i][j] = sum over h>=i, k<=j.
    std::vector<double> suf((rows + 1) * (cols + 1), 0.0);
    std::vector<double> pre((rows + 1) * (cols + 2), 0.0);
    auto S = [&](int i, int j) -> double& { return suf[i * (cols + 1) + j]; };
    auto Q = [&](int i, int j) -> double& { return pre[i * (cols + 2) + j + 1]; };
    for (int i = rows - 1; i >= 0; --i)
        for (int j = cols - 1; j >= 0; --j)
            S(i, j) = p[i * cols + j] + S(i + 1, j) + S(i, j + 1) - S(i + 1, j + 1);
    for (int i = rows - 1; i >= 0; --i)
        for (int j = 0; j < cols; ++j)
            Q(i, j) = p[i * cols + j] + Q(i + 1, j) + Q(i, j - 1) - Q(i + 1, j - 1);
    double pic = 0.0, pid = 0.0;
    for (int i = 0; i < rows - 1; ++i)
        for (int j = 0; j < cols; ++j) {
            const double pij = p[i * cols + j];
            if (j < cols - 1) pic += pij * S(i + 1, j + 1);
            if (j > 0) pid += pij * Q(i + 1, j - 1);
        }
    return ConcordancePair{2.0 * pic, 2.0 * pid};
}

ConcordancePair concordance_probs(const ProbabilityVector& p) {
    if (p.shape().size() != 2) throw ShapeMismatchError("concordance_probs requires a two-way table");
    return concordance_probs(p.span(), p.shape()[0], p.shape()[1]);
}

std::optional<double> kendall_gamma(std::span<const double> p, int rows, int cols) {
    const ConcordancePair cp = concordance_probs(p, rows, cols);
    const double denom = cp.pi_c + cp.pi_d;
    if (denom <= 0.0) return std::nullopt;
    return (cp.pi_c - cp.pi_d) / denom;
}

std::optional<double> kendall_gamma(const ProbabilityVector& p) {
    if (p.shape().size() != 2) throw ShapeMismatchError("kendall_gamma requires a two-way table");
    return kendall_gamma(p.span(), p.shape()[0], p.shape()[1]);
}

ConcordanceCounts concordance_counts(std::span<const long long> cells, int rows, int cols) {
    std::vector<long long> suf((rows + 1) * (cols + 1), 0);
    std::vector<long long> pre((rows + 1) * (cols + 2), 0);
    auto S = [&](int i, int j) -> long long& { return suf[i * (cols + 1) + j]; };
    auto Q = [&](int i, int j) -> long long& { return pre[i * (cols + 2) + j + 1]; };
    for (int i = rows - 1; i >= 0; --i)
        for (int j = cols - 1; j >= 0; --j)
            S(i, j) = cells[i * cols + j] + S(i + 1, j) + S(i, j + 1) - S(i + 1, j + 1);
    for (int i = rows - 1; i >= 0; --i)
        for (int j = 0; j < cols; ++j)
            Q(i, j) = cells[i * cols + j] + Q(i + 1, j) + Q(i, j - 1) - Q(i + 1, j - 1);
    long long c = 0, d = 0;
    for (int i = 0; i < rows - 1; ++i)
        for (int j = 0; j < cols; ++j) {
            const long long nij = cells[i * cols + j];
            if (j < cols - 1) c += nij * S(i + 1, j + 1);
            if (j > 0) d += nij * Q(i + 1, j - 1);
        }
    return ConcordanceCounts{c, d};
}

bool gamma_geq(const ConcordanceCounts& a, const ConcordanceCounts& b) {
    const long long sa = a.concordant + a.discordant;
    const long long sb = b.concordant + b.discordant;
    if (sa == 0) return sb == 0;  // undefined ranks below defined, ties with undefined
    if (sb == 0) return true;
    // gamma(a) >= gamma(b)  <=>  (Ca-Da)(Cb+Db) >= (Cb-Db)(Ca+Da), both denominators > 0
    return (a.concordant - a.discordant) * sb >= (b.concordant - b.discordant) * sa;
}

}  // namespace bayestab

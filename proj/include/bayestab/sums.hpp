#pragma once

#include <cmath>

namespace bayestab {

// Neumaier compensated accumulator. Partition-local sums are combined in a
// fixed partition order, so totals do not depend on thread count.
class NeumaierSum {
   public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    void add(const NeumaierSum& other) {
        add(other.sum_);
        comp_ += other.comp_;
    }

    double value() const { return sum_ + comp_; }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace bayestab

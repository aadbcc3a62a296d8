#ifndef MTLAB_WEIGHTS_HPP
#define MTLAB_WEIGHTS_HPP

#include <vector>

namespace mtlab {

/// Finite-support moving-average weights: ordered (offset, value) entries with
/// strictly increasing offsets and at least one nonzero value.
class WeightProfile {
  public:
    struct Entry {
        int offset;
        double value;
    };

    explicit WeightProfile(std::vector<Entry> entries);

    /// Contiguous weights starting at `first_offset`.
    static WeightProfile from_values(const std::vector<double>& values, int first_offset = 0);

    /// `count` equal unit weights at offsets first_offset .. first_offset+count-1.
    static WeightProfile equal(int count, int first_offset = 0);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    int min_offset() const noexcept { return entries_.front().offset; }
    int max_offset() const noexcept { return entries_.back().offset; }
    /// Support diameter max_offset - min_offset.
    int span() const noexcept { return max_offset() - min_offset(); }

    double sum_squares() const noexcept;
    bool all_nonnegative() const noexcept;

    /// Values of the nonzero entries, in offset order.
    std::vector<double> nonzero_values() const;

    WeightProfile scaled(double factor) const;

  private:
    std::vector<Entry> entries_;
};

}  // namespace mtlab

#endif

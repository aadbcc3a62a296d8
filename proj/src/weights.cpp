#include "mtlab/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace mtlab {

WeightProfile::WeightProfile(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("weight profile must be nonempty");
    }
    bool any_nonzero = false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!std::isfinite(entries_[i].value)) {
            throw std::invalid_argument("weight values must be finite");
        }
        if (i > 0 && entries_[i].offset <= entries_[i - 1].offset) {
            throw std::invalid_argument("weight offsets must be strictly increasing");
        }
        if (entries_[i].value != 0.0) any_nonzero = true;
    }
    if (!any_nonzero) {
        throw std::invalid_argument("at least one weight must be nonzero");
    }
}

WeightProfile WeightProfile::from_values(const std::vector<double>& values, int first_offset) {
    std::vector<Entry> entries;
    entries.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        entries.push_back({first_offset + static_cast<int>(i), values[i]});
    }
    return WeightProfile(std::move(entries));
}

WeightProfile WeightProfile::equal(int count, int first_offset) {
    if (count < 1) throw std::invalid_argument("weight count must be >= 1");
    return from_values(std::vector<double>(static_cast<std::size_t>(count), 1.0), first_offset);
}

double WeightProfile::sum_squares() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value * e.value;
    return s;
}

bool WeightProfile::all_nonnegative() const noexcept {
    for (const auto& e : entries_) {
        if (e.value < 0.0) return false;
    }
    return true;
}

std::vector<double> WeightProfile::nonzero_values() const {
    std::vector<double> out;
    for (const auto& e : entries_) {
        if (e.value != 0.0) out.push_back(e.value);
    }
    return out;
}

WeightProfile WeightProfile::scaled(double factor) const {
    std::vector<Entry> entries = entries_;
    for (auto& e : entries) e.value *= factor;
    return WeightProfile(std::move(entries));
}

}  // namespace mtlab

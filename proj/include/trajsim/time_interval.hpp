#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace trajsim {

using TimePoint = std::int64_t;

/// Half-open range of integer time units [start, end).
///
/// Non-empty intervals always satisfy start < end; the empty interval is a
/// dedicated value obtained from Interval::empty() or from operations whose
/// result contains no unit step. length() counts the unit steps covered.
class Interval {
public:
    /// Creates the empty interval.
    constexpr Interval() = default;

    Interval(TimePoint start, TimePoint end) : start_(start), end_(end) {
        if (start >= end) {
            throw std::invalid_argument("interval requires start < end");
        }
    }

    static constexpr Interval empty() { return Interval{}; }

    constexpr bool is_empty() const { return start_ == end_; }

    /// Lower bound; meaningful only for non-empty intervals.
    constexpr TimePoint start() const { return start_; }

    /// Exclusive upper bound; meaningful only for non-empty intervals.
    constexpr TimePoint end() const { return end_; }

    constexpr std::int64_t length() const { return end_ - start_; }

    /// True if every unit step of *this lies inside other. The empty
    /// interval is contained in everything.
    constexpr bool contained_in(const Interval& other) const {
        if (is_empty()) return true;
        if (other.is_empty()) return false;
        return other.start_ <= start_ && end_ <= other.end_;
    }

    constexpr bool intersects(const Interval& other) const {
        if (is_empty() || other.is_empty()) return false;
        return start_ < other.end_ && other.start_ < end_;
    }

    friend constexpr bool operator==(const Interval& a, const Interval& b) = default;

private:
    TimePoint start_ = 0;
    TimePoint end_ = 0;
};

/// Shared unit steps of a and b, or the empty interval.
inline Interval intersect(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    const TimePoint lo = std::max(a.start(), b.start());
    const TimePoint hi = std::min(a.end(), b.end());
    if (lo >= hi) return Interval::empty();
    return Interval{lo, hi};
}

inline std::ostream& operator<<(std::ostream& os, const Interval& i) {
    if (i.is_empty()) return os << "[)";
    return os << '[' << i.start() << ',' << i.end() << ')';
}

}  // namespace trajsim

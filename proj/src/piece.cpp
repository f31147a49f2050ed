#include "cakediv/piece.hpp"

#include <algorithm>
#include <ostream>

#include "cakediv/errors.hpp"

namespace cakediv {

Piece Piece::unit_prefix(double hi) {
    Piece p;
    if (hi > kSliverWidth) p.ivs_.push_back({0.0, hi});
    return p;
}

Piece Piece::from_sorted(std::vector<Interval> sorted) {
    Piece out;
    for (const Interval& iv : sorted) {
        if (!out.ivs_.empty() && iv.lo <= out.ivs_.back().hi) {
            out.ivs_.back().hi = std::max(out.ivs_.back().hi, iv.hi);
        } else if (iv.hi > iv.lo) {
            out.ivs_.push_back(iv);
        }
    }
    std::erase_if(out.ivs_, [](const Interval& iv) { return iv.width() < kSliverWidth; });
    return out;
}

Piece Piece::normalized(std::vector<Interval> raw) {
    for (const Interval& iv : raw) {
        if (!(iv.lo <= iv.hi))
            fail(ErrorKind::malformed_interval, "interval with lo > hi");
        if (!(iv.lo >= 0.0 && iv.hi <= 1.0))
            fail(ErrorKind::malformed_interval, "interval endpoint outside [0,1]");
    }
    std::sort(raw.begin(), raw.end());
    return from_sorted(std::move(raw));
}

double Piece::length() const {
    double len = 0.0;
    for (const Interval& iv : ivs_) len += iv.width();
    return len;
}

bool Piece::contains(double x) const {
    auto it = std::upper_bound(ivs_.begin(), ivs_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    return it != ivs_.begin() && x < std::prev(it)->hi;
}

bool Piece::subset_of(const Piece& other) const {
    std::size_t j = 0;
    for (const Interval& iv : ivs_) {
        while (j < other.ivs_.size() && other.ivs_[j].hi <= iv.lo) ++j;
        if (j == other.ivs_.size()) return false;
        if (!(other.ivs_[j].lo <= iv.lo && iv.hi <= other.ivs_[j].hi)) return false;
    }
    return true;
}

Piece piece_union(const Piece& a, const Piece& b) {
    std::vector<Interval> merged;
    merged.reserve(a.ivs_.size() + b.ivs_.size());
    std::merge(a.ivs_.begin(), a.ivs_.end(), b.ivs_.begin(), b.ivs_.end(),
               std::back_inserter(merged));
    return Piece::from_sorted(std::move(merged));
}

Piece piece_intersect(const Piece& a, const Piece& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.ivs_.size() && j < b.ivs_.size()) {
        double lo = std::max(a.ivs_[i].lo, b.ivs_[j].lo);
        double hi = std::min(a.ivs_[i].hi, b.ivs_[j].hi);
        if (lo < hi) out.push_back({lo, hi});
        if (a.ivs_[i].hi < b.ivs_[j].hi) ++i;
        else ++j;
    }
    return Piece::from_sorted(std::move(out));
}

Piece piece_diff(const Piece& a, const Piece& b) {
    std::vector<Interval> out;
    std::size_t j = 0;
    for (const Interval& iv : a.ivs_) {
        double lo = iv.lo;
        while (j < b.ivs_.size() && b.ivs_[j].hi <= lo) ++j;
        std::size_t k = j;
        while (k < b.ivs_.size() && b.ivs_[k].lo < iv.hi) {
            if (b.ivs_[k].lo > lo) out.push_back({lo, b.ivs_[k].lo});
            lo = std::max(lo, b.ivs_[k].hi);
            ++k;
        }
        if (lo < iv.hi) out.push_back({lo, iv.hi});
    }
    return Piece::from_sorted(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const Piece& p) {
    os << '{';
    bool first = true;
    for (const Interval& iv : p.intervals()) {
        if (!first) os << ", ";
        os << '[' << iv.lo << ',' << iv.hi << ')';
        first = false;
    }
    return os << '}';
}

} // namespace cakediv

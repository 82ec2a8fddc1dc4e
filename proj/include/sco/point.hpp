#ifndef SCO_POINT_HPP
#define SCO_POINT_HPP

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <vector>

#include "sco/errors.hpp"

namespace sco {

// A point in the unit cube [0,1]^d. Equality is exact bitwise coordinate
// equality; sites produced by the sampler are only ever duplicated by
// copying, so exact comparison is the intended identity test.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
    Point(std::initializer_list<double> coords) : coords_(coords) {}

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t k) const { return coords_[k]; }
    double& operator[](std::size_t k) { return coords_[k]; }
    const std::vector<double>& coords() const { return coords_; }
    std::span<const double> span() const { return {coords_.data(), coords_.size()}; }

    bool operator==(const Point& other) const { return coords_ == other.coords_; }
    bool operator!=(const Point& other) const { return !(*this == other); }

private:
    std::vector<double> coords_;
};

struct PointHash {
    std::size_t operator()(const Point& p) const {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        for (double c : p.coords()) {
            std::uint64_t bits;
            std::memcpy(&bits, &c, sizeof bits);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

inline bool in_unit_cube(const Point& p, double slack = 0.0) {
    for (double c : p.coords())
        if (!(c >= -slack && c <= 1.0 + slack)) return false;
    return true;
}

// An ordered batch of n points in [0,1]^d. When anchored, slot 0 holds the
// acquisition argmax and must not be replaced by optimizers.
class Design {
public:
    Design() = default;
    Design(std::vector<Point> sites, bool anchored) : sites_(std::move(sites)), anchored_(anchored) {
        if (sites_.empty()) throw ArgumentError("Design: needs at least one site");
        const std::size_t d = sites_.front().dim();
        for (const Point& p : sites_)
            if (p.dim() != d) throw ArgumentError("Design: mixed dimensions");
    }

    std::size_t size() const { return sites_.size(); }
    std::size_t dim() const { return sites_.empty() ? 0 : sites_.front().dim(); }
    bool anchored() const { return anchored_; }
    const Point& operator[](std::size_t i) const { return sites_[i]; }
    const std::vector<Point>& sites() const { return sites_; }

    void set_site(std::size_t slot, Point p) {
        if (slot >= sites_.size()) throw ArgumentError("Design::set_site: slot out of range");
        if (anchored_ && slot == 0) throw ArgumentError("Design::set_site: slot 0 is anchored");
        if (p.dim() != dim()) throw ArgumentError("Design::set_site: dimension mismatch");
        sites_[slot] = std::move(p);
    }

    bool contains(const Point& p) const {
        for (const Point& s : sites_)
            if (s == p) return true;
        return false;
    }

    bool all_distinct() const {
        for (std::size_t i = 0; i < sites_.size(); ++i)
            for (std::size_t j = i + 1; j < sites_.size(); ++j)
                if (sites_[i] == sites_[j]) return false;
        return true;
    }

private:
    std::vector<Point> sites_;
    bool anchored_ = false;
};

} // namespace sco

#endif

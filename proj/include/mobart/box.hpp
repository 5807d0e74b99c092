#ifndef MOBART_BOX_HPP
#define MOBART_BOX_HPP

#include "mobart/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobart {

// Axis-aligned box with per-dimension intervals [lo, hi). An interval whose
// upper end is the domain's upper face is closed there, which makes the leaf
// boxes of a tree a true partition of the domain.
class Box {
public:
    Box() = default;
    Box(std::vector<double> lo, std::vector<double> hi, std::vector<std::uint8_t> closed_hi)
        : lo_(std::move(lo)), hi_(std::move(hi)), closed_hi_(std::move(closed_hi))
    {
        if (lo_.size() != hi_.size() || lo_.size() != closed_hi_.size()) {
            throw std::invalid_argument("Box: bound vectors differ in length");
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return lo_.size(); }
    [[nodiscard]] const std::vector<double>& lo() const noexcept { return lo_; }
    [[nodiscard]] const std::vector<double>& hi() const noexcept { return hi_; }
    [[nodiscard]] double lo(std::size_t j) const noexcept { return lo_[j]; }
    [[nodiscard]] double hi(std::size_t j) const noexcept { return hi_[j]; }
    [[nodiscard]] bool closed_hi(std::size_t j) const noexcept { return closed_hi_[j] != 0; }
    [[nodiscard]] const std::vector<std::uint8_t>& closed_flags() const noexcept { return closed_hi_; }

    // A zero-width interval is a single point when its upper end is closed.
    [[nodiscard]] bool empty() const noexcept
    {
        for (std::size_t j = 0; j < dim(); ++j) {
            if (lo_[j] > hi_[j] || (lo_[j] == hi_[j] && !closed_hi(j))) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool contains(std::span<const double> x) const noexcept
    {
        if (x.size() != dim()) {
            return false;
        }
        for (std::size_t j = 0; j < dim(); ++j) {
            if (x[j] < lo_[j]) {
                return false;
            }
            if (closed_hi(j) ? x[j] > hi_[j] : x[j] >= hi_[j]) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] double volume() const noexcept
    {
        double v = 1.0;
        for (std::size_t j = 0; j < dim(); ++j) {
            v *= std::max(0.0, hi_[j] - lo_[j]);
        }
        return v;
    }

    [[nodiscard]] std::vector<double> midpoint() const
    {
        std::vector<double> mid(dim());
        for (std::size_t j = 0; j < dim(); ++j) {
            mid[j] = 0.5 * (lo_[j] + hi_[j]);
        }
        return mid;
    }

    // Splits along `var` at `cut`: left keeps [lo, cut), right keeps [cut, hi).
    [[nodiscard]] Box lower_part(std::size_t var, double cut) const
    {
        Box b = *this;
        b.hi_[var] = cut;
        b.closed_hi_[var] = 0;
        return b;
    }
    [[nodiscard]] Box upper_part(std::size_t var, double cut) const
    {
        Box b = *this;
        b.lo_[var] = cut;
        return b;
    }

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::vector<std::uint8_t> closed_hi_;
};

// Bounded input hyperrectangle shared by every tree of a model.
class Domain {
public:
    Domain() = default;
    Domain(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        if (lo_.empty() || lo_.size() != hi_.size()) {
            throw std::invalid_argument("Domain: need p >= 1 matching bounds");
        }
        for (std::size_t j = 0; j < lo_.size(); ++j) {
            if (!(lo_[j] < hi_[j])) {
                throw std::invalid_argument("Domain: lo must be < hi in dimension " + std::to_string(j));
            }
        }
    }

    static Domain unit(std::size_t p) { return {std::vector<double>(p, 0.0), std::vector<double>(p, 1.0)}; }

    [[nodiscard]] std::size_t dim() const noexcept { return lo_.size(); }
    [[nodiscard]] const std::vector<double>& lo() const noexcept { return lo_; }
    [[nodiscard]] const std::vector<double>& hi() const noexcept { return hi_; }
    [[nodiscard]] double lo(std::size_t j) const noexcept { return lo_[j]; }
    [[nodiscard]] double hi(std::size_t j) const noexcept { return hi_[j]; }

    [[nodiscard]] bool contains(std::span<const double> x) const noexcept
    {
        if (x.size() != dim()) {
            return false;
        }
        for (std::size_t j = 0; j < dim(); ++j) {
            if (!(x[j] >= lo_[j] && x[j] <= hi_[j])) {
                return false;
            }
        }
        return true;
    }

    void check(std::span<const double> x) const
    {
        if (x.size() != dim()) {
            throw std::invalid_argument("input has " + std::to_string(x.size()) + " coordinates, domain has "
                                        + std::to_string(dim()));
        }
        if (!contains(x)) {
            throw std::domain_error("input point lies outside the domain");
        }
    }

    [[nodiscard]] Box box() const { return {lo_, hi_, std::vector<std::uint8_t>(dim(), 1)}; }

    [[nodiscard]] double volume() const noexcept { return box().volume(); }

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    std::vector<double> lo_;
    std::vector<double> hi_;
};

// Componentwise [max(lo), min(hi)); nothing when the result is empty.
inline std::optional<Box> intersect_boxes(const Box& a, const Box& b)
{
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("intersect_boxes: dimension mismatch");
    }
    const std::size_t p = a.dim();
    std::vector<double> lo(p);
    std::vector<double> hi(p);
    std::vector<std::uint8_t> closed(p);
    for (std::size_t j = 0; j < p; ++j) {
        lo[j] = std::max(a.lo(j), b.lo(j));
        if (a.hi(j) < b.hi(j)) {
            hi[j] = a.hi(j);
            closed[j] = a.closed_hi(j);
        } else if (b.hi(j) < a.hi(j)) {
            hi[j] = b.hi(j);
            closed[j] = b.closed_hi(j);
        } else {
            hi[j] = a.hi(j);
            closed[j] = a.closed_hi(j) && b.closed_hi(j);
        }
        if (lo[j] > hi[j] || (lo[j] == hi[j] && closed[j] == 0)) {
            return std::nullopt;
        }
    }
    return Box(std::move(lo), std::move(hi), std::move(closed));
}

} // namespace mobart

#endif

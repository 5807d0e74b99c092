#ifndef MOBART_METRICS_HPP
#define MOBART_METRICS_HPP

#include "mobart/attainment.hpp"
#include "mobart/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace mobart {

// Euclidean distance from a to the nearest point of B.
inline double dist_point_to_set(std::span<const double> a, const PointSet& b)
{
    if (b.empty()) {
        throw std::invalid_argument("dist_point_to_set: empty reference set");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : b) {
        if (p.size() != a.size()) {
            throw std::invalid_argument("dist_point_to_set: dimension mismatch");
        }
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double diff = a[j] - p[j];
            s += diff * diff;
        }
        best = std::min(best, s);
    }
    return std::sqrt(best);
}

// Average over A of the distance to B. Not symmetric.
inline double avg_dist(const PointSet& a, const PointSet& b)
{
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("avg_dist: both point sets must be nonempty");
    }
    double total = 0.0;
    for (const auto& p : a) {
        total += dist_point_to_set(p, b);
    }
    return total / static_cast<double>(a.size());
}

struct Coverage {
    double overcoverage = 0.0;  // d(cloud, truth)
    double undercoverage = 0.0; // d(truth, cloud)
};

inline Coverage coverage(const PointSet& cloud, const PointSet& truth)
{
    return {avg_dist(cloud, truth), avg_dist(truth, cloud)};
}

namespace detail {

    inline double radical_inverse(std::size_t index, std::size_t base)
    {
        double inv = 1.0 / static_cast<double>(base);
        double f = inv;
        double r = 0.0;
        while (index > 0) {
            r += f * static_cast<double>(index % base);
            index /= base;
            f *= inv;
        }
        return r;
    }

    inline std::size_t nth_prime(std::size_t j)
    {
        static constexpr std::size_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
        if (j >= std::size(primes)) {
            throw std::invalid_argument("halton: dimension too large");
        }
        return primes[j];
    }

} // namespace detail

// Representative points of each box: its centroid, then k-1 Halton points
// (indices 1..k-1, bases 2,3,5,...) mapped into the box.
inline PointSet ps_cloud_to_points(const PSCloud& ps, std::size_t k_per_box = 1)
{
    if (k_per_box < 1) {
        throw std::invalid_argument("ps_cloud_to_points: need k_per_box >= 1");
    }
    PointSet out;
    out.reserve(ps.boxes.size() * k_per_box);
    for (const auto& entry : ps.boxes) {
        const Box& b = entry.box;
        out.push_back(b.midpoint());
        for (std::size_t i = 1; i < k_per_box; ++i) {
            Point x(b.dim());
            for (std::size_t j = 0; j < b.dim(); ++j) {
                x[j] = b.lo(j) + (b.hi(j) - b.lo(j)) * detail::radical_inverse(i, detail::nth_prime(j));
            }
            out.push_back(std::move(x));
        }
    }
    return out;
}

} // namespace mobart

#endif

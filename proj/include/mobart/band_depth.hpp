#ifndef MOBART_BAND_DEPTH_HPP
#define MOBART_BAND_DEPTH_HPP

#include "mobart/attainment.hpp"
#include "mobart/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mobart {

enum class Axis { first = 1, second = 2 };

// Lower-left boundary of a biobjective DPSC. Supports O(log n) queries of the
// lowest point of the set along a vertical (axis first) or horizontal cut.
class Staircase {
public:
    explicit Staircase(const CPF& cpf)
    {
        for (const auto& p : cpf.points) {
            if (p.objective.size() != 2) {
                throw std::invalid_argument("Staircase: only d = 2 is supported");
            }
        }
        build(cpf, 0, by_first_, min_second_);
        build(cpf, 1, by_second_, min_first_);
    }

    // min{y2 : (t, y2) in A}, +inf when the cut misses A.
    [[nodiscard]] double h1(double t) const noexcept { return query(by_first_, min_second_, t); }
    // min{y1 : (y1, s) in A}, +inf when the cut misses A.
    [[nodiscard]] double h2(double s) const noexcept { return query(by_second_, min_first_, s); }

    // Values where h1 (resp. h2) can change.
    [[nodiscard]] const std::vector<double>& breakpoints(Axis axis) const noexcept
    {
        return axis == Axis::first ? by_first_ : by_second_;
    }

private:
    static void build(const CPF& cpf, std::size_t key, std::vector<double>& keys, std::vector<double>& prefix_min)
    {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : cpf.points) {
            pts.emplace_back(p.objective[key], p.objective[1 - key]);
        }
        std::sort(pts.begin(), pts.end());
        double running = std::numeric_limits<double>::infinity();
        for (const auto& [k, other] : pts) {
            running = std::min(running, other);
            keys.push_back(k);
            prefix_min.push_back(running);
        }
    }

    static double query(const std::vector<double>& keys, const std::vector<double>& prefix_min, double t) noexcept
    {
        auto it = std::upper_bound(keys.begin(), keys.end(), t);
        if (it == keys.begin()) {
            return std::numeric_limits<double>::infinity();
        }
        return prefix_min[static_cast<std::size_t>(it - keys.begin()) - 1];
    }

    std::vector<double> by_first_, min_second_;
    std::vector<double> by_second_, min_first_;
};

inline double h_cut(const Staircase& stair, Axis axis, double value) noexcept
{
    return axis == Axis::first ? stair.h1(value) : stair.h2(value);
}

namespace detail {

    // Restricts a cut value to the objective box: the set starts no lower than
    // the box edge and is missed entirely above the far edge.
    inline double clip_to_box(double h, double lo, double hi) noexcept
    {
        if (h > hi) {
            return std::numeric_limits<double>::infinity();
        }
        return std::max(h, lo);
    }

    inline bool sandwiched(double hi_val, double hj, double hk) noexcept
    {
        return std::max(hj, hk) >= hi_val && hi_val >= std::min(hj, hk);
    }

} // namespace detail

// c_i lies in the band of (c_j, c_k) in the set-inclusion sense:
// A_j ∩ A_k ⊆ A_i ⊆ A_j ∪ A_k. Along every cut the sets are half-lines above
// h, so the test is min(h_j, h_k) <= h_i <= max(h_j, h_k) at every breakpoint.
// With `box`, sets are intersected with the objective box first.
inline bool band_contains(const CPF& ci, const CPF& cj, const CPF& ck,
                          const std::optional<ObjectiveBox>& box = std::nullopt)
{
    const Staircase si(ci);
    const Staircase sj(cj);
    const Staircase sk(ck);
    for (Axis axis : {Axis::first, Axis::second}) {
        const std::size_t along = axis == Axis::first ? 0 : 1;
        const std::size_t across = 1 - along;
        std::vector<double> cuts;
        for (const Staircase* s : {&si, &sj, &sk}) {
            const auto& b = s->breakpoints(axis);
            cuts.insert(cuts.end(), b.begin(), b.end());
        }
        if (box) {
            if (box->lo.size() != 2) {
                throw std::invalid_argument("band_contains: objective box must be 2-dimensional");
            }
            cuts.push_back(box->lo[along]);
            std::erase_if(cuts, [&](double t) { return t < box->lo[along] || t > box->hi[along]; });
        }
        for (double t : cuts) {
            double hi_val = h_cut(si, axis, t);
            double hj = h_cut(sj, axis, t);
            double hk = h_cut(sk, axis, t);
            if (box) {
                hi_val = detail::clip_to_box(hi_val, box->lo[across], box->hi[across]);
                hj = detail::clip_to_box(hj, box->lo[across], box->hi[across]);
                hk = detail::clip_to_box(hk, box->lo[across], box->hi[across]);
            }
            if (!detail::sandwiched(hi_val, hj, hk)) {
                return false;
            }
        }
    }
    return true;
}

struct DepthResult {
    std::vector<double> depth;        // one per input CPF, in input order
    std::vector<std::size_t> ranking; // positions sorted deepest first
};

namespace detail {

    inline std::vector<std::size_t> rank_by_depth(const std::vector<double>& depth, std::span<const CPF> cpfs)
    {
        std::vector<std::size_t> order(depth.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (depth[a] != depth[b]) {
                return depth[a] > depth[b];
            }
            if (cpfs[a].draw_index != cpfs[b].draw_index) {
                return cpfs[a].draw_index < cpfs[b].draw_index;
            }
            return a < b;
        });
        return order;
    }

    inline void check_biobjective(std::span<const CPF> cpfs, const char* who)
    {
        if (cpfs.size() < 2) {
            throw std::invalid_argument(std::string(who) + ": need N >= 2 CPFs");
        }
        for (const auto& c : cpfs) {
            for (const auto& p : c.points) {
                if (p.objective.size() != 2) {
                    throw std::invalid_argument(std::string(who) + ": only d = 2 is supported");
                }
            }
        }
    }

} // namespace detail

// Fraction of the C(N,2) bands that contain each CPF.
inline DepthResult band_depth(std::span<const CPF> cpfs, const std::optional<ObjectiveBox>& box = std::nullopt)
{
    detail::check_biobjective(cpfs, "band_depth");
    const std::size_t n = cpfs.size();
    const double pairs = static_cast<double>(n * (n - 1) / 2);
    DepthResult result;
    result.depth.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                count += band_contains(cpfs[i], cpfs[j], cpfs[k], box) ? 1 : 0;
            }
        }
        result.depth[i] = static_cast<double>(count) / pairs;
    }
    result.ranking = detail::rank_by_depth(result.depth, cpfs);
    return result;
}

// Per-row ascending ranks: min rank = 1 + #strictly smaller, max rank = #<=.
// +inf compares equal to itself and above every finite value.
inline void tie_ranks(std::span<const double> row, std::span<std::size_t> rmin, std::span<std::size_t> rmax)
{
    const std::size_t n = row.size();
    std::vector<std::pair<double, std::size_t>> sorted(n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted[k] = {row[k], k};
    }
    std::sort(sorted.begin(), sorted.end());
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && sorted[stop].first == sorted[start].first) {
            ++stop;
        }
        for (std::size_t k = start; k < stop; ++k) {
            rmin[sorted[k].second] = start + 1;
            rmax[sorted[k].second] = stop;
        }
        start = stop;
    }
}

// Modified band depth over q vertical and q horizontal cuts spanning the
// range of all CPF points, computed from per-cut ranks.
inline DepthResult modified_band_depth(std::span<const CPF> cpfs, std::size_t q = 201)
{
    detail::check_biobjective(cpfs, "modified_band_depth");
    if (q < 2) {
        throw std::invalid_argument("modified_band_depth: need q >= 2 cuts per axis");
    }
    const std::size_t n = cpfs.size();
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    bool any_point = false;
    for (const auto& c : cpfs) {
        for (const auto& p : c.points) {
            any_point = true;
            for (std::size_t a = 0; a < 2; ++a) {
                lo[a] = std::min(lo[a], p.objective[a]);
                hi[a] = std::max(hi[a], p.objective[a]);
            }
        }
    }
    if (!any_point) {
        throw std::invalid_argument("modified_band_depth: all CPFs are empty");
    }

    std::vector<Staircase> stairs;
    stairs.reserve(n);
    for (const auto& c : cpfs) {
        stairs.emplace_back(c);
    }

    const double pairs = static_cast<double>(n * (n - 1) / 2);
    const double big_n = static_cast<double>(n);
    std::vector<double> total(n, 0.0);
    std::vector<double> cuts(q);
    Matrix h(q, n);
    std::vector<std::size_t> rmin(n);
    std::vector<std::size_t> rmax(n);
    for (Axis axis : {Axis::first, Axis::second}) {
        const std::size_t a = axis == Axis::first ? 0 : 1;
        for (std::size_t i = 0; i < q; ++i) {
            cuts[i] = i + 1 == q ? hi[a] : lo[a] + (hi[a] - lo[a]) * static_cast<double>(i) / static_cast<double>(q - 1);
        }
        // One staircase at a time keeps its breakpoints in cache across cuts.
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < q; ++i) {
                h(i, j) = h_cut(stairs[j], axis, cuts[i]);
            }
        }
        for (std::size_t i = 0; i < q; ++i) {
            tie_ranks(std::span<const double>(&h(i, 0), n), rmin, rmax);
            for (std::size_t j = 0; j < n; ++j) {
                const double up = static_cast<double>(rmax[j]);
                const double down = static_cast<double>(rmin[j]);
                const double ties = up - down + 1.0;
                total[j] += (up * (big_n - down + 1.0) - ties * ties) / pairs;
            }
        }
    }
    DepthResult result;
    result.depth.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        result.depth[j] = total[j] / static_cast<double>(2 * q);
    }
    result.ranking = detail::rank_by_depth(result.depth, cpfs);
    return result;
}

// Number of CPFs kept for a depth cloud; the slack keeps 0.3 * 10 at 3.
inline std::size_t mbd_selection_count(double alpha, std::size_t n)
{
    const auto k = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n) - 1e-9));
    return std::clamp<std::size_t>(k, 1, n);
}

// Union of the ceil(alpha * N) deepest CPFs; score = depth rank (1 = deepest).
inline PFCloud pf_cloud_mbd(std::span<const CPF> cpfs, const DepthResult& depths, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("pf_cloud_mbd: alpha must lie in (0, 1)");
    }
    if (depths.ranking.size() != cpfs.size()) {
        throw std::invalid_argument("pf_cloud_mbd: depth result does not match the CPF list");
    }
    const std::size_t keep = mbd_selection_count(alpha, cpfs.size());
    PFCloud cloud;
    for (std::size_t r = 0; r < keep; ++r) {
        const CPF& c = cpfs[depths.ranking[r]];
        for (const auto& p : c.points) {
            cloud.points.push_back({p.objective, c.draw_index, p.cell_refs, static_cast<double>(r + 1)});
        }
    }
    return cloud;
}

} // namespace mobart

#endif

#ifndef MOBART_ATTAINMENT_HPP
#define MOBART_ATTAINMENT_HPP

#include "mobart/atlas.hpp"
#include "mobart/error.hpp"
#include "mobart/pareto.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace mobart {

// Conditional Pareto front of one posterior draw.
struct CPF {
    std::size_t draw_index = 0;
    std::vector<FrontPoint> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

inline CPF make_cpf(std::size_t draw_index, ParetoResult result)
{
    return {draw_index, std::move(result.front)};
}

// Smallest box containing a set of objective vectors.
struct ObjectiveBox {
    std::vector<double> lo;
    std::vector<double> hi;

    static ObjectiveBox bounding(const PointSet& points)
    {
        if (points.empty()) {
            throw std::invalid_argument("ObjectiveBox::bounding: empty point set");
        }
        ObjectiveBox b{points.front(), points.front()};
        for (const auto& p : points) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                b.lo[j] = std::min(b.lo[j], p[j]);
                b.hi[j] = std::max(b.hi[j], p[j]);
            }
        }
        return b;
    }
};

// y lies in the dominated point set closure of c: some CPF point weakly dominates y.
inline bool dpsc_contains(const CPF& c, std::span<const double> y)
{
    return std::any_of(c.points.begin(), c.points.end(),
                       [&](const FrontPoint& p) { return weakly_dominates(p.objective, y); });
}

inline std::size_t attainment_count(std::span<const CPF> cpfs, std::span<const double> y)
{
    std::size_t count = 0;
    for (const auto& c : cpfs) {
        count += dpsc_contains(c, y) ? 1 : 0;
    }
    return count;
}

// Empirical attainment function: fraction of DPSCs containing y.
inline double eaf(std::span<const CPF> cpfs, std::span<const double> y)
{
    if (cpfs.empty()) {
        throw std::invalid_argument("eaf: need at least one CPF");
    }
    return static_cast<double>(attainment_count(cpfs, y)) / static_cast<double>(cpfs.size());
}

struct CloudPoint {
    std::vector<double> objective;
    std::size_t draw_index = 0;
    std::vector<std::size_t> cell_refs;
    double score = 0.0; // eaf value (random sets) or depth rank (band depth)
};

struct PFCloud {
    std::vector<CloudPoint> points;

    [[nodiscard]] PointSet objectives() const
    {
        PointSet out;
        out.reserve(points.size());
        for (const auto& p : points) {
            out.push_back(p.objective);
        }
        return out;
    }
};

struct PSBox {
    Box box;
    std::size_t draw_index = 0;
    std::size_t cell = 0;
};

struct PSCloud {
    std::vector<PSBox> boxes;
};

// Band endpoints are inclusive; the slack absorbs rounding in 0.5 +- alpha/2.
constexpr double eaf_band_slack = 1e-12;

namespace detail {

    // Attainment counts of many two-objective query points in one sweep over
    // f1. Each CPF's running minimum f2 (over points with f1 <= the sweep
    // position) sits in a Fenwick tree indexed by f2 rank, so a query is a
    // prefix count of CPFs whose minimum is <= y2.
    inline std::vector<std::size_t> attainment_counts_2d(std::span<const CPF> cpfs,
                                                         std::span<const std::array<double, 2>> queries)
    {
        struct Event {
            double f1;
            double f2;
            std::size_t cpf;
        };
        std::vector<Event> events;
        std::vector<double> f2s;
        for (std::size_t c = 0; c < cpfs.size(); ++c) {
            for (const auto& p : cpfs[c].points) {
                events.push_back({p.objective[0], p.objective[1], c});
                f2s.push_back(p.objective[1]);
            }
        }
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.f1 < b.f1; });
        std::sort(f2s.begin(), f2s.end());
        f2s.erase(std::unique(f2s.begin(), f2s.end()), f2s.end());

        std::vector<std::size_t> tree(f2s.size() + 1, 0);
        const auto add = [&](std::size_t rank, std::ptrdiff_t delta) {
            for (std::size_t i = rank + 1; i < tree.size(); i += i & (~i + 1)) {
                tree[i] = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(tree[i]) + delta);
            }
        };
        const auto prefix = [&](std::size_t count) {
            std::size_t total = 0;
            for (std::size_t i = count; i > 0; i -= i & (~i + 1)) {
                total += tree[i];
            }
            return total;
        };

        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> current(cpfs.size(), none);
        std::vector<std::size_t> order(queries.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return queries[a][0] < queries[b][0]; });
        std::vector<std::size_t> counts(queries.size(), 0);
        std::size_t e = 0;
        for (std::size_t q : order) {
            for (; e < events.size() && events[e].f1 <= queries[q][0]; ++e) {
                const auto rank = static_cast<std::size_t>(
                    std::lower_bound(f2s.begin(), f2s.end(), events[e].f2) - f2s.begin());
                std::size_t& cur = current[events[e].cpf];
                if (cur == none || rank < cur) {
                    if (cur != none) {
                        add(cur, -1);
                    }
                    add(rank, 1);
                    cur = rank;
                }
            }
            counts[q] = prefix(static_cast<std::size_t>(
                std::upper_bound(f2s.begin(), f2s.end(), queries[q][1]) - f2s.begin()));
        }
        return counts;
    }

} // namespace detail

// Keeps every CPF point whose eaf lies in [0.5 - alpha/2, 0.5 + alpha/2].
inline PFCloud pf_cloud_rs(std::span<const CPF> cpfs, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("pf_cloud_rs: alpha must lie in (0, 1)");
    }
    const double lower = 0.5 - alpha / 2.0 - eaf_band_slack;
    const double upper = 0.5 + alpha / 2.0 + eaf_band_slack;
    const bool biobjective = std::all_of(cpfs.begin(), cpfs.end(), [](const CPF& c) {
        return std::all_of(c.points.begin(), c.points.end(), [](const FrontPoint& p) { return p.objective.size() == 2; });
    });
    std::vector<std::size_t> counts;
    if (biobjective) {
        std::vector<std::array<double, 2>> queries;
        for (const auto& c : cpfs) {
            for (const auto& p : c.points) {
                queries.push_back({p.objective[0], p.objective[1]});
            }
        }
        counts = detail::attainment_counts_2d(cpfs, queries);
    }
    PFCloud cloud;
    std::size_t next = 0;
    for (const auto& c : cpfs) {
        for (const auto& p : c.points) {
            const double value = biobjective
                                     ? static_cast<double>(counts[next++]) / static_cast<double>(cpfs.size())
                                     : eaf(cpfs, p.objective);
            if (value >= lower && value <= upper) {
                cloud.points.push_back({p.objective, c.draw_index, p.cell_refs, value});
            }
        }
    }
    return cloud;
}

// Union of the preimage boxes of all cloud points. `atlases` is indexed by draw_index.
inline PSCloud ps_cloud(const PFCloud& cloud, std::span<const ImageAtlas> atlases)
{
    PSCloud out;
    for (const auto& p : cloud.points) {
        if (p.draw_index >= atlases.size()) {
            throw IntegrityError("ps_cloud: no atlas for draw " + std::to_string(p.draw_index));
        }
        const auto& atlas = atlases[p.draw_index];
        for (std::size_t c : p.cell_refs) {
            if (c >= atlas.cells.size()) {
                throw IntegrityError("ps_cloud: cell " + std::to_string(c) + " missing from atlas of draw "
                                     + std::to_string(p.draw_index));
            }
            if (atlas.cells[c].alpha != p.objective) {
                throw IntegrityError("ps_cloud: cell " + std::to_string(c) + " of draw " + std::to_string(p.draw_index)
                                     + " does not map to the cloud point");
            }
            out.boxes.push_back({atlas.cells[c].box, p.draw_index, c});
        }
    }
    return out;
}

} // namespace mobart

#endif

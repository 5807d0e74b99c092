#ifndef MOBART_PARETO_HPP
#define MOBART_PARETO_HPP

#include "mobart/atlas.hpp"
#include "mobart/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace mobart {

// Minimization throughout.
enum class Dominance { none, weak, strict };

inline Dominance dominates(std::span<const double> v, std::span<const double> w)
{
    if (v.size() != w.size()) {
        throw std::invalid_argument("dominates: vectors differ in length");
    }
    bool some_less = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > w[i]) {
            return Dominance::none;
        }
        some_less = some_less || v[i] < w[i];
    }
    return some_less ? Dominance::strict : Dominance::weak;
}

inline bool weakly_dominates(std::span<const double> v, std::span<const double> w) noexcept
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > w[i]) {
            return false;
        }
    }
    return true;
}

inline bool strictly_dominates(std::span<const double> v, std::span<const double> w) noexcept
{
    bool some_less = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > w[i]) {
            return false;
        }
        some_less = some_less || v[i] < w[i];
    }
    return some_less;
}

namespace detail {

    constexpr std::size_t kung_leaf_size = 16;

    // `idx` is lexicographically sorted and duplicate-free, so no later vector
    // can strictly dominate an earlier one: R is final and only S is filtered.
    inline std::vector<std::size_t> kung_recurse(const PointSet& v, std::span<const std::size_t> idx)
    {
        if (idx.size() <= kung_leaf_size) {
            std::vector<std::size_t> out;
            for (std::size_t a : idx) {
                bool dominated = false;
                for (std::size_t b : out) {
                    if (strictly_dominates(v[b], v[a])) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated) {
                    out.push_back(a);
                }
            }
            return out;
        }
        const std::size_t half = idx.size() / 2;
        auto front = kung_recurse(v, idx.first(half));
        const auto rest = kung_recurse(v, idx.subspan(half));
        const std::size_t r_size = front.size();
        for (std::size_t s : rest) {
            bool dominated = false;
            for (std::size_t k = 0; k < r_size; ++k) {
                if (strictly_dominates(v[front[k]], v[s])) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                front.push_back(s);
            }
        }
        return front;
    }

    inline bool lex_less(const Point& a, const Point& b)
    {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

} // namespace detail

// Nondominated subset (Kung et al. divide and conquer). Returns indices into
// `points`, one representative (the lowest index) per distinct vector, in
// lexicographic order of the vectors.
inline std::vector<std::size_t> kung_front(const PointSet& points)
{
    if (points.empty()) {
        return {};
    }
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) {
            throw std::invalid_argument("kung_front: vectors differ in length");
        }
    }
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return detail::lex_less(points[a], points[b]); });
    auto last = std::unique(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return points[a] == points[b]; });
    idx.erase(last, idx.end());
    return detail::kung_recurse(points, idx);
}

struct FrontPoint {
    std::vector<double> objective;
    std::vector<std::size_t> cell_refs; // indices into the source atlas
};

struct ParetoResult {
    std::vector<FrontPoint> front;
    std::vector<Box> set_boxes;
};

// PF of the atlas image and the PS as the union of the preimage boxes.
inline ParetoResult pf_ps(const ImageAtlas& atlas)
{
    PointSet alphas;
    alphas.reserve(atlas.cells.size());
    for (const auto& c : atlas.cells) {
        alphas.push_back(c.alpha);
    }
    const auto front_idx = kung_front(alphas);

    std::map<Point, std::size_t> slot;
    ParetoResult result;
    for (std::size_t i : front_idx) {
        slot.emplace(alphas[i], result.front.size());
        result.front.push_back({alphas[i], {}});
    }
    for (std::size_t c = 0; c < alphas.size(); ++c) {
        if (auto it = slot.find(alphas[c]); it != slot.end()) {
            result.front[it->second].cell_refs.push_back(c);
        }
    }
    for (const auto& fp : result.front) {
        for (std::size_t c : fp.cell_refs) {
            result.set_boxes.push_back(atlas.cells[c].box);
        }
    }
    return result;
}

} // namespace mobart

#endif

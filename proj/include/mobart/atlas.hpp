#ifndef MOBART_ATLAS_HPP
#define MOBART_ATLAS_HPP

#include "mobart/box.hpp"
#include "mobart/tree.hpp"

#include <cstddef>
#include <vector>

namespace mobart {

struct ImageCell {
    std::vector<double> alpha; // raw output units
    Box box;
};

// Finite image of a multi-output ensemble: one cell per nonempty
// one-leaf-per-tree combination. Cell boxes partition the domain.
struct ImageAtlas {
    Domain domain;
    std::vector<ImageCell> cells;

    [[nodiscard]] std::size_t d() const noexcept { return cells.empty() ? 0 : cells.front().alpha.size(); }
};

struct ValueCell {
    double value; // raw output units
    Box box;
};

namespace detail {

    struct PartialCell {
        Box box;
        std::vector<double> sums; // scaled-unit leaf sums, one per output
    };

    // Pushes `cell` through `tree`, splitting its box only where a rule cuts
    // through it. Leaves that the box cannot reach are never visited.
    inline void refine(const Tree& tree, int id, PartialCell cell, std::size_t output,
                       std::vector<PartialCell>& out)
    {
        const auto& n = tree.node(id);
        if (n.is_leaf()) {
            cell.sums[output] += n.mu;
            out.push_back(std::move(cell));
            return;
        }
        const std::size_t v = n.rule.var;
        const double c = n.rule.cut;
        if (cell.box.hi(v) <= c) {
            refine(tree, n.left, std::move(cell), output, out);
        } else if (cell.box.lo(v) >= c) {
            refine(tree, n.right, std::move(cell), output, out);
        } else {
            PartialCell lower{cell.box.lower_part(v, c), cell.sums};
            PartialCell upper{cell.box.upper_part(v, c), std::move(cell.sums)};
            refine(tree, n.left, std::move(lower), output, out);
            refine(tree, n.right, std::move(upper), output, out);
        }
    }

    inline std::vector<PartialCell> fold(const std::vector<const Ensemble*>& outputs, const Domain& domain)
    {
        std::vector<PartialCell> cells{PartialCell{domain.box(), std::vector<double>(outputs.size(), 0.0)}};
        for (std::size_t j = 0; j < outputs.size(); ++j) {
            for (const auto& tree : outputs[j]->trees()) {
                std::vector<PartialCell> next;
                next.reserve(cells.size());
                for (auto& cell : cells) {
                    refine(tree, 0, std::move(cell), j, next);
                }
                cells = std::move(next);
            }
        }
        return cells;
    }

} // namespace detail

// Nonempty m-wise intersections of leaf boxes, built by folding trees in one
// at a time. Values are summed in scaled units and un-transformed once.
inline std::vector<ValueCell> ensemble_cells(const Ensemble& ens)
{
    auto cells = detail::fold({&ens}, ens.domain());
    std::vector<ValueCell> out;
    out.reserve(cells.size());
    for (auto& c : cells) {
        out.push_back({ens.transform().to_raw(c.sums[0]), std::move(c.box)});
    }
    return out;
}

// Nonempty d-wise intersections of the per-output cells. Cells with equal
// alpha but different boxes stay separate.
inline ImageAtlas multi_cells(const MultiEnsemble& me)
{
    std::vector<const Ensemble*> outputs;
    for (const auto& e : me.outputs()) {
        outputs.push_back(&e);
    }
    auto cells = detail::fold(outputs, me.domain());
    ImageAtlas atlas{me.domain(), {}};
    atlas.cells.reserve(cells.size());
    for (auto& c : cells) {
        std::vector<double> alpha(me.d());
        for (std::size_t j = 0; j < me.d(); ++j) {
            alpha[j] = me.output(j).transform().to_raw(c.sums[j]);
        }
        atlas.cells.push_back({std::move(alpha), std::move(c.box)});
    }
    return atlas;
}

// Applies a per-coordinate map to every alpha, e.g. exp() for models fitted on
// log outputs. Valid because each cell is constant.
template<typename Fn>
ImageAtlas map_alphas(ImageAtlas atlas, Fn&& fn)
{
    for (auto& cell : atlas.cells) {
        for (auto& a : cell.alpha) {
            a = fn(a);
        }
    }
    return atlas;
}

// Index of the cell containing x, or npos.
inline std::size_t locate_cell(const ImageAtlas& atlas, std::span<const double> x)
{
    for (std::size_t i = 0; i < atlas.cells.size(); ++i) {
        if (atlas.cells[i].box.contains(x)) {
            return i;
        }
    }
    return static_cast<std::size_t>(-1);
}

} // namespace mobart

#endif

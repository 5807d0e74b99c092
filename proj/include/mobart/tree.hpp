#ifndef MOBART_TREE_HPP
#define MOBART_TREE_HPP

#include "mobart/box.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mobart {

struct SplitRule {
    std::size_t var = 0; // 0-based input dimension
    double cut = 0.0;    // x goes left iff x[var] < cut

    friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

// Binary regression tree stored as a flat node array; node 0 is the root.
// Leaf values are in the ensemble's scaled output units.
class Tree {
public:
    static constexpr int npos = -1;

    struct Node {
        int parent = npos;
        int left = npos;
        int right = npos;
        SplitRule rule{};
        double mu = 0.0;

        [[nodiscard]] bool is_leaf() const noexcept { return left == npos; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    explicit Tree(double mu = 0.0) : nodes_{Node{.mu = mu}} {}

    static Tree stump(SplitRule rule, double mu_left, double mu_right)
    {
        Tree t;
        t.grow(0, rule, mu_left, mu_right);
        return t;
    }

    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    // Unchecked routing; callers validate x against the domain.
    [[nodiscard]] int find_leaf(std::span<const double> x) const noexcept
    {
        int id = 0;
        while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
            const Node& n = nodes_[static_cast<std::size_t>(id)];
            id = x[n.rule.var] < n.rule.cut ? n.left : n.right;
        }
        return id;
    }

    [[nodiscard]] double value(std::span<const double> x) const noexcept
    {
        return nodes_[static_cast<std::size_t>(find_leaf(x))].mu;
    }

    [[nodiscard]] std::size_t depth(int id) const
    {
        std::size_t d = 0;
        for (int p = node(id).parent; p != npos; p = node(p).parent) {
            ++d;
        }
        return d;
    }

    [[nodiscard]] std::vector<int> leaves() const
    {
        std::vector<int> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].is_leaf()) {
                out.push_back(static_cast<int>(i));
            }
        }
        return out;
    }

    // Internal nodes whose two children are both leaves.
    [[nodiscard]] std::vector<int> nogs() const
    {
        std::vector<int> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node& n = nodes_[i];
            if (!n.is_leaf() && node(n.left).is_leaf() && node(n.right).is_leaf()) {
                out.push_back(static_cast<int>(i));
            }
        }
        return out;
    }

    [[nodiscard]] std::size_t leaf_count() const
    {
        std::size_t c = 0;
        for (const auto& n : nodes_) {
            c += n.is_leaf() ? 1 : 0;
        }
        return c;
    }

    [[nodiscard]] std::size_t max_depth() const
    {
        std::size_t d = 0;
        for (int id : leaves()) {
            d = std::max(d, depth(id));
        }
        return d;
    }

    // Turns a leaf into an internal node with two fresh leaves; returns (left, right).
    std::pair<int, int> grow(int leaf, SplitRule rule, double mu_left, double mu_right)
    {
        if (!node(leaf).is_leaf()) {
            throw std::invalid_argument("Tree::grow: node is not a leaf");
        }
        const int l = static_cast<int>(nodes_.size());
        const int r = l + 1;
        nodes_.push_back(Node{.parent = leaf, .mu = mu_left});
        nodes_.push_back(Node{.parent = leaf, .mu = mu_right});
        Node& n = nodes_[static_cast<std::size_t>(leaf)];
        n.left = l;
        n.right = r;
        n.rule = rule;
        return {l, r};
    }

    // Collapses a node whose children are both leaves back into a leaf.
    // Node ids are renumbered (preorder) afterwards.
    void prune(int nog, double mu)
    {
        const Node& n = node(nog);
        if (n.is_leaf() || !node(n.left).is_leaf() || !node(n.right).is_leaf()) {
            throw std::invalid_argument("Tree::prune: node must have two leaf children");
        }
        nodes_[static_cast<std::size_t>(nog)].left = npos;
        nodes_[static_cast<std::size_t>(nog)].right = npos;
        nodes_[static_cast<std::size_t>(nog)].rule = {};
        nodes_[static_cast<std::size_t>(nog)].mu = mu;
        compact();
    }

    void set_mu(int leaf, double mu)
    {
        if (!node(leaf).is_leaf()) {
            throw std::invalid_argument("Tree::set_mu: node is not a leaf");
        }
        nodes_[static_cast<std::size_t>(leaf)].mu = mu;
    }

    // Structural equality up to node numbering (preorder comparison).
    [[nodiscard]] bool same_structure(const Tree& other) const
    {
        return same_from(0, other, 0, false);
    }
    friend bool operator==(const Tree& a, const Tree& b) { return a.same_from(0, b, 0, true); }

private:
    [[nodiscard]] bool same_from(int a, const Tree& other, int b, bool compare_mu) const
    {
        const Node& x = node(a);
        const Node& y = other.node(b);
        if (x.is_leaf() != y.is_leaf()) {
            return false;
        }
        if (x.is_leaf()) {
            return !compare_mu || x.mu == y.mu;
        }
        return x.rule == y.rule && same_from(x.left, other, y.left, compare_mu)
               && same_from(x.right, other, y.right, compare_mu);
    }

    void compact()
    {
        std::vector<Node> out;
        out.reserve(nodes_.size());
        copy_preorder(0, Tree::npos, out);
        nodes_ = std::move(out);
    }

    int copy_preorder(int id, int parent, std::vector<Node>& out) const
    {
        const Node& n = node(id);
        const int me = static_cast<int>(out.size());
        out.push_back(Node{.parent = parent, .rule = n.rule, .mu = n.mu});
        if (!n.is_leaf()) {
            const int l = copy_preorder(n.left, me, out);
            const int r = copy_preorder(n.right, me, out);
            out[static_cast<std::size_t>(me)].left = l;
            out[static_cast<std::size_t>(me)].right = r;
        }
        return me;
    }

    std::vector<Node> nodes_;
};

// Box of every node, computed top-down from the domain.
inline std::vector<Box> node_boxes(const Tree& tree, const Domain& domain)
{
    std::vector<Box> boxes(tree.size());
    boxes[0] = domain.box();
    // parents always precede children in both grow() order and preorder
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& n = tree.nodes()[i];
        if (!n.is_leaf()) {
            boxes[static_cast<std::size_t>(n.left)] = boxes[i].lower_part(n.rule.var, n.rule.cut);
            boxes[static_cast<std::size_t>(n.right)] = boxes[i].upper_part(n.rule.var, n.rule.cut);
        }
    }
    return boxes;
}

// Rejects split variables out of range and cuts not strictly inside the node's box.
inline void validate_tree(const Tree& tree, const Domain& domain)
{
    const auto boxes = node_boxes(tree, domain);
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& n = tree.nodes()[i];
        if (!std::isfinite(n.mu)) {
            throw std::invalid_argument("tree: non-finite leaf value");
        }
        if (n.is_leaf()) {
            continue;
        }
        if (n.rule.var >= domain.dim()) {
            throw std::invalid_argument("tree: split variable " + std::to_string(n.rule.var) + " out of range");
        }
        const Box& b = boxes[i];
        if (!(b.lo(n.rule.var) < n.rule.cut && n.rule.cut < b.hi(n.rule.var))) {
            throw std::invalid_argument("tree: degenerate split at cut " + std::to_string(n.rule.cut)
                                        + " (must lie strictly inside the node box)");
        }
    }
}

inline double eval_tree(const Tree& tree, const Domain& domain, std::span<const double> x)
{
    domain.check(x);
    return tree.value(x);
}

struct LeafRegion {
    Box box;
    double mu;
};

// Leaf boxes in preorder; they partition the domain.
inline std::vector<LeafRegion> tree_leaf_regions(const Tree& tree, const Domain& domain)
{
    const auto boxes = node_boxes(tree, domain);
    std::vector<LeafRegion> out;
    for (int id : tree.leaves()) {
        out.push_back({boxes[static_cast<std::size_t>(id)], tree.node(id).mu});
    }
    return out;
}

// Affine map between raw outputs and the [-0.5, 0.5] training scale.
struct OutputTransform {
    double center = 0.0;
    double scale = 1.0;

    [[nodiscard]] double to_raw(double scaled) const noexcept { return center + scale * scaled; }
    [[nodiscard]] double to_scaled(double raw) const noexcept { return (raw - center) / scale; }

    friend bool operator==(const OutputTransform&, const OutputTransform&) = default;
};

enum class Units { raw, scaled };

// Sum of m trees over a shared domain.
class Ensemble {
public:
    Ensemble() = default;
    Ensemble(Domain domain, std::vector<Tree> trees, OutputTransform transform = {})
        : domain_(std::move(domain)), trees_(std::move(trees)), transform_(transform)
    {
        if (trees_.empty()) {
            throw std::invalid_argument("Ensemble: need at least one tree");
        }
        if (!(transform_.scale > 0.0) || !std::isfinite(transform_.center)) {
            throw std::invalid_argument("Ensemble: output transform needs finite center and positive scale");
        }
        for (const auto& t : trees_) {
            validate_tree(t, domain_);
        }
    }

    [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
    [[nodiscard]] const std::vector<Tree>& trees() const noexcept { return trees_; }
    [[nodiscard]] const OutputTransform& transform() const noexcept { return transform_; }
    [[nodiscard]] std::size_t size() const noexcept { return trees_.size(); }

    [[nodiscard]] double eval_unchecked(std::span<const double> x, Units units = Units::raw) const noexcept
    {
        double s = 0.0;
        for (const auto& t : trees_) {
            s += t.value(x);
        }
        return units == Units::raw ? transform_.to_raw(s) : s;
    }

    friend bool operator==(const Ensemble&, const Ensemble&) = default;

private:
    Domain domain_;
    std::vector<Tree> trees_;
    OutputTransform transform_;
};

inline double eval_ensemble(const Ensemble& ens, std::span<const double> x, Units units = Units::raw)
{
    ens.domain().check(x);
    return ens.eval_unchecked(x, units);
}

// d single-output ensembles over one domain.
class MultiEnsemble {
public:
    MultiEnsemble() = default;
    explicit MultiEnsemble(std::vector<Ensemble> outputs) : outputs_(std::move(outputs))
    {
        if (outputs_.size() < 2) {
            throw std::invalid_argument("MultiEnsemble: need d >= 2 outputs");
        }
        for (const auto& e : outputs_) {
            if (!(e.domain() == outputs_.front().domain())) {
                throw std::invalid_argument("MultiEnsemble: outputs must share one domain");
            }
        }
    }

    [[nodiscard]] const std::vector<Ensemble>& outputs() const noexcept { return outputs_; }
    [[nodiscard]] const Ensemble& output(std::size_t j) const { return outputs_.at(j); }
    [[nodiscard]] std::size_t d() const noexcept { return outputs_.size(); }
    [[nodiscard]] const Domain& domain() const { return outputs_.front().domain(); }

    friend bool operator==(const MultiEnsemble&, const MultiEnsemble&) = default;

private:
    std::vector<Ensemble> outputs_;
};

inline std::vector<double> eval_multi(const MultiEnsemble& me, std::span<const double> x)
{
    me.domain().check(x);
    std::vector<double> out(me.d());
    for (std::size_t j = 0; j < me.d(); ++j) {
        out[j] = me.output(j).eval_unchecked(x);
    }
    return out;
}

} // namespace mobart

#endif

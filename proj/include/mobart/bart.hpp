#ifndef MOBART_BART_HPP
#define MOBART_BART_HPP

#include "mobart/error.hpp"
#include "mobart/matrix.hpp"
#include "mobart/parallel.hpp"
#include "mobart/random.hpp"
#include "mobart/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mobart {

struct BartConfig {
    std::size_t m = 30;
    double kappa = 1.0;
    double nu = 3.0;
    double lambda = 0.01 * 0.01;
    std::size_t n_cutpoints = 30;
    std::size_t min_leaf_obs = 10;
    double tree_prior_alpha = 0.95;
    double tree_prior_beta = 2.0;
    std::size_t n_burn = 1000;
    std::size_t n_draws = 500;
    std::uint64_t seed = 1;

    // Leaf prior variance: m * sigma_mu^2 = 1 / (4 kappa^2).
    [[nodiscard]] double sigma_mu2() const noexcept
    {
        return 1.0 / (4.0 * kappa * kappa * static_cast<double>(m));
    }

    void validate() const
    {
        detail::require(m >= 1, "BartConfig: m must be >= 1");
        detail::require(kappa > 0.0, "BartConfig: kappa must be > 0");
        detail::require(nu > 0.0 && lambda > 0.0, "BartConfig: nu and lambda must be > 0");
        detail::require(n_cutpoints >= 2, "BartConfig: need at least 2 cutpoints");
        detail::require(min_leaf_obs >= 1, "BartConfig: min_leaf_obs must be >= 1");
        detail::require(tree_prior_alpha > 0.0 && tree_prior_alpha < 1.0, "BartConfig: tree_prior_alpha must lie in (0,1)");
        detail::require(tree_prior_beta >= 0.0, "BartConfig: tree_prior_beta must be >= 0");
        detail::require(n_draws >= 1, "BartConfig: n_draws must be >= 1");
    }
};

struct Dataset {
    Domain domain;
    Matrix inputs;  // n x p
    Matrix outputs; // n x d

    [[nodiscard]] std::size_t n() const noexcept { return inputs.rows(); }
    [[nodiscard]] std::size_t p() const noexcept { return inputs.cols(); }
    [[nodiscard]] std::size_t d() const noexcept { return outputs.cols(); }

    void validate(const BartConfig& cfg) const
    {
        detail::require(inputs.rows() == outputs.rows(), "Dataset: inputs and outputs differ in row count");
        detail::require(p() == domain.dim(), "Dataset: input width does not match the domain");
        detail::require(n() >= 2 * cfg.min_leaf_obs,
                        "Dataset: need n >= 2 * min_leaf_obs (n = " + std::to_string(n()) + ")");
        for (std::size_t i = 0; i < n(); ++i) {
            if (!domain.contains(inputs.row(i))) {
                throw std::domain_error("Dataset: input row " + std::to_string(i) + " lies outside the domain");
            }
            for (double y : outputs.row(i)) {
                detail::require(std::isfinite(y), "Dataset: non-finite output in row " + std::to_string(i));
            }
        }
    }
};

// Bounding box of the observed inputs, for data without a declared domain.
inline Domain observed_domain(const Matrix& inputs)
{
    std::vector<double> lo(inputs.cols(), std::numeric_limits<double>::infinity());
    std::vector<double> hi(inputs.cols(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        for (std::size_t j = 0; j < inputs.cols(); ++j) {
            lo[j] = std::min(lo[j], inputs(i, j));
            hi[j] = std::max(hi[j], inputs(i, j));
        }
    }
    return {lo, hi};
}

struct PosteriorDraw {
    std::size_t draw_index = 0;
    MultiEnsemble me;
    std::vector<double> sigma2; // raw units, one per output
};

struct ScaledColumn {
    std::vector<double> values;
    OutputTransform transform;
};

// Maps the observed minimum to -0.5 and the maximum to +0.5.
inline ScaledColumn scale_outputs(std::span<const double> y)
{
    if (y.empty()) {
        throw DegenerateDataError("scale_outputs: empty column");
    }
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (!std::isfinite(*lo) || !std::isfinite(*hi) || !(*hi > *lo)) {
        throw DegenerateDataError("scale_outputs: column is constant or non-finite");
    }
    const OutputTransform t{0.5 * (*lo + *hi), *hi - *lo};
    ScaledColumn out{std::vector<double>(y.size()), t};
    for (std::size_t i = 0; i < y.size(); ++i) {
        out.values[i] = t.to_scaled(y[i]);
    }
    return out;
}

// Residual sufficient statistics of one leaf.
struct LeafStats {
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double r) noexcept
    {
        ++count;
        sum += r;
        sum_sq += r * r;
    }
};

// log of prod_leaves ∫ N(r | mu 1, sigma2 I) N(mu | 0, sigma_mu2) dmu.
inline double log_marginal_leaf(std::span<const LeafStats> leaves, double sigma2, double sigma_mu2)
{
    double total = 0.0;
    for (const auto& s : leaves) {
        if (s.count == 0) {
            continue;
        }
        const double k = static_cast<double>(s.count);
        total += -0.5 * k * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * std::log1p(k * sigma_mu2 / sigma2)
                 - s.sum_sq / (2.0 * sigma2) + sigma_mu2 * s.sum * s.sum / (2.0 * sigma2 * (sigma2 + k * sigma_mu2));
    }
    return total;
}

inline double log_marginal_leaf(const LeafStats& leaf, double sigma2, double sigma_mu2)
{
    return log_marginal_leaf(std::span<const LeafStats>(&leaf, 1), sigma2, sigma_mu2);
}

// Per-variable grid of equally spaced interior cutpoints over the observed range.
class CutGrid {
public:
    CutGrid() = default;
    CutGrid(const Matrix& inputs, std::size_t n_cuts) : cuts_(inputs.cols())
    {
        for (std::size_t v = 0; v < inputs.cols(); ++v) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = 0; i < inputs.rows(); ++i) {
                lo = std::min(lo, inputs(i, v));
                hi = std::max(hi, inputs(i, v));
            }
            if (!(hi > lo)) {
                continue; // constant input: never split on it
            }
            const double step = (hi - lo) / static_cast<double>(n_cuts + 1);
            for (std::size_t k = 0; k < n_cuts; ++k) {
                cuts_[v].push_back(lo + static_cast<double>(k + 1) * step);
            }
        }
    }

    [[nodiscard]] std::size_t p() const noexcept { return cuts_.size(); }
    [[nodiscard]] const std::vector<double>& cuts(std::size_t v) const { return cuts_.at(v); }

    // Number of cuts <= x; x < cuts[c] iff bin(x) <= c.
    [[nodiscard]] std::size_t bin(std::size_t v, double x) const
    {
        const auto& c = cuts_[v];
        return static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), x) - c.begin());
    }

private:
    std::vector<std::vector<double>> cuts_;
};

// Fixed per-fit state shared by every tree move: design, cut grid, binning.
class SamplerContext {
public:
    SamplerContext(Domain domain, const Matrix& inputs, const BartConfig& cfg)
        : domain_(std::move(domain)), inputs_(&inputs), cfg_(cfg), grid_(inputs, cfg.n_cutpoints),
          bins_(inputs.rows() * inputs.cols())
    {
        cfg_.validate();
        for (std::size_t i = 0; i < inputs.rows(); ++i) {
            for (std::size_t v = 0; v < inputs.cols(); ++v) {
                bins_[i * inputs.cols() + v] = static_cast<std::uint32_t>(grid_.bin(v, inputs(i, v)));
            }
        }
    }

    [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
    [[nodiscard]] const Matrix& inputs() const noexcept { return *inputs_; }
    [[nodiscard]] const BartConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const CutGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t n() const noexcept { return inputs_->rows(); }
    [[nodiscard]] std::size_t p() const noexcept { return inputs_->cols(); }
    [[nodiscard]] std::size_t bin(std::size_t i, std::size_t v) const noexcept { return bins_[i * p() + v]; }

    // Prior probability that a node at `depth` splits, given it can.
    [[nodiscard]] double split_probability(std::size_t depth) const noexcept
    {
        return cfg_.tree_prior_alpha / std::pow(1.0 + static_cast<double>(depth), cfg_.tree_prior_beta);
    }

private:
    Domain domain_;
    const Matrix* inputs_;
    BartConfig cfg_;
    CutGrid grid_;
    std::vector<std::uint32_t> bins_;
};

// Cut indices [first, last] per variable that fall strictly inside a node box.
struct CutRange {
    std::size_t first = 0;
    std::size_t last = 0; // exclusive
};

inline std::vector<CutRange> node_cut_ranges(const SamplerContext& ctx, const Box& box)
{
    std::vector<CutRange> out(ctx.p());
    for (std::size_t v = 0; v < ctx.p(); ++v) {
        const auto& c = ctx.grid().cuts(v);
        out[v].first = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), box.lo(v)) - c.begin());
        out[v].last = static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), box.hi(v)) - c.begin());
    }
    return out;
}

// Split rules available at a node: cut strictly inside the node box and at
// least min_leaf_obs observations on each side.
struct RuleSet {
    std::vector<std::size_t> vars;
    std::vector<std::vector<std::size_t>> cuts; // parallel to vars

    [[nodiscard]] bool empty() const noexcept { return vars.empty(); }
};

inline RuleSet valid_rules(const SamplerContext& ctx, std::span<const std::size_t> obs, std::span<const CutRange> ranges)
{
    RuleSet rules;
    const std::size_t min_leaf = ctx.config().min_leaf_obs;
    const std::size_t k = obs.size();
    if (k < 2 * min_leaf) {
        return rules;
    }
    std::vector<std::size_t> hist;
    for (std::size_t v = 0; v < ctx.p(); ++v) {
        const CutRange r = ranges[v];
        if (r.first >= r.last) {
            continue;
        }
        hist.assign(ctx.grid().cuts(v).size() + 1, 0);
        for (std::size_t i : obs) {
            ++hist[ctx.bin(i, v)];
        }
        std::size_t left = 0;
        for (std::size_t b = 0; b < r.first; ++b) {
            left += hist[b];
        }
        std::vector<std::size_t> ok;
        for (std::size_t c = r.first; c < r.last; ++c) {
            left += hist[c];
            if (left >= min_leaf && k - left >= min_leaf) {
                ok.push_back(c);
            }
        }
        if (!ok.empty()) {
            rules.vars.push_back(v);
            rules.cuts.push_back(std::move(ok));
        }
    }
    return rules;
}

enum class Likelihood {
    conjugate, // leaf means integrated out against the residuals
    flat       // prior only; used to check the sampler against the tree prior
};

namespace detail {

    struct TreeState {
        std::vector<Box> boxes;
        std::vector<std::vector<std::size_t>> obs; // per node id; filled for leaves
        std::vector<int> leaves;
        std::vector<int> nogs;
    };

    inline TreeState analyze(const Tree& tree, const SamplerContext& ctx)
    {
        TreeState s;
        s.boxes = node_boxes(tree, ctx.domain());
        s.obs.resize(tree.size());
        for (std::size_t i = 0; i < ctx.n(); ++i) {
            s.obs[static_cast<std::size_t>(tree.find_leaf(ctx.inputs().row(i)))].push_back(i);
        }
        s.leaves = tree.leaves();
        s.nogs = tree.nogs();
        return s;
    }

    inline LeafStats stats_of(std::span<const std::size_t> obs, std::span<const double> residuals)
    {
        LeafStats s;
        for (std::size_t i : obs) {
            s.add(residuals[i]);
        }
        return s;
    }

    inline bool sibling_is_leaf(const Tree& tree, int id)
    {
        const int parent = tree.node(id).parent;
        if (parent == Tree::npos) {
            return false;
        }
        const auto& p = tree.node(parent);
        const int sibling = p.left == id ? p.right : p.left;
        return tree.node(sibling).is_leaf();
    }

} // namespace detail

// One Metropolis-Hastings birth-or-death proposal on a single tree's topology
// with its leaf means integrated out. Birth and death are each proposed with
// probability 1/2 when both are possible; births draw a growable leaf, then a
// variable, then a cut, uniformly from the valid rules, matching the prior's
// rule distribution so that term cancels in the ratio.
inline Tree mh_tree_step(const Tree& tree, const SamplerContext& ctx, std::span<const double> residuals, double sigma2,
                         Rng& rng, Likelihood mode = Likelihood::conjugate)
{
    const double tau2 = ctx.config().sigma_mu2();
    const auto st = detail::analyze(tree, ctx);

    std::vector<RuleSet> leaf_rules(tree.size());
    std::vector<int> growable;
    for (int id : st.leaves) {
        const auto u = static_cast<std::size_t>(id);
        leaf_rules[u] = valid_rules(ctx, st.obs[u], node_cut_ranges(ctx, st.boxes[u]));
        if (!leaf_rules[u].empty()) {
            growable.push_back(id);
        }
    }
    if (growable.empty() && st.nogs.empty()) {
        return tree;
    }
    const double p_birth_x = growable.empty() ? 0.0 : (st.nogs.empty() ? 1.0 : 0.5);
    const auto marginal = [&](const LeafStats& s) {
        return mode == Likelihood::conjugate ? log_marginal_leaf(s, sigma2, tau2) : 0.0;
    };

    if (uniform01(rng) < p_birth_x) {
        const int eta = growable[uniform_index(rng, growable.size())];
        const auto ue = static_cast<std::size_t>(eta);
        const RuleSet& rules = leaf_rules[ue];
        const std::size_t vi = uniform_index(rng, rules.vars.size());
        const std::size_t var = rules.vars[vi];
        const std::size_t cut_index = rules.cuts[vi][uniform_index(rng, rules.cuts[vi].size())];
        const double cut = ctx.grid().cuts(var)[cut_index];

        std::vector<std::size_t> left_obs;
        std::vector<std::size_t> right_obs;
        for (std::size_t i : st.obs[ue]) {
            (ctx.bin(i, var) <= cut_index ? left_obs : right_obs).push_back(i);
        }
        if (left_obs.size() < ctx.config().min_leaf_obs || right_obs.size() < ctx.config().min_leaf_obs) {
            return tree;
        }
        const Box left_box = st.boxes[ue].lower_part(var, cut);
        const Box right_box = st.boxes[ue].upper_part(var, cut);
        const bool left_growable = !valid_rules(ctx, left_obs, node_cut_ranges(ctx, left_box)).empty();
        const bool right_growable = !valid_rules(ctx, right_obs, node_cut_ranges(ctx, right_box)).empty();

        const std::size_t depth = tree.depth(eta);
        const double pg_eta = ctx.split_probability(depth);
        const double pg_child = ctx.split_probability(depth + 1);
        const double pg_left = left_growable ? pg_child : 0.0;
        const double pg_right = right_growable ? pg_child : 0.0;

        const std::size_t growable_y = growable.size() - 1 + (left_growable ? 1 : 0) + (right_growable ? 1 : 0);
        const std::size_t nogs_y = st.nogs.size() + 1 - (detail::sibling_is_leaf(tree, eta) ? 1 : 0);
        const double p_death_y = growable_y == 0 ? 1.0 : 0.5;

        const double log_lik = marginal(detail::stats_of(left_obs, residuals))
                               + marginal(detail::stats_of(right_obs, residuals))
                               - marginal(detail::stats_of(st.obs[ue], residuals));
        const double log_ratio = log_lik + std::log(pg_eta) + std::log1p(-pg_left) + std::log1p(-pg_right)
                                 - std::log1p(-pg_eta) + std::log(p_death_y) - std::log(static_cast<double>(nogs_y))
                                 - std::log(p_birth_x) + std::log(static_cast<double>(growable.size()));
        if (std::log(uniform01(rng)) < log_ratio) {
            Tree out = tree;
            const double mu = tree.node(eta).mu;
            out.grow(eta, {var, cut}, mu, mu);
            return out;
        }
        return tree;
    }

    const int eta = st.nogs[uniform_index(rng, st.nogs.size())];
    const auto& node = tree.node(eta);
    const auto ul = static_cast<std::size_t>(node.left);
    const auto ur = static_cast<std::size_t>(node.right);
    std::vector<std::size_t> merged = st.obs[ul];
    merged.insert(merged.end(), st.obs[ur].begin(), st.obs[ur].end());
    const auto ue = static_cast<std::size_t>(eta);
    const bool eta_growable = !valid_rules(ctx, merged, node_cut_ranges(ctx, st.boxes[ue])).empty();
    if (!eta_growable) {
        return tree; // the reverse birth would be impossible
    }
    const bool left_growable = !leaf_rules[ul].empty();
    const bool right_growable = !leaf_rules[ur].empty();

    const std::size_t depth = tree.depth(eta);
    const double pg_eta = ctx.split_probability(depth);
    const double pg_child = ctx.split_probability(depth + 1);
    const double pg_left = left_growable ? pg_child : 0.0;
    const double pg_right = right_growable ? pg_child : 0.0;

    const std::size_t growable_y = growable.size() - (left_growable ? 1 : 0) - (right_growable ? 1 : 0) + 1;
    const std::size_t nogs_y = st.nogs.size() - 1 + (detail::sibling_is_leaf(tree, eta) ? 1 : 0);
    const double p_birth_y = nogs_y == 0 ? 1.0 : 0.5;
    const double p_death_x = 1.0 - p_birth_x;

    const double log_lik = marginal(detail::stats_of(merged, residuals))
                           - marginal(detail::stats_of(st.obs[ul], residuals))
                           - marginal(detail::stats_of(st.obs[ur], residuals));
    const double log_ratio = log_lik + std::log1p(-pg_eta) - std::log(pg_eta) - std::log1p(-pg_left)
                             - std::log1p(-pg_right) + std::log(p_birth_y) - std::log(static_cast<double>(growable_y))
                             - std::log(p_death_x) + std::log(static_cast<double>(st.nogs.size()));
    if (std::log(uniform01(rng)) < log_ratio) {
        Tree out = tree;
        const double nl = static_cast<double>(st.obs[ul].size());
        const double nr = static_cast<double>(st.obs[ur].size());
        const double mu = nl + nr > 0 ? (nl * tree.node(node.left).mu + nr * tree.node(node.right).mu) / (nl + nr)
                                      : 0.5 * (tree.node(node.left).mu + tree.node(node.right).mu);
        out.prune(eta, mu);
        return out;
    }
    return tree;
}

// Draws every leaf mean from its conjugate normal full conditional
// N(s/sigma2 / prec, 1/prec) with prec = k/sigma2 + 1/sigma_mu2.
inline Tree sample_leaf_means(const Tree& tree, const Matrix& inputs, std::span<const double> residuals, double sigma2,
                              double sigma_mu2, Rng& rng)
{
    std::vector<LeafStats> stats(tree.size());
    for (std::size_t i = 0; i < inputs.rows(); ++i) {
        stats[static_cast<std::size_t>(tree.find_leaf(inputs.row(i)))].add(residuals[i]);
    }
    Tree out = tree;
    for (int id : tree.leaves()) {
        const auto& s = stats[static_cast<std::size_t>(id)];
        const double precision = static_cast<double>(s.count) / sigma2 + 1.0 / sigma_mu2;
        const double mean = (s.sum / sigma2) / precision;
        out.set_mu(id, mean + standard_normal(rng) / std::sqrt(precision));
    }
    return out;
}

// sigma2 ~ Scale-inv-chi2(nu + n, (nu lambda + sum r^2) / (nu + n)).
inline double sample_sigma2(std::span<const double> residuals, double nu, double lambda, Rng& rng)
{
    double ss = 0.0;
    for (double r : residuals) {
        ss += r * r;
    }
    const double dof = nu + static_cast<double>(residuals.size());
    const double chi2 = std::chi_squared_distribution<double>(dof)(rng);
    return (nu * lambda + ss) / chi2;
}

struct BartDraw {
    Ensemble ensemble;
    double sigma2 = 0.0; // raw units
};

// Single-output BART: n_burn + n_draws Gibbs sweeps, keeping the last n_draws.
inline std::vector<BartDraw> fit_bart(const Domain& domain, const Matrix& inputs, std::span<const double> y,
                                      const BartConfig& cfg, Rng& rng)
{
    cfg.validate();
    detail::require(inputs.rows() == y.size(), "fit_bart: inputs and outputs differ in length");
    detail::require(inputs.rows() >= 2 * cfg.min_leaf_obs, "fit_bart: need n >= 2 * min_leaf_obs");
    const ScaledColumn scaled = scale_outputs(y);
    const SamplerContext ctx(domain, inputs, cfg);
    const std::size_t n = inputs.rows();
    const std::size_t m = cfg.m;
    const double tau2 = cfg.sigma_mu2();

    double mean = 0.0;
    for (double v : scaled.values) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    std::vector<Tree> trees(m, Tree(mean / static_cast<double>(m)));
    std::vector<std::vector<double>> fits(m, std::vector<double>(n, mean / static_cast<double>(m)));
    std::vector<double> total(n, mean);
    double variance = 0.0;
    for (double v : scaled.values) {
        variance += (v - mean) * (v - mean);
    }
    double sigma2 = std::max(variance / static_cast<double>(n), cfg.lambda);

    std::vector<BartDraw> draws;
    draws.reserve(cfg.n_draws);
    std::vector<double> residual(n);
    const double scale2 = scaled.transform.scale * scaled.transform.scale;
    for (std::size_t sweep = 0; sweep < cfg.n_burn + cfg.n_draws; ++sweep) {
        for (std::size_t t = 0; t < m; ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                residual[i] = scaled.values[i] - (total[i] - fits[t][i]);
            }
            trees[t] = mh_tree_step(trees[t], ctx, residual, sigma2, rng);
            trees[t] = sample_leaf_means(trees[t], inputs, residual, sigma2, tau2, rng);
            for (std::size_t i = 0; i < n; ++i) {
                const double f = trees[t].value(inputs.row(i));
                total[i] += f - fits[t][i];
                fits[t][i] = f;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = scaled.values[i] - total[i];
        }
        sigma2 = sample_sigma2(residual, cfg.nu, cfg.lambda, rng);
        if (sweep >= cfg.n_burn) {
            draws.push_back({Ensemble(domain, trees, scaled.transform), sigma2 * scale2});
        }
    }
    return draws;
}

// d independent single-output fits; output j uses its own stream seeded by
// output_seeds[j]. Draw i combines the i-th ensemble of every output.
inline std::vector<PosteriorDraw> fit_multi_bart(const Dataset& data, const BartConfig& cfg,
                                                 std::span<const std::uint64_t> output_seeds, std::size_t threads = 0)
{
    cfg.validate();
    data.validate(cfg);
    detail::require(data.d() >= 2, "fit_multi_bart: need d >= 2 outputs");
    detail::require(output_seeds.size() == data.d(), "fit_multi_bart: need one seed per output");
    std::vector<std::vector<BartDraw>> per_output(data.d());
    parallel_for(
        data.d(),
        [&](std::size_t j) {
            Rng rng(output_seeds[j]);
            const auto column = data.outputs.column(j);
            per_output[j] = fit_bart(data.domain, data.inputs, column, cfg, rng);
        },
        threads);
    std::vector<PosteriorDraw> draws;
    draws.reserve(cfg.n_draws);
    for (std::size_t i = 0; i < cfg.n_draws; ++i) {
        std::vector<Ensemble> outputs;
        std::vector<double> sigma2;
        for (std::size_t j = 0; j < data.d(); ++j) {
            outputs.push_back(std::move(per_output[j][i].ensemble));
            sigma2.push_back(per_output[j][i].sigma2);
        }
        draws.push_back({i, MultiEnsemble(std::move(outputs)), std::move(sigma2)});
    }
    return draws;
}

// Per-output seeds derived from cfg.seed and the output position.
inline std::vector<PosteriorDraw> fit_multi_bart(const Dataset& data, const BartConfig& cfg, std::size_t threads = 0)
{
    std::vector<std::uint64_t> seeds(data.d());
    for (std::size_t j = 0; j < seeds.size(); ++j) {
        seeds[j] = derive_seed(cfg.seed, j, 0xB417);
    }
    return fit_multi_bart(data, cfg, seeds, threads);
}

} // namespace mobart

#endif

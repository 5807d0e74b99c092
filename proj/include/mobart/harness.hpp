#ifndef MOBART_HARNESS_HPP
#define MOBART_HARNESS_HPP

#include "mobart/atlas.hpp"
#include "mobart/attainment.hpp"
#include "mobart/band_depth.hpp"
#include "mobart/bart.hpp"
#include "mobart/benchmarks.hpp"
#include "mobart/matrix.hpp"
#include "mobart/metrics.hpp"
#include "mobart/parallel.hpp"
#include "mobart/pareto.hpp"
#include "mobart/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <concepts>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mobart {

// One point per stratum on every axis, jittered inside its cell.
inline Matrix random_lhs(std::size_t n, std::size_t p, Rng& rng)
{
    detail::require(n >= 1 && p >= 1, "random_lhs: need n >= 1 and p >= 1");
    Matrix x(n, p);
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < p; ++j) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double v = (static_cast<double>(perm[i]) + uniform01(rng)) / static_cast<double>(n);
            x(i, j) = std::min(v, std::nextafter((static_cast<double>(perm[i]) + 1.0) / static_cast<double>(n), 0.0));
        }
    }
    return x;
}

namespace detail {

    inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept
    {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            s += (a[k] - b[k]) * (a[k] - b[k]);
        }
        return s;
    }

    inline double min_pairwise(const Matrix& x)
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < x.rows(); ++a) {
            for (std::size_t b = a + 1; b < x.rows(); ++b) {
                best = std::min(best, squared_distance(x.row(a), x.row(b)));
            }
        }
        return best;
    }

    // Swap hill-climbing on the minimum pairwise distance. Swapping one
    // coordinate between two rows keeps the design a Latin hypercube.
    class MaximinClimber {
    public:
        explicit MaximinClimber(Matrix x) : x_(std::move(x)), n_(x_.rows()), d_(n_ * n_), row_min_(n_)
        {
            for (std::size_t a = 0; a < n_; ++a) {
                for (std::size_t b = 0; b < n_; ++b) {
                    d_[a * n_ + b] = a == b ? std::numeric_limits<double>::infinity()
                                            : squared_distance(x_.row(a), x_.row(b));
                }
            }
            for (std::size_t a = 0; a < n_; ++a) {
                rescan(a);
            }
        }

        [[nodiscard]] double min_distance() const
        {
            return *std::min_element(row_min_.begin(), row_min_.end());
        }

        [[nodiscard]] const Matrix& design() const noexcept { return x_; }

        // Keeps the swap when the minimum distance does not shrink.
        bool try_swap(std::size_t j, std::size_t a, std::size_t b)
        {
            const double current = min_distance();
            std::swap(x_(a, j), x_(b, j));
            new_a_.resize(n_);
            new_b_.resize(n_);
            double touched = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n_; ++k) {
                new_a_[k] = k == a ? std::numeric_limits<double>::infinity() : squared_distance(x_.row(a), x_.row(k));
                new_b_[k] = k == b ? std::numeric_limits<double>::infinity() : squared_distance(x_.row(b), x_.row(k));
                touched = std::min({touched, new_a_[k], new_b_[k]});
            }
            if (touched < current) {
                std::swap(x_(a, j), x_(b, j));
                return false;
            }
            for (std::size_t k = 0; k < n_; ++k) {
                if (k == a || k == b) {
                    continue;
                }
                const double old_a = d_[k * n_ + a];
                const double old_b = d_[k * n_ + b];
                d_[k * n_ + a] = d_[a * n_ + k] = new_a_[k];
                d_[k * n_ + b] = d_[b * n_ + k] = new_b_[k];
                if ((old_a == row_min_[k] && new_a_[k] > old_a) || (old_b == row_min_[k] && new_b_[k] > old_b)) {
                    rescan(k);
                } else {
                    row_min_[k] = std::min({row_min_[k], new_a_[k], new_b_[k]});
                }
            }
            rescan(a);
            rescan(b);
            return true;
        }

    private:
        void rescan(std::size_t a)
        {
            const auto first = d_.begin() + static_cast<std::ptrdiff_t>(a * n_);
            row_min_[a] = *std::min_element(first, first + static_cast<std::ptrdiff_t>(n_));
        }

        Matrix x_;
        std::size_t n_;
        std::vector<double> d_;
        std::vector<double> row_min_;
        std::vector<double> new_a_, new_b_;
    };

} // namespace detail

// Best of `restarts` random Latin hypercubes, each improved by
// `sweeps * n` random coordinate swaps.
inline Matrix maximin_lhs(std::size_t n, std::size_t p, Rng& rng, std::size_t restarts = 5, std::size_t sweeps = 20)
{
    detail::require(n >= 2, "maximin_lhs: need n >= 2");
    detail::require(restarts >= 1, "maximin_lhs: need restarts >= 1");
    Matrix best;
    double best_min = -1.0;
    for (std::size_t r = 0; r < restarts; ++r) {
        detail::MaximinClimber climber(random_lhs(n, p, rng));
        for (std::size_t step = 0; step < sweeps * n; ++step) {
            const std::size_t j = uniform_index(rng, p);
            const std::size_t a = uniform_index(rng, n);
            std::size_t b = uniform_index(rng, n - 1);
            b += b >= a ? 1 : 0;
            climber.try_swap(j, a, b);
        }
        if (climber.min_distance() > best_min) {
            best_min = climber.min_distance();
            best = climber.design();
        }
    }
    return best;
}

// Maps a design on [0,1]^p onto a domain.
inline Matrix design_on(const Domain& domain, const Matrix& unit_design)
{
    Matrix x(unit_design.rows(), unit_design.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double u = unit_design(i, j);
            x(i, j) = u >= 1.0 ? domain.hi(j) : domain.lo(j) + u * (domain.hi(j) - domain.lo(j));
        }
    }
    return x;
}

// y_i = f(x_i) + eps_i with independent N(0, noise_mult * Var_j) per output.
inline Dataset generate_data(const Benchmark& bench, const Matrix& design, double noise_mult, Rng& rng)
{
    detail::require(noise_mult >= 0.0, "generate_data: noise_mult must be >= 0");
    detail::require(design.cols() == bench.p, "generate_data: design width does not match the benchmark");
    Matrix outputs(design.rows(), bench.d);
    std::vector<double> sd(bench.d);
    for (std::size_t j = 0; j < bench.d; ++j) {
        sd[j] = std::sqrt(noise_mult * bench.variance[j]);
    }
    for (std::size_t i = 0; i < design.rows(); ++i) {
        bench.domain.check(design.row(i));
        const Point f = bench.evaluate(design.row(i));
        for (std::size_t j = 0; j < bench.d; ++j) {
            outputs(i, j) = noise_mult > 0.0 ? f[j] + sd[j] * standard_normal(rng) : f[j];
        }
    }
    return {bench.domain, design, std::move(outputs)};
}

// Posterior draws for every output. A constant output column cannot be
// scaled, so it is represented exactly by a zero-tree ensemble at that value.
inline std::vector<PosteriorDraw> fit_posterior(const Dataset& data, const BartConfig& cfg, std::size_t threads = 0)
{
    cfg.validate();
    data.validate(cfg);
    std::vector<std::vector<BartDraw>> per_output(data.d());
    parallel_for(
        data.d(),
        [&](std::size_t j) {
            const auto column = data.outputs.column(j);
            const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
            if (*lo == *hi) {
                const Ensemble constant(data.domain, std::vector<Tree>(cfg.m, Tree(0.0)), OutputTransform{*lo, 1.0});
                per_output[j].assign(cfg.n_draws, BartDraw{constant, 0.0});
                return;
            }
            Rng rng(derive_seed(cfg.seed, j, 0xB417));
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

struct DrawImages {
    std::vector<ImageAtlas> atlases; // indexed by draw_index
    std::vector<CPF> cpfs;
};

template<std::invocable<double> AlphaMap>
DrawImages extract_images(const std::vector<PosteriorDraw>& draws, AlphaMap&& alpha_map, std::size_t threads = 0)
{
    DrawImages out;
    out.atlases.resize(draws.size());
    out.cpfs.resize(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        detail::require(draws[i].draw_index == i, "extract_images: draws must be indexed 0..N-1 in order");
    }
    parallel_for(
        draws.size(),
        [&](std::size_t i) {
            out.atlases[i] = map_alphas(multi_cells(draws[i].me), alpha_map);
            out.cpfs[i] = make_cpf(i, pf_ps(out.atlases[i]));
        },
        threads);
    return out;
}

inline DrawImages extract_images(const std::vector<PosteriorDraw>& draws, std::size_t threads = 0)
{
    return extract_images(draws, [](double a) { return a; }, threads);
}

struct Scenario {
    std::string benchmark = "mop2";
    std::size_t n = 128;
    double noise_mult = 0.0;
    std::size_t replicates = 1;
    double alpha_rs = 0.25;
    double alpha_mbd = 0.5;
    std::size_t mbd_cuts = 201;
    std::size_t truth_points = 1000;
    std::size_t lhs_restarts = 5;
    BartConfig bart;
    std::uint64_t seed = 1;
    std::size_t threads = 0;

    void validate() const
    {
        bart.validate();
        detail::require(n >= 2 * bart.min_leaf_obs, "Scenario: need n >= 2 * min_leaf_obs");
        detail::require(noise_mult >= 0.0, "Scenario: noise_mult must be >= 0");
        detail::require(replicates >= 1, "Scenario: need at least one replicate");
        detail::require(alpha_rs > 0.0 && alpha_rs < 1.0, "Scenario: alpha_rs must lie in (0,1)");
        detail::require(alpha_mbd > 0.0 && alpha_mbd < 1.0, "Scenario: alpha_mbd must lie in (0,1)");
        detail::require(truth_points >= 2, "Scenario: need truth_points >= 2");
    }
};

struct ReportRow {
    std::size_t replicate = 0;
    std::string method; // "rs" or "mbd"
    std::string target; // "pf" or "ps"
    double overcoverage = 0.0;  // NaN when the cloud is empty
    double undercoverage = 0.0; // NaN when the cloud is empty
    std::size_t cloud_size = 0;
};

struct ReplicateClouds {
    std::size_t replicate = 0;
    std::string method;
    PFCloud pf;
    PSCloud ps;
};

struct ScenarioReport {
    std::vector<ReportRow> rows;
    std::vector<ReplicateClouds> clouds;
    std::map<std::string, double> seconds; // wall time per stage, summed over replicates
    std::size_t p = 0;
    std::size_t d = 0;
};

namespace detail {

    inline double median(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    class StageClock {
    public:
        explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}

        void lap(const std::string& stage)
        {
            const auto now = std::chrono::steady_clock::now();
            sink_[stage] += std::chrono::duration<double>(now - last_).count();
            last_ = now;
        }

    private:
        std::map<std::string, double>& sink_;
        std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    };

} // namespace detail

struct SummaryRow {
    std::string method;
    std::string target;
    double median_overcoverage = 0.0;
    double median_undercoverage = 0.0;
};

inline std::vector<SummaryRow> summarize(const ScenarioReport& report)
{
    std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : report.rows) {
        auto& g = groups[{r.method, r.target}];
        if (r.cloud_size > 0) {
            g.first.push_back(r.overcoverage);
            g.second.push_back(r.undercoverage);
        }
    }
    std::vector<SummaryRow> out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [key, values] : groups) {
        if (values.first.empty()) {
            out.push_back({key.first, key.second, nan, nan});
        } else {
            out.push_back({key.first, key.second, detail::median(values.first), detail::median(values.second)});
        }
    }
    return out;
}

// Runs the pipeline on `bench` as given (callers pass unit-scaled benchmarks).
// Replicate r draws its design, noise and chains from seeds derived from
// (s.seed, r), so results do not depend on the thread count.
inline ScenarioReport run_scenario(const Scenario& s, const Benchmark& bench)
{
    s.validate();
    ScenarioReport report;
    report.p = bench.p;
    report.d = bench.d;
    const PointSet front = true_front(bench, s.truth_points);
    const PointSet set = true_set(bench, s.truth_points);
    for (std::size_t r = 0; r < s.replicates; ++r) {
        try {
            detail::StageClock clock(report.seconds);
            Rng rng(derive_seed(s.seed, r, 0xD5));
            const Matrix design = design_on(bench.domain, maximin_lhs(s.n, bench.p, rng, s.lhs_restarts));
            const Dataset data = generate_data(bench, design, s.noise_mult, rng);
            clock.lap("design");

            BartConfig cfg = s.bart;
            cfg.seed = derive_seed(s.seed, r, 0xF1);
            const auto draws = fit_posterior(data, cfg, s.threads);
            clock.lap("fit");

            const DrawImages images = extract_images(draws, s.threads);
            clock.lap("extract");

            const auto record = [&](const std::string& method, PFCloud pf) {
                PSCloud ps = ps_cloud(pf, images.atlases);
                if (pf.points.empty()) {
                    // no CPF point fell in the band; coverage is undefined
                    const double nan = std::numeric_limits<double>::quiet_NaN();
                    report.rows.push_back({r, method, "pf", nan, nan, 0});
                    report.rows.push_back({r, method, "ps", nan, nan, 0});
                } else {
                    const Coverage pf_cov = coverage(pf.objectives(), front);
                    const Coverage ps_cov = coverage(ps_cloud_to_points(ps), set);
                    report.rows.push_back({r, method, "pf", pf_cov.overcoverage, pf_cov.undercoverage, pf.points.size()});
                    report.rows.push_back({r, method, "ps", ps_cov.overcoverage, ps_cov.undercoverage, ps.boxes.size()});
                }
                report.clouds.push_back({r, method, std::move(pf), std::move(ps)});
            };
            record("rs", pf_cloud_rs(images.cpfs, s.alpha_rs));
            clock.lap("uq_rs");
            if (bench.d == 2) {
                const DepthResult depths = modified_band_depth(images.cpfs, s.mbd_cuts);
                record("mbd", pf_cloud_mbd(images.cpfs, depths, s.alpha_mbd));
                clock.lap("uq_mbd");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("replicate " + std::to_string(r) + " of " + bench.name + ": " + e.what());
        }
    }
    return report;
}

inline ScenarioReport run_scenario(const Scenario& s)
{
    return run_scenario(s, unit_scale(benchmark_by_name(s.benchmark)));
}

struct TurningConfig {
    std::size_t n = 1500;
    std::size_t draws = 2000;
    std::size_t burn = 1000;
    double alpha = 0.5;
    std::size_t mbd_cuts = 201;
    std::size_t truth_points = 1000;
    std::size_t lhs_restarts = 5;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct TurningResult {
    PFCloud pf; // raw cost units
    PSCloud ps; // raw (v, f) units
    DepthResult depths;
    Coverage pf_unit; // after mapping costs and inputs to the unit box
    Coverage ps_unit;
};

// Noise-free turning costs on a maximin design; both outputs are fitted on
// the log scale and cell alphas are mapped back with exp.
inline TurningResult run_turning(const TurningConfig& tc)
{
    detail::require(tc.n >= 100, "run_turning: need n >= 100");
    const Benchmark bench = turning();
    Rng rng(derive_seed(tc.seed, 0, 0x7C));
    const Matrix design = design_on(bench.domain, maximin_lhs(tc.n, bench.p, rng, tc.lhs_restarts));
    Matrix log_costs(tc.n, 2);
    for (std::size_t i = 0; i < tc.n; ++i) {
        const Point c = bench.evaluate(design.row(i));
        log_costs(i, 0) = std::log(c[0]);
        log_costs(i, 1) = std::log(c[1]);
    }
    BartConfig cfg;
    cfg.n_draws = tc.draws;
    cfg.n_burn = tc.burn;
    cfg.seed = derive_seed(tc.seed, 0, 0xF1);
    const auto draws = fit_posterior({bench.domain, design, std::move(log_costs)}, cfg, tc.threads);
    const DrawImages images = extract_images(draws, [](double a) { return std::exp(a); }, tc.threads);

    TurningResult out;
    out.depths = modified_band_depth(images.cpfs, tc.mbd_cuts);
    out.pf = pf_cloud_mbd(images.cpfs, out.depths, tc.alpha);
    out.ps = ps_cloud(out.pf, images.atlases);

    const UnitScaling scale = unit_scaling(bench);
    const PointSet front = scale.outputs_to_unit(true_front(bench, tc.truth_points));
    const PointSet set = scale.inputs_to_unit(true_set(bench, tc.truth_points));
    out.pf_unit = coverage(scale.outputs_to_unit(out.pf.objectives()), front);
    out.ps_unit = coverage(scale.inputs_to_unit(ps_cloud_to_points(out.ps)), set);
    return out;
}

} // namespace mobart

#endif

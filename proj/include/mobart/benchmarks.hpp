#ifndef MOBART_BENCHMARKS_HPP
#define MOBART_BENCHMARKS_HPP

#include "mobart/box.hpp"
#include "mobart/matrix.hpp"
#include "mobart/pareto.hpp"

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobart {

namespace detail {

    inline void check_in(const Domain& domain, std::span<const double> x, const char* who)
    {
        if (x.size() != domain.dim()) {
            throw std::invalid_argument(std::string(who) + ": wrong input dimension");
        }
        if (!domain.contains(x)) {
            throw std::domain_error(std::string(who) + ": input outside the domain");
        }
    }

    inline std::vector<double> linspace(double a, double b, std::size_t k)
    {
        std::vector<double> out(k);
        for (std::size_t i = 0; i < k; ++i) {
            out[i] = i + 1 == k ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1);
        }
        return out;
    }

} // namespace detail

// Fonseca-Fleming MOP2 on [0,1]^2.
inline Point mop2_objectives(std::span<const double> x)
{
    detail::check_in(Domain::unit(2), x, "mop2");
    const double s = 1.0 / std::numbers::sqrt2;
    double a = 0.0;
    double b = 0.0;
    for (double xi : x) {
        a += (4.0 * xi - 2.0 - s) * (4.0 * xi - 2.0 - s);
        b += (4.0 * xi - 2.0 + s) * (4.0 * xi - 2.0 + s);
    }
    return {1.0 - std::exp(-a), 1.0 - std::exp(-b)};
}

constexpr double zdt3_offset = 0.70238;

// ZDT3 with p = 2 and the second objective shifted/scaled by c3.
inline Point zdt3_objectives(std::span<const double> x)
{
    detail::check_in(Domain::unit(2), x, "zdt3");
    const double g = 1.0 + 9.0 * x[1];
    const double r = x[0] / g;
    const double h = 1.0 - std::sqrt(r) - r * std::sin(10.0 * std::numbers::pi * x[0]);
    return {x[0], (g * h + zdt3_offset) / (10.0 + zdt3_offset)};
}

// DTLZ2 variant with a convex quarter-circle front, p = 4.
inline Point dtlz2m_objectives(std::span<const double> x)
{
    detail::check_in(Domain::unit(4), x, "dtlz2m");
    double g = 0.0;
    for (std::size_t i = 1; i < 4; ++i) {
        g += (x[i] - 0.5) * (x[i] - 0.5);
    }
    const double angle = std::numbers::pi * x[0] / 2.0;
    return {(g - 1.0) * std::cos(angle) + 1.0, (g - 1.0) * std::sin(angle) + 1.0};
}

// Single-cut turning: machining and tool cost in GBP.
constexpr double turning_b1 = 12354.0;
constexpr double turning_b2 = 0.0284;

inline Domain turning_domain() { return {{10.0, 0.04}, {400.0, 1.0}}; }

inline Point turning_costs(double cutting_speed, double feed)
{
    const double x[2] = {cutting_speed, feed};
    detail::check_in(turning_domain(), x, "turning_costs");
    return {turning_b1 / (cutting_speed * feed), turning_b2 * cutting_speed * cutting_speed * feed * feed * feed};
}

struct Benchmark {
    std::string name;
    std::size_t p = 0;
    std::size_t d = 0;
    Domain domain;
    std::function<Point(std::span<const double>)> evaluate;
    // Var_X(f_j(X)) for X uniform on the domain.
    std::vector<double> variance;
    // Objective ranges over the domain.
    std::vector<double> out_lo;
    std::vector<double> out_hi;
    std::function<PointSet(std::size_t)> front_sampler;
    std::function<PointSet(std::size_t)> set_sampler;
};

inline PointSet true_front(const Benchmark& b, std::size_t k)
{
    if (k < 2) {
        throw std::invalid_argument("true_front: need k >= 2");
    }
    return b.front_sampler(k);
}

inline PointSet true_set(const Benchmark& b, std::size_t k)
{
    if (k < 2) {
        throw std::invalid_argument("true_set: need k >= 2");
    }
    return b.set_sampler(k);
}

namespace detail {

    inline PointSet image_of(const PointSet& xs, const std::function<Point(std::span<const double>)>& f)
    {
        PointSet out;
        out.reserve(xs.size());
        for (const auto& x : xs) {
            out.push_back(f(x));
        }
        return out;
    }

    // Picks k entries at evenly spaced positions of a sorted sample.
    inline PointSet thin(const PointSet& pts, std::size_t k)
    {
        if (pts.size() <= k) {
            return pts;
        }
        PointSet out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            out.push_back(pts[i * (pts.size() - 1) / (k - 1)]);
        }
        return out;
    }

    // ZDT3 Pareto-optimal inputs: x2 = 0 and x1 on the nondominated pieces,
    // resolved on a 1e5-point grid.
    inline const PointSet& zdt3_optimal_inputs()
    {
        static const PointSet inputs = [] {
            constexpr std::size_t resolution = 100000;
            PointSet xs;
            PointSet fs;
            for (double x1 : linspace(0.0, 1.0, resolution)) {
                xs.push_back({x1, 0.0});
                fs.push_back(zdt3_objectives(xs.back()));
            }
            auto idx = kung_front(fs);
            std::sort(idx.begin(), idx.end());
            PointSet out;
            for (std::size_t i : idx) {
                out.push_back(xs[i]);
            }
            return out;
        }();
        return inputs;
    }

} // namespace detail

inline Benchmark mop2()
{
    const double s = 1.0 / std::numbers::sqrt2;
    const double t_lo = (2.0 - s) / 4.0;
    const double t_hi = (2.0 + s) / 4.0;
    auto set = [=](std::size_t k) {
        PointSet out;
        for (double t : detail::linspace(t_lo, t_hi, k)) {
            out.push_back({t, t});
        }
        return out;
    };
    Benchmark b;
    b.name = "mop2";
    b.p = 2;
    b.d = 2;
    b.domain = Domain::unit(2);
    b.evaluate = mop2_objectives;
    b.variance = {0.0636, 0.0636};
    // minimum at the optimum, maximum at the far corner
    const double far = 1.0 - std::exp(-2.0 * (2.0 + s) * (2.0 + s));
    b.out_lo = {0.0, 0.0};
    b.out_hi = {far, far};
    b.set_sampler = set;
    b.front_sampler = [set](std::size_t k) { return detail::image_of(set(k), mop2_objectives); };
    return b;
}

inline Benchmark zdt3()
{
    Benchmark b;
    b.name = "zdt3";
    b.p = 2;
    b.d = 2;
    b.domain = Domain::unit(2);
    b.evaluate = zdt3_objectives;
    b.variance = {1.0 / 12.0, 0.0461};
    // f2 extremes from a dense grid (the minimum sits on the x2 = 0 edge).
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double x2 : {0.0, 1.0}) {
        for (double x1 : detail::linspace(0.0, 1.0, 100001)) {
            const double x[2] = {x1, x2};
            const double f2 = zdt3_objectives(x)[1];
            lo = std::min(lo, f2);
            hi = std::max(hi, f2);
        }
    }
    b.out_lo = {0.0, lo};
    b.out_hi = {1.0, hi};
    b.set_sampler = [](std::size_t k) { return detail::thin(detail::zdt3_optimal_inputs(), k); };
    b.front_sampler = [](std::size_t k) {
        return detail::image_of(detail::thin(detail::zdt3_optimal_inputs(), k), zdt3_objectives);
    };
    return b;
}

inline Benchmark dtlz2m()
{
    Benchmark b;
    b.name = "dtlz2m";
    b.p = 4;
    b.d = 2;
    b.domain = Domain::unit(4);
    b.evaluate = dtlz2m_objectives;
    b.variance = {0.0616, 0.0616};
    b.out_lo = {0.0, 0.0};
    b.out_hi = {1.0, 1.0};
    b.set_sampler = [](std::size_t k) {
        PointSet out;
        for (double x1 : detail::linspace(0.0, 1.0, k)) {
            out.push_back({x1, 0.5, 0.5, 0.5});
        }
        return out;
    };
    b.front_sampler = [](std::size_t k) {
        PointSet out;
        for (double t : detail::linspace(0.0, std::numbers::pi / 2.0, k)) {
            out.push_back({1.0 - std::cos(t), 1.0 - std::sin(t)});
        }
        return out;
    };
    return b;
}

namespace detail {

    // Pareto set of the turning costs: for a fixed C_m (fixed speed*feed) the
    // tool cost grows with the feed, so optimal inputs run along the lowest
    // feed and then along the highest speed. Parametrized by log(speed*feed).
    inline PointSet turning_optimal_inputs(std::size_t k)
    {
        const Domain dom = turning_domain();
        const double v_lo = dom.lo()[0], v_hi = dom.hi()[0];
        const double f_lo = dom.lo()[1], f_hi = dom.hi()[1];
        PointSet out;
        for (double u : linspace(std::log(v_lo * f_lo), std::log(v_hi * f_hi), k)) {
            const double product = std::exp(u);
            if (product <= v_hi * f_lo) {
                out.push_back({std::clamp(product / f_lo, v_lo, v_hi), f_lo});
            } else {
                out.push_back({v_hi, std::clamp(product / v_hi, f_lo, f_hi)});
            }
        }
        return out;
    }

    inline Point turning_vector(std::span<const double> x) { return turning_costs(x[0], x[1]); }

} // namespace detail

inline Benchmark turning()
{
    Benchmark b;
    b.name = "turning";
    b.p = 2;
    b.d = 2;
    b.domain = turning_domain();
    b.evaluate = detail::turning_vector;
    // closed forms for independent uniforms: Var = E[g^2] - E[g]^2 per factor
    const auto moments = [](double a, double c, double power) {
        // E[x^power] for x ~ U(a, c), power != -1
        return (std::pow(c, power + 1.0) - std::pow(a, power + 1.0)) / ((power + 1.0) * (c - a));
    };
    const auto log_mean = [](double a, double c) { return (std::log(c) - std::log(a)) / (c - a); };
    const Domain dom = turning_domain();
    const double v0 = dom.lo()[0], v1 = dom.hi()[0], f0 = dom.lo()[1], f1 = dom.hi()[1];
    const double cm_mean = turning_b1 * log_mean(v0, v1) * log_mean(f0, f1);
    const double cm_sq = turning_b1 * turning_b1 * moments(v0, v1, -2.0) * moments(f0, f1, -2.0);
    const double ct_mean = turning_b2 * moments(v0, v1, 2.0) * moments(f0, f1, 3.0);
    const double ct_sq = turning_b2 * turning_b2 * moments(v0, v1, 4.0) * moments(f0, f1, 6.0);
    b.variance = {cm_sq - cm_mean * cm_mean, ct_sq - ct_mean * ct_mean};
    b.out_lo = {turning_costs(v1, f1)[0], turning_costs(v0, f0)[1]};
    b.out_hi = {turning_costs(v0, f0)[0], turning_costs(v1, f1)[1]};
    b.set_sampler = detail::turning_optimal_inputs;
    b.front_sampler = [](std::size_t k) {
        return detail::image_of(detail::turning_optimal_inputs(k), detail::turning_vector);
    };
    return b;
}

inline Benchmark benchmark_by_name(const std::string& name)
{
    if (name == "mop2") {
        return mop2();
    }
    if (name == "zdt3") {
        return zdt3();
    }
    if (name == "dtlz2m") {
        return dtlz2m();
    }
    if (name == "turning") {
        return turning();
    }
    throw std::invalid_argument("unknown benchmark '" + name + "' (expected mop2 | zdt3 | dtlz2m | turning)");
}

// Affine maps between a benchmark's raw units and the unit box.
struct UnitScaling {
    std::vector<double> in_lo, in_hi, out_lo, out_hi;

    [[nodiscard]] Point input_to_unit(std::span<const double> x) const
    {
        Point u(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            u[j] = (x[j] - in_lo[j]) / (in_hi[j] - in_lo[j]);
        }
        return u;
    }
    [[nodiscard]] Point input_from_unit(std::span<const double> u) const
    {
        Point x(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) {
            x[j] = u[j] == 1.0 ? in_hi[j] : in_lo[j] + u[j] * (in_hi[j] - in_lo[j]);
        }
        return x;
    }
    [[nodiscard]] Point output_to_unit(std::span<const double> y) const
    {
        Point u(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) {
            u[j] = (y[j] - out_lo[j]) / (out_hi[j] - out_lo[j]);
        }
        return u;
    }
    [[nodiscard]] PointSet outputs_to_unit(const PointSet& ys) const
    {
        PointSet out;
        for (const auto& y : ys) {
            out.push_back(output_to_unit(y));
        }
        return out;
    }
    [[nodiscard]] PointSet inputs_to_unit(const PointSet& xs) const
    {
        PointSet out;
        for (const auto& x : xs) {
            out.push_back(input_to_unit(x));
        }
        return out;
    }
};

inline UnitScaling unit_scaling(const Benchmark& b) { return {b.domain.lo(), b.domain.hi(), b.out_lo, b.out_hi}; }

// Same benchmark on [0,1]^p with every objective ranging over [0,1].
// Variances scale with the squared output range.
inline Benchmark unit_scale(const Benchmark& raw)
{
    const UnitScaling s = unit_scaling(raw);
    Benchmark b = raw;
    b.domain = Domain::unit(raw.p);
    b.evaluate = [s, f = raw.evaluate](std::span<const double> u) {
        detail::check_in(Domain::unit(u.size()), u, "unit-scaled benchmark");
        return s.output_to_unit(f(s.input_from_unit(u)));
    };
    for (std::size_t j = 0; j < raw.d; ++j) {
        const double range = raw.out_hi[j] - raw.out_lo[j];
        b.variance[j] = raw.variance[j] / (range * range);
        b.out_lo[j] = 0.0;
        b.out_hi[j] = 1.0;
    }
    b.front_sampler = [s, f = raw.front_sampler](std::size_t k) { return s.outputs_to_unit(f(k)); };
    b.set_sampler = [s, f = raw.set_sampler](std::size_t k) { return s.inputs_to_unit(f(k)); };
    return b;
}

} // namespace mobart

#endif

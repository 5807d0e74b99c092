#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace mobart;

namespace {

double min_distance(const Matrix& x)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < x.rows(); ++a) {
        for (std::size_t b = a + 1; b < x.rows(); ++b) {
            double s = 0.0;
            for (std::size_t j = 0; j < x.cols(); ++j) {
                s += (x(a, j) - x(b, j)) * (x(a, j) - x(b, j));
            }
            best = std::min(best, std::sqrt(s));
        }
    }
    return best;
}

void expect_latin(const Matrix& x)
{
    const std::size_t n = x.rows();
    for (std::size_t j = 0; j < x.cols(); ++j) {
        std::vector<double> col = x.column(j);
        std::sort(col.begin(), col.end());
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_GE(col[i], static_cast<double>(i) / static_cast<double>(n));
            EXPECT_LT(col[i], static_cast<double>(i + 1) / static_cast<double>(n));
        }
    }
}

Benchmark constant_benchmark()
{
    Benchmark b;
    b.name = "constant";
    b.p = 2;
    b.d = 2;
    b.domain = Domain::unit(2);
    b.evaluate = [](std::span<const double>) { return Point{0.25, 0.75}; };
    b.variance = {0.0, 0.0};
    b.out_lo = {0.25, 0.75};
    b.out_hi = {0.25, 0.75};
    b.front_sampler = [](std::size_t k) { return PointSet(k, Point{0.25, 0.75}); };
    b.set_sampler = [](std::size_t k) { return PointSet(k, Point{0.5, 0.5}); };
    return b;
}

Scenario small_scenario()
{
    Scenario s;
    s.n = 40;
    s.bart.m = 10;
    s.bart.n_burn = 50;
    s.bart.n_draws = 30;
    s.mbd_cuts = 21;
    s.truth_points = 100;
    s.lhs_restarts = 2;
    s.seed = 77;
    return s;
}

} // namespace

TEST(Lhs, RandomIsStratified)
{
    Rng rng(1);
    for (std::size_t n : {1u, 2u, 7u, 64u}) {
        expect_latin(random_lhs(n, 3, rng));
    }
}

TEST(Lhs, MaximinIsStratified)
{
    Rng rng(2);
    expect_latin(maximin_lhs(50, 4, rng));
    const Matrix two = maximin_lhs(2, 1, rng);
    EXPECT_NE(two(0, 0) < 0.5, two(1, 0) < 0.5);
    EXPECT_THROW(maximin_lhs(1, 2, rng), std::invalid_argument);
}

TEST(Lhs, MaximinNeverWorseThanRandom)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng a(seed);
        Rng b(seed);
        const double plain = min_distance(random_lhs(30, 2, a));
        const double opt = min_distance(maximin_lhs(30, 2, b, 1));
        EXPECT_GE(opt, plain) << "seed " << seed;
    }
}

TEST(Lhs, DesignOnDomain)
{
    const Matrix unit = Matrix::from_rows({{0.0, 1.0}, {0.5, 0.25}});
    const Matrix x = design_on(turning_domain(), unit);
    EXPECT_EQ(x(0, 0), 10.0);
    EXPECT_EQ(x(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(x(1, 0), 205.0);
    EXPECT_DOUBLE_EQ(x(1, 1), 0.28);
}

TEST(GenerateData, NoiseFreeIsExact)
{
    Rng rng(3);
    const Benchmark b = mop2();
    const Matrix design = random_lhs(20, 2, rng);
    const Dataset data = generate_data(b, design, 0.0, rng);
    for (std::size_t i = 0; i < 20; ++i) {
        const Point f = b.evaluate(design.row(i));
        EXPECT_EQ(data.outputs(i, 0), f[0]);
        EXPECT_EQ(data.outputs(i, 1), f[1]);
    }
}

TEST(GenerateData, NoiseVarianceAndIndependence)
{
    Rng rng(4);
    const Benchmark b = zdt3();
    const std::size_t n = 100000;
    const Matrix design = random_lhs(n, 2, rng);
    const Dataset data = generate_data(b, design, 0.25, rng);
    std::vector<double> e0(n), e1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point f = b.evaluate(design.row(i));
        e0[i] = data.outputs(i, 0) - f[0];
        e1[i] = data.outputs(i, 1) - f[1];
    }
    const auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
    const double m0 = mean(e0), m1 = mean(e1);
    double v0 = 0.0, v1 = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v0 += (e0[i] - m0) * (e0[i] - m0);
        v1 += (e1[i] - m1) * (e1[i] - m1);
        c += (e0[i] - m0) * (e1[i] - m1);
    }
    EXPECT_NEAR(v0 / (n - 1) / (0.25 * b.variance[0]), 1.0, 0.02);
    EXPECT_NEAR(v1 / (n - 1) / (0.25 * b.variance[1]), 1.0, 0.02);
    EXPECT_LT(std::abs(c / std::sqrt(v0 * v1)), 0.02);
}

TEST(FitPosterior, ConstantColumn)
{
    Rng rng(5);
    Dataset data{Domain::unit(2), random_lhs(30, 2, rng), Matrix(30, 2, 4.0)};
    for (std::size_t i = 0; i < 30; ++i) {
        data.outputs(i, 1) = data.inputs(i, 0);
    }
    BartConfig cfg;
    cfg.m = 5;
    cfg.n_burn = 10;
    cfg.n_draws = 7;
    const auto draws = fit_posterior(data, cfg);
    ASSERT_EQ(draws.size(), 7u);
    for (const auto& d : draws) {
        EXPECT_EQ(eval_multi(d.me, std::vector<double>{0.3, 0.9})[0], 4.0);
        EXPECT_EQ(d.sigma2[0], 0.0);
        EXPECT_GT(d.sigma2[1], 0.0);
    }
}

TEST(FitPosterior, MatchesFitMultiBart)
{
    Rng rng(6);
    const Benchmark b = mop2();
    const Matrix design = random_lhs(40, 2, rng);
    const Dataset data = generate_data(b, design, 0.0, rng);
    BartConfig cfg;
    cfg.m = 5;
    cfg.n_burn = 10;
    cfg.n_draws = 5;
    const auto a = fit_posterior(data, cfg);
    const auto c = fit_multi_bart(data, cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].sigma2, c[i].sigma2);
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t t = 0; t < cfg.m; ++t) {
                EXPECT_EQ(a[i].me.output(j).trees()[t].nodes(), c[i].me.output(j).trees()[t].nodes());
            }
        }
    }
}

TEST(ExtractImages, ExpCommutesWithFront)
{
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        const MultiEnsemble me = testutil::random_multi(Domain::unit(2), 4, 2, rng, 3, rep % 2 == 0);
        const ImageAtlas atlas = multi_cells(me);
        const auto log_front = pf_ps(atlas).front;
        const auto exp_front = pf_ps(map_alphas(atlas, [](double a) { return std::exp(a); })).front;
        ASSERT_EQ(log_front.size(), exp_front.size());
        for (std::size_t i = 0; i < log_front.size(); ++i) {
            EXPECT_EQ(exp_front[i].cell_refs, log_front[i].cell_refs);
            for (std::size_t j = 0; j < 2; ++j) {
                EXPECT_EQ(exp_front[i].objective[j], std::exp(log_front[i].objective[j]));
            }
        }
    }
}

TEST(ExtractImages, ThreadsDoNotMatter)
{
    Rng rng(8);
    std::vector<PosteriorDraw> draws;
    for (std::size_t i = 0; i < 12; ++i) {
        draws.push_back({i, testutil::random_multi(Domain::unit(2), 5, 2, rng), {1.0, 1.0}});
    }
    const auto a = extract_images(draws, 1);
    const auto b = extract_images(draws, 4);
    ASSERT_EQ(a.cpfs.size(), 12u);
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_EQ(a.cpfs[i].draw_index, i);
        ASSERT_EQ(a.cpfs[i].points.size(), b.cpfs[i].points.size());
        for (std::size_t k = 0; k < a.cpfs[i].points.size(); ++k) {
            EXPECT_EQ(a.cpfs[i].points[k].objective, b.cpfs[i].points[k].objective);
        }
        EXPECT_EQ(a.atlases[i].cells.size(), b.atlases[i].cells.size());
    }
}

TEST(Scenario, ConstantMicroScenario)
{
    Scenario s;
    s.n = 20;
    s.bart.n_burn = 5;
    s.bart.n_draws = 5;
    s.truth_points = 10;
    s.lhs_restarts = 1;
    const ScenarioReport report = run_scenario(s, constant_benchmark());
    bool saw_mbd = false;
    for (const auto& r : report.rows) {
        if (r.method == "mbd" && r.target == "pf") {
            saw_mbd = true;
            EXPECT_EQ(r.overcoverage, 0.0);
            EXPECT_EQ(r.undercoverage, 0.0);
            EXPECT_GT(r.cloud_size, 0u);
        }
        if (r.method == "rs") {
            // every CPF point is attained by all draws, outside the [0.375, 0.625] band
            EXPECT_EQ(r.cloud_size, 0u);
            EXPECT_TRUE(std::isnan(r.overcoverage));
        }
    }
    EXPECT_TRUE(saw_mbd);
    for (const auto& row : summarize(report)) {
        if (row.method == "mbd" && row.target == "pf") {
            EXPECT_EQ(row.median_overcoverage, 0.0);
        }
    }
}

TEST(Scenario, RerunsIdentically)
{
    Scenario s = small_scenario();
    s.replicates = 2;
    s.threads = 1;
    const auto a = run_scenario(s);
    s.threads = 3;
    const auto b = run_scenario(s);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    ASSERT_EQ(a.rows.size(), 8u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].method, b.rows[i].method);
        EXPECT_EQ(a.rows[i].target, b.rows[i].target);
        EXPECT_EQ(a.rows[i].overcoverage, b.rows[i].overcoverage);
        EXPECT_EQ(a.rows[i].undercoverage, b.rows[i].undercoverage);
    }
    for (std::size_t i = 0; i < a.clouds.size(); ++i) {
        EXPECT_EQ(a.clouds[i].pf.objectives(), b.clouds[i].pf.objectives());
        EXPECT_EQ(a.clouds[i].ps.boxes.size(), b.clouds[i].ps.boxes.size());
    }
}

TEST(Scenario, CloudsStayInUnitBox)
{
    const auto report = run_scenario(small_scenario());
    const Domain unit = Domain::unit(2);
    for (const auto& c : report.clouds) {
        for (const auto& p : c.pf.points) {
            for (double v : p.objective) {
                EXPECT_GE(v, -0.5);
                EXPECT_LE(v, 1.5);
            }
        }
        for (const auto& b : c.ps.boxes) {
            for (std::size_t j = 0; j < 2; ++j) {
                EXPECT_GE(b.box.lo(j), 0.0);
                EXPECT_LE(b.box.hi(j), 1.0);
            }
        }
    }
}

TEST(Scenario, BoxLatticeDoesNotMoveCoverageMuch)
{
    Scenario s = small_scenario();
    s.n = 64;
    s.bart.n_burn = 200;
    s.bart.n_draws = 100;
    const auto report = run_scenario(s);
    const PointSet set = true_set(unit_scale(mop2()), 1000);
    for (const auto& c : report.clouds) {
        const Coverage k1 = coverage(ps_cloud_to_points(c.ps, 1), set);
        const Coverage k2 = coverage(ps_cloud_to_points(c.ps, 2), set);
        EXPECT_NEAR(k2.overcoverage / k1.overcoverage, 1.0, 0.1) << c.method;
        EXPECT_NEAR(k2.undercoverage / k1.undercoverage, 1.0, 0.1) << c.method;
    }
}

TEST(Scenario, Validation)
{
    Scenario s = small_scenario();
    s.n = 10;
    EXPECT_THROW(run_scenario(s), std::invalid_argument);
    s = small_scenario();
    s.alpha_rs = 1.0;
    EXPECT_THROW(run_scenario(s), std::invalid_argument);
    s = small_scenario();
    s.benchmark = "nope";
    EXPECT_THROW(run_scenario(s), std::invalid_argument);
}

TEST(Turning, SmallRun)
{
    TurningConfig tc;
    tc.n = 200;
    tc.draws = 100;
    tc.burn = 200;
    tc.mbd_cuts = 51;
    tc.lhs_restarts = 1;
    const TurningResult r = run_turning(tc);
    ASSERT_FALSE(r.pf.points.empty());
    for (const auto& p : r.pf.points) {
        EXPECT_GT(p.objective[0], 0.0);
        EXPECT_GT(p.objective[1], 0.0);
    }
    const PointSet objs = r.pf.objectives();
    std::vector<Point> front;
    for (std::size_t i : kung_front(objs)) {
        front.push_back(objs[i]);
    }
    std::sort(front.begin(), front.end());
    for (std::size_t i = 1; i < front.size(); ++i) {
        EXPECT_GT(front[i][0], front[i - 1][0]);
        EXPECT_LT(front[i][1], front[i - 1][1]);
    }
    EXPECT_LT(r.pf_unit.overcoverage, 0.05);
    for (const auto& b : r.ps.boxes) {
        EXPECT_TRUE(turning_domain().contains(b.box.lo()));
    }
}

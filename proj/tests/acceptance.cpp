// Acceptance checks, one per invocation: acceptance <criterion 1..10> <path to mobart>
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

using namespace mobart;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string cli_path;

fs::path scratch_dir(const std::string& tag)
{
    const fs::path dir = fs::temp_directory_path() / ("mobart_acceptance_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

bool run_cli(const std::string& args, const fs::path& log)
{
    const std::string cmd = "\"" + cli_path + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    return std::system(cmd.c_str()) == 0;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table read_table(const fs::path& p)
{
    std::ifstream in(p);
    return read_csv(in);
}

std::string point_str(const std::vector<double>& v)
{
    std::ostringstream ss;
    ss << '(';
    for (std::size_t k = 0; k < v.size(); ++k) {
        ss << (k ? "," : "") << v[k];
    }
    ss << ')';
    return ss.str();
}

// 1. Worked biobjective example.
void criterion1(Outcome& out)
{
    Stopwatch clock;
    const ImageAtlas atlas = multi_cells(testutil::figure3());
    std::set<std::vector<double>> images;
    for (const auto& c : atlas.cells) {
        images.insert(c.alpha);
    }
    const ParetoResult pr = pf_ps(atlas);
    const double secs = clock.seconds();

    out.detail << "distinct images " << images.size() << ", front {";
    for (std::size_t i = 0; i < pr.front.size(); ++i) {
        out.detail << (i ? " " : "") << point_str(pr.front[i].objective);
    }
    out.detail << "}, " << secs << " s";
    out.require(images.size() == 16, "16 distinct image points");
    out.require(images == testutil::figure3_points(), "image points equal the plotted coordinates");
    out.require(pr.front.size() == 1 && pr.front.front().objective == std::vector<double>{-6, -7},
                "front == {(-6,-7)}");
    out.require(secs < 1.0, "runtime < 1 s");
}

// 2. Kung front against the quadratic scan.
void criterion2(Outcome& out)
{
    Stopwatch clock;
    Rng rng(derive_seed(2, 0, 0xACC));
    std::size_t mismatches = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rep % 4);
        const std::size_t n = 1 + uniform_index(rng, 200);
        const bool coarse = rep % 3 == 0;
        PointSet v(n, Point(d));
        for (auto& p : v) {
            for (auto& x : p) {
                x = coarse ? static_cast<double>(uniform_index(rng, 5)) : uniform01(rng);
            }
        }
        std::set<Point> got;
        for (std::size_t i : kung_front(v)) {
            got.insert(v[i]);
        }
        mismatches += got == testutil::oracle_front(v) ? 0 : 1;
    }
    const double secs = clock.seconds();
    out.detail << "1000 instances, " << mismatches << " mismatches, " << secs << " s";
    out.require(mismatches == 0, "exact set equality on every instance");
    out.require(secs < 30.0, "runtime < 30 s");
}

// 3. Atlas against pointwise evaluation on a grid.
void criterion3(Outcome& out)
{
    Stopwatch clock;
    Rng rng(derive_seed(3, 0, 0xACC));
    constexpr std::size_t g = 60;
    std::size_t bad_points = 0;
    std::size_t bad_volume = 0;
    std::size_t total_points = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t p = 1 + static_cast<std::size_t>(rep % 3);
        const std::size_t m = 1 + uniform_index(rng, 6);
        std::vector<double> lo(p), hi(p);
        for (std::size_t j = 0; j < p; ++j) {
            lo[j] = -1.0 + uniform01(rng);
            hi[j] = lo[j] + 0.5 + 2.0 * uniform01(rng);
        }
        const Domain dom(lo, hi);
        const MultiEnsemble me = testutil::random_multi(dom, m, 2, rng, 3, rep % 2 == 0);
        const ImageAtlas atlas = multi_cells(me);

        std::vector<std::vector<double>> axis(p, std::vector<double>(g));
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < g; ++i) {
                axis[j][i] = i + 1 == g ? hi[j] : lo[j] + (hi[j] - lo[j]) * static_cast<double>(i) / (g - 1);
            }
        }
        std::size_t count = 1;
        for (std::size_t j = 0; j < p; ++j) {
            count *= g;
        }
        total_points += count;
        std::vector<int> owner(count, -1);
        std::vector<std::size_t> hits(count, 0);
        double volume = 0.0;
        for (std::size_t c = 0; c < atlas.cells.size(); ++c) {
            const Box& box = atlas.cells[c].box;
            volume += box.volume();
            std::vector<std::vector<std::size_t>> inside(p);
            for (std::size_t j = 0; j < p; ++j) {
                for (std::size_t i = 0; i < g; ++i) {
                    const double v = axis[j][i];
                    if (v >= box.lo(j) && (box.closed_hi(j) ? v <= box.hi(j) : v < box.hi(j))) {
                        inside[j].push_back(i);
                    }
                }
            }
            std::vector<std::size_t> pos(p, 0);
            bool any = std::all_of(inside.begin(), inside.end(), [](const auto& s) { return !s.empty(); });
            while (any) {
                std::size_t flat = 0;
                for (std::size_t j = 0; j < p; ++j) {
                    flat = flat * g + inside[j][pos[j]];
                }
                owner[flat] = static_cast<int>(c);
                ++hits[flat];
                std::size_t j = p;
                while (j > 0) {
                    --j;
                    if (++pos[j] < inside[j].size()) {
                        break;
                    }
                    pos[j] = 0;
                    if (j == 0) {
                        any = false;
                    }
                }
            }
        }
        std::vector<double> x(p);
        for (std::size_t flat = 0; flat < count; ++flat) {
            std::size_t rest = flat;
            for (std::size_t j = p; j-- > 0;) {
                x[j] = axis[j][rest % g];
                rest /= g;
            }
            if (hits[flat] != 1 || atlas.cells[static_cast<std::size_t>(owner[flat])].alpha != eval_multi(me, x)) {
                ++bad_points;
            }
        }
        const double dv = dom.volume();
        bad_volume += std::abs(volume - dv) <= 1e-9 * dv ? 0 : 1;
    }
    const double secs = clock.seconds();
    out.detail << "50 ensembles, " << total_points << " grid points, " << bad_points << " mismatched points, "
               << bad_volume << " volume failures, " << secs << " s";
    out.require(bad_points == 0, "every grid point matches its cell exactly");
    out.require(bad_volume == 0, "cell volumes sum to the domain volume");
    out.require(secs < 60.0, "runtime < 60 s");
}

std::vector<CPF> random_cpfs(Rng& rng, std::size_t n, int levels)
{
    std::vector<CPF> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(testutil::random_cpf(rng, i, 1 + uniform_index(rng, 10), 2, levels));
    }
    return out;
}

std::vector<double> grid_for(const std::vector<const CPF*>& cpfs, std::size_t axis)
{
    std::vector<double> v;
    for (const CPF* c : cpfs) {
        for (const auto& p : c->points) {
            v.push_back(p.objective[axis]);
        }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> grid{v.front() - 1.0, v.back() + 1.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        grid.push_back(v[i]);
        if (i + 1 < v.size()) {
            grid.push_back(0.5 * (v[i] + v[i + 1]));
        }
    }
    return grid;
}

// 4. Band depths against counting and grid oracles.
void criterion4(Outcome& out)
{
    Stopwatch clock;
    Rng rng(derive_seed(4, 0, 0xACC));
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + uniform_index(rng, 49);
        const auto cs = random_cpfs(rng, n, rep % 2 == 0 ? 6 : 0);
        const auto got = modified_band_depth(cs, 21).depth;
        const auto expect = testutil::oracle_mbd(cs, 21);
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(got[i] - expect[i]));
        }
    }
    std::size_t bd_mismatch = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const auto cs = random_cpfs(rng, 10, rep % 2 == 0 ? 5 : 0);
        const auto got = band_depth(cs).depth;
        for (std::size_t i = 0; i < 10; ++i) {
            std::size_t count = 0;
            for (std::size_t j = 0; j < 10; ++j) {
                for (std::size_t k = j + 1; k < 10; ++k) {
                    const std::vector<const CPF*> three{&cs[i], &cs[j], &cs[k]};
                    count += testutil::oracle_band_contains(cs[i], cs[j], cs[k], grid_for(three, 0), grid_for(three, 1))
                                 ? 1
                                 : 0;
                }
            }
            bd_mismatch += got[i] == static_cast<double>(count) / 45.0 ? 0 : 1;
        }
    }
    const double secs = clock.seconds();
    out.detail << "30 MBD samples, max |diff| " << worst << "; 10 BD samples, " << bd_mismatch << " mismatches, "
               << secs << " s";
    out.require(worst <= 1e-12, "MBD within 1e-12 of the counting oracle");
    out.require(bd_mismatch == 0, "BD equals the grid oracle exactly");
    out.require(secs < 60.0, "runtime < 60 s");
}

// 5. Empirical attainment function against the double loop.
void criterion5(Outcome& out)
{
    Stopwatch clock;
    Rng rng(derive_seed(5, 0, 0xACC));
    std::vector<CPF> cs;
    for (std::size_t i = 0; i < 20; ++i) {
        cs.push_back(testutil::random_cpf(rng, i, 1 + uniform_index(rng, 15), 2, i % 2 == 0 ? 8 : 0));
    }
    std::size_t mismatches = 0;
    for (int q = 0; q < 1000; ++q) {
        Point y{uniform01(rng) * 8.0 - 0.5, uniform01(rng) * 8.0 - 0.5};
        if (q % 4 == 0) {
            y = {std::floor(y[0]), std::floor(y[1])};
        }
        mismatches += eaf(cs, y) == testutil::oracle_eaf(cs, y) ? 0 : 1;
    }
    std::size_t violations = 0;
    for (int q = 0; q < 1000; ++q) {
        const Point a{uniform01(rng) * 8.0, uniform01(rng) * 8.0};
        const Point b{a[0] + uniform01(rng) * 3.0, a[1] + uniform01(rng) * 3.0};
        violations += eaf(cs, a) <= eaf(cs, b) ? 0 : 1;
    }
    const double secs = clock.seconds();
    out.detail << "1000 queries, " << mismatches << " mismatches, " << violations << " monotonicity violations, "
               << secs << " s";
    out.require(mismatches == 0, "eaf equals the oracle");
    out.require(violations == 0, "eaf monotone along dominance");
    out.require(secs < 10.0, "runtime < 10 s");
}

// 6. Benchmark variances by Monte Carlo.
void criterion6(Outcome& out)
{
    Stopwatch clock;
    struct Case {
        Benchmark b;
        std::vector<double> expect;
    };
    const std::vector<Case> cases{{mop2(), {0.0636, 0.0636}}, {zdt3(), {0.0833, 0.0461}}, {dtlz2m(), {0.0616, 0.0616}}};
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const Benchmark& b = cases[c].b;
        Rng rng(derive_seed(6, c, 0xACC));
        std::vector<double> mean(b.d, 0.0), m2(b.d, 0.0);
        std::vector<double> x(b.p);
        const std::size_t samples = 1000000;
        for (std::size_t i = 0; i < samples; ++i) {
            for (auto& v : x) {
                v = uniform01(rng);
            }
            const Point f = b.evaluate(x);
            for (std::size_t j = 0; j < b.d; ++j) {
                const double delta = f[j] - mean[j];
                mean[j] += delta / static_cast<double>(i + 1);
                m2[j] += delta * (f[j] - mean[j]);
            }
        }
        for (std::size_t j = 0; j < b.d; ++j) {
            const double v = m2[j] / static_cast<double>(samples - 1);
            out.detail << b.name << " f" << j + 1 << " " << v << "; ";
            out.require(std::abs(v - cases[c].expect[j]) <= 0.002,
                        b.name + " f" + std::to_string(j + 1) + " within 0.002");
        }
    }
    const double secs = clock.seconds();
    out.detail << secs << " s";
    out.require(secs < 30.0, "runtime < 30 s");
}

// 7. Sampler sanity: prior mean of sigma2 and a noiseless step fit.
void criterion7(Outcome& out)
{
    Stopwatch clock;
    const BartConfig cfg;
    Rng rng(derive_seed(7, 0, 0xACC));
    double sum = 0.0;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) {
        sum += sample_sigma2({}, cfg.nu, cfg.lambda, rng);
    }
    const double mean = sum / reps;
    out.detail << "sigma2 prior sample mean " << mean << " (rel. err " << mean / 0.0003 - 1.0 << ")";
    out.require(std::abs(mean / 0.0003 - 1.0) <= 0.01, "sigma2 prior mean within 1%");

    const std::size_t n = 200;
    Matrix x(n, 1);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        y[i] = x(i, 0) < 0.5 ? 0.0 : 1.0;
    }
    Rng fit_rng(derive_seed(7, 1, 0xACC));
    const auto draws = fit_bart(Domain::unit(1), x, y, cfg, fit_rng);
    double sse = 0.0;
    for (int g = 0; g <= 100; ++g) {
        const double xv[1] = {g / 100.0};
        double m = 0.0;
        for (const auto& d : draws) {
            m += eval_ensemble(d.ensemble, xv);
        }
        m /= static_cast<double>(draws.size());
        const double truth = xv[0] < 0.5 ? 0.0 : 1.0;
        sse += (m - truth) * (m - truth);
    }
    const double rmse = std::sqrt(sse / 101.0);
    const double secs = clock.seconds();
    out.detail << "; step RMSE " << rmse << " (limit 0.05); " << secs << " s";
    out.require(rmse < 0.05, "step-function RMSE < 0.05 * range");
    out.require(secs < 120.0, "runtime < 2 min");
}

// 8. MOP2 end to end through the command line.
void criterion8(Outcome& out)
{
    Stopwatch clock;
    const fs::path dir = scratch_dir("c8");
    const bool ok = run_cli("simulate --bench mop2 --n 128 --noise 0 --reps 1 --draws 500 --alpha-mbd 0.5 --threads 1 "
                            "--seed 8 --out \"" + (dir / "run").string() + "\"",
                            dir / "log.txt");
    out.require(ok, "simulate exits 0");
    if (!ok) {
        out.detail << slurp(dir / "log.txt");
        return;
    }
    double over = -1.0, under = -1.0;
    std::ifstream in(dir / "run" / "report.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string rep, method, target, o, u;
        std::getline(ss, rep, ',');
        std::getline(ss, method, ',');
        std::getline(ss, target, ',');
        std::getline(ss, o, ',');
        std::getline(ss, u, ',');
        if (method == "mbd" && target == "pf") {
            over = std::stod(o);
            under = std::stod(u);
        }
    }
    std::size_t outside_pf = 0, outside_ps = 0, pf_points = 0, ps_boxes = 0;
    for (const auto& entry : fs::directory_iterator(dir / "run" / "clouds")) {
        const Table t = read_table(entry.path());
        const std::string name = entry.path().filename().string();
        if (name.ends_with("_pf.csv")) {
            for (const auto& p : table_points(t)) {
                ++pf_points;
                outside_pf += std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0 && v <= 1.0; }) ? 0 : 1;
            }
        } else if (name.ends_with("_ps.csv")) {
            const auto los = t.numbered_columns("lo");
            const auto his = t.numbered_columns("hi");
            for (std::size_t i = 0; i < t.values.rows(); ++i) {
                ++ps_boxes;
                bool inside = true;
                for (std::size_t k = 0; k < los.size(); ++k) {
                    inside = inside && t.values(i, los[k]) >= 0.0 && t.values(i, his[k]) <= 1.0;
                }
                outside_ps += inside ? 0 : 1;
            }
        }
    }
    const double secs = clock.seconds();
    out.detail << "mbd PF overcoverage " << over << ", undercoverage " << under << "; " << outside_pf << "/" << pf_points
               << " PF points outside [0,1]^2; " << outside_ps << "/" << ps_boxes << " PS boxes outside [0,1]^2; "
               << secs << " s";
    out.require(over >= 0.0 && over < 0.10, "overcoverage < 0.10");
    out.require(under >= 0.0 && under < 0.10, "undercoverage < 0.10");
    out.require(pf_points > 0 && outside_pf == 0, "cloud points inside the unit objective box");
    out.require(ps_boxes > 0 && outside_ps == 0, "PS boxes inside [0,1]^2");
    out.require(secs < 600.0, "runtime < 10 min");
}

double median_seconds(const std::function<void()>& work)
{
    std::vector<double> t;
    for (int trial = 0; trial < 5; ++trial) {
        Stopwatch clock;
        work();
        t.push_back(clock.seconds());
    }
    std::sort(t.begin(), t.end());
    return t[2];
}

// 9. Scaling of the depth and random-sets steps.
void criterion9(Outcome& out)
{
    Rng rng(derive_seed(9, 0, 0xACC));
    const auto make = [&](std::size_t n, std::size_t k) {
        std::vector<CPF> cs;
        for (std::size_t i = 0; i < n; ++i) {
            cs.push_back(testutil::random_cpf(rng, i, k));
        }
        return cs;
    };
    const auto small = make(1000, 30);
    const auto big = make(2000, 30);
    volatile double sink = 0.0;
    const double t_small = median_seconds([&] { sink = sink + modified_band_depth(small, 201).depth[0]; });
    const double t_big = median_seconds([&] { sink = sink + modified_band_depth(big, 201).depth[0]; });
    const double mbd_ratio = t_big / t_small;

    const auto rs_small = make(1200, 20);
    const auto rs_big = make(2400, 20);
    std::size_t pts_small = 0, pts_big = 0;
    for (const auto& c : rs_small) {
        pts_small += c.size();
    }
    for (const auto& c : rs_big) {
        pts_big += c.size();
    }
    const double r_small = median_seconds([&] { sink = sink + static_cast<double>(pf_cloud_rs(rs_small, 0.25).points.size()); });
    const double r_big = median_seconds([&] { sink = sink + static_cast<double>(pf_cloud_rs(rs_big, 0.25).points.size()); });
    const double rs_ratio = r_big / r_small;
    out.detail << "MBD N 1000 -> 2000: " << t_small << " s -> " << t_big << " s (x" << mbd_ratio << "); RS points "
               << pts_small << " -> " << pts_big << ": " << r_small << " s -> " << r_big << " s (x" << rs_ratio << ")";
    out.require(mbd_ratio <= 2.4, "MBD ratio <= 2.4");
    out.require(rs_ratio <= 5.0, "RS ratio <= 5");
}

// 10. Byte-identical outputs across reruns and thread counts.
void criterion10(Outcome& out)
{
    const fs::path dir = scratch_dir("c10");
    const auto run_all = [&](const std::string& tag, int threads) {
        const fs::path d = dir / tag;
        fs::create_directories(d);
        const std::string t = " --threads " + std::to_string(threads);
        const auto q = [&](const std::string& name) { return "\"" + (d / name).string() + "\""; };
        bool ok = run_cli("generate --bench zdt3 --n 40 --noise 0.1 --seed 5 --out " + q("data.csv"), d / "log1.txt");
        ok = ok && run_cli("fit --data " + q("data.csv") + " --bench zdt3 --m 10 --burn 50 --draws 24 --seed 3 --out "
                               + q("draws.jsonl") + t,
                           d / "log2.txt");
        ok = ok && run_cli("extract --draws " + q("draws.jsonl") + " --out " + q("atlas.jsonl") + " --front "
                               + q("fronts.csv") + t,
                           d / "log3.txt");
        ok = ok && run_cli("uq --atlas " + q("atlas.jsonl") + " --method rs --alpha 0.25 --out " + q("rs") + t,
                           d / "log4.txt");
        ok = ok && run_cli("uq --atlas " + q("atlas.jsonl") + " --method mbd --alpha 0.5 --cuts 51 --out " + q("mbd") + t,
                           d / "log5.txt");
        ok = ok && run_cli("metrics --cloud " + q("mbd/pf_cloud.csv") + " --bench zdt3 --target pf --out "
                               + q("metrics.csv"),
                           d / "log6.txt");
        ok = ok && run_cli("simulate --bench mop2 --n 40 --reps 2 --draws 20 --burn 30 --mbd-cuts 21 --truth-points 100 "
                           "--seed 9 --out " + q("sim") + t,
                           d / "log7.txt");
        return ok;
    };
    const bool a = run_all("a", 1);
    const bool b = run_all("b", 3);
    const bool c = run_all("c", 3);
    out.require(a && b && c, "every command exits 0");
    std::size_t compared = 0, differing = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
        const std::string ext = entry.path().extension().string();
        if (!entry.is_regular_file() || (ext != ".csv" && ext != ".jsonl")) {
            continue;
        }
        const fs::path rel = fs::relative(entry.path(), dir / "a");
        const std::string ref = slurp(entry.path());
        for (const char* other : {"b", "c"}) {
            ++compared;
            if (slurp(dir / other / rel) != ref) {
                ++differing;
                out.detail << " differs: " << other << "/" << rel.string();
            }
        }
    }
    out.detail << compared << " file comparisons (1 vs 3 threads, rerun), " << differing << " differing";
    out.require(compared >= 20, "outputs were produced");
    out.require(differing == 0, "byte-identical outputs");
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <criterion 1..10> [path to mobart]\n";
        return 2;
    }
    const int which = std::atoi(argv[1]);
    cli_path = argc > 2 ? argv[2] : "mobart";
    const std::map<int, std::function<void(Outcome&)>> checks{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
    const auto it = checks.find(which);
    if (it == checks.end()) {
        std::cerr << "unknown criterion " << which << "\n";
        return 2;
    }
    Outcome out;
    try {
        it->second(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    std::cout << "criterion " << which << ": " << (out.pass ? "PASS" : "FAIL") << ": " << out.detail.str() << std::endl;
    return out.pass ? 0 : 1;
}

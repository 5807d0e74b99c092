#include "mobart/mobart.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mobart;

namespace {

void add_bart_flags(CLI::App* cmd, BartConfig& cfg)
{
    cmd->add_option("--m", cfg.m, "trees per output")->check(CLI::PositiveNumber);
    cmd->add_option("--kappa", cfg.kappa, "leaf prior shrinkage");
    cmd->add_option("--nu", cfg.nu, "error variance prior degrees of freedom");
    cmd->add_option("--lambda", cfg.lambda, "error variance prior scale");
    cmd->add_option("--cuts", cfg.n_cutpoints, "cutpoints per input");
    cmd->add_option("--min-leaf", cfg.min_leaf_obs, "minimum observations per leaf");
    cmd->add_option("--burn", cfg.n_burn, "burn-in sweeps");
    cmd->add_option("--draws", cfg.n_draws, "kept posterior draws");
    cmd->add_option("--seed", cfg.seed, "random seed");
}

nlohmann::json bart_json(const BartConfig& c)
{
    return {{"m", c.m},
            {"kappa", c.kappa},
            {"nu", c.nu},
            {"lambda", c.lambda},
            {"n_cutpoints", c.n_cutpoints},
            {"min_leaf_obs", c.min_leaf_obs},
            {"tree_prior_alpha", c.tree_prior_alpha},
            {"tree_prior_beta", c.tree_prior_beta},
            {"n_burn", c.n_burn},
            {"n_draws", c.n_draws},
            {"seed", c.seed}};
}

void write_table(const fs::path& path, const Table& t)
{
    auto out = open_output(path.string());
    write_csv(out, t);
}

Benchmark resolve_benchmark(const std::string& name, bool raw)
{
    Benchmark b = benchmark_by_name(name);
    return raw ? b : unit_scale(b);
}

struct GenerateArgs {
    std::string bench = "mop2";
    std::size_t n = 128;
    double noise = 0.0;
    std::size_t restarts = 5;
    std::uint64_t seed = 1;
    bool raw = false;
    std::string out;
};

void run_generate(const GenerateArgs& a)
{
    const Benchmark b = resolve_benchmark(a.bench, a.raw);
    Rng rng(a.seed);
    const Matrix design = design_on(b.domain, maximin_lhs(a.n, b.p, rng, a.restarts));
    write_table(a.out, dataset_table(generate_data(b, design, a.noise, rng)));
}

struct FitArgs {
    std::string data;
    std::string out;
    std::string bench;
    bool raw = false;
    std::vector<double> lo;
    std::vector<double> hi;
    std::size_t threads = 0;
    BartConfig cfg;
};

void run_fit(const FitArgs& a)
{
    std::optional<Domain> domain;
    if (!a.bench.empty()) {
        domain = resolve_benchmark(a.bench, a.raw).domain;
    } else if (!a.lo.empty() || !a.hi.empty()) {
        domain = Domain(a.lo, a.hi);
    }
    auto in = open_input(a.data);
    const Dataset data = dataset_from_table(read_csv(in), domain);
    const auto draws = fit_posterior(data, a.cfg, a.threads);
    auto out = open_output(a.out);
    for (const auto& d : draws) {
        out << draw_to_json(d).dump() << '\n';
    }
}

struct ExtractArgs {
    std::string draws;
    std::string out;
    std::string front;
    std::size_t threads = 0;
};

void run_extract(const ExtractArgs& a)
{
    auto in = open_input(a.draws);
    const auto draws = read_draws(in);
    std::vector<ImageAtlas> atlases(draws.size());
    std::vector<ParetoResult> fronts(draws.size());
    parallel_for(
        draws.size(),
        [&](std::size_t i) {
            atlases[i] = multi_cells(draws[i].me);
            if (!a.front.empty()) {
                fronts[i] = pf_ps(atlases[i]);
            }
        },
        a.threads);
    auto out = open_output(a.out);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        out << atlas_to_json(draws[i].draw_index, atlases[i]).dump() << '\n';
    }
    if (!a.front.empty()) {
        const std::size_t d = draws.empty() ? 0 : draws.front().me.d();
        Table t;
        t.header = numbered_names("f", d);
        t.header.push_back("draw_index");
        std::size_t rows = 0;
        for (const auto& f : fronts) {
            rows += f.front.size();
        }
        t.values = Matrix(rows, d + 1);
        std::size_t r = 0;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            for (const auto& p : fronts[i].front) {
                for (std::size_t k = 0; k < d; ++k) {
                    t.values(r, k) = p.objective[k];
                }
                t.values(r, d) = static_cast<double>(draws[i].draw_index);
                ++r;
            }
        }
        write_table(a.front, t);
    }
}

struct UqArgs {
    std::string atlas;
    std::string method = "rs";
    std::optional<double> alpha;
    std::size_t cuts = 201;
    std::string out;
    std::size_t threads = 0;
};

void run_uq(const UqArgs& a)
{
    auto in = open_input(a.atlas);
    auto records = read_atlases(in);
    std::vector<ImageAtlas> atlases(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].draw_index != i) {
            throw IntegrityError("atlas file: expected draw_index " + std::to_string(i) + " on line "
                                 + std::to_string(i + 1));
        }
        atlases[i] = std::move(records[i].atlas);
    }
    if (atlases.empty()) {
        throw std::invalid_argument("atlas file holds no draws");
    }
    std::vector<CPF> cpfs(atlases.size());
    parallel_for(
        atlases.size(), [&](std::size_t i) { cpfs[i] = make_cpf(i, pf_ps(atlases[i])); }, a.threads);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    const std::size_t d = atlases.front().domain.dim() == 0 ? 0 : atlases.front().d();
    PFCloud pf;
    if (a.method == "rs") {
        pf = pf_cloud_rs(cpfs, a.alpha.value_or(0.25));
        write_table(dir / "pf_cloud.csv", pf_cloud_table(pf, d, "eaf"));
    } else {
        const DepthResult depths = modified_band_depth(cpfs, a.cuts);
        pf = pf_cloud_mbd(cpfs, depths, a.alpha.value_or(0.5));
        write_table(dir / "pf_cloud.csv", pf_cloud_table(pf, d, "depth_rank"));
        Table t;
        t.header = {"draw_index", "depth"};
        t.values = Matrix(cpfs.size(), 2);
        for (std::size_t i = 0; i < cpfs.size(); ++i) {
            t.values(i, 0) = static_cast<double>(i);
            t.values(i, 1) = depths.depth[i];
        }
        write_table(dir / "depths.csv", t);
    }
    write_table(dir / "ps_cloud.csv", ps_cloud_table(ps_cloud(pf, atlases), atlases.front().domain.dim()));
}

struct MetricsArgs {
    std::string cloud;
    std::string truth;
    std::string bench;
    std::string target = "pf";
    bool raw = false;
    std::size_t truth_points = 1000;
    std::string out;
};

void run_metrics(const MetricsArgs& a)
{
    auto cloud_in = open_input(a.cloud);
    const PointSet cloud = table_points(read_csv(cloud_in));
    PointSet truth;
    if (!a.truth.empty()) {
        auto truth_in = open_input(a.truth);
        truth = table_points(read_csv(truth_in));
    } else if (!a.bench.empty()) {
        const Benchmark b = resolve_benchmark(a.bench, a.raw);
        truth = a.target == "ps" ? true_set(b, a.truth_points) : true_front(b, a.truth_points);
    } else {
        throw std::invalid_argument("metrics: give --truth or --bench");
    }
    const Coverage c = coverage(cloud, truth);
    Table t;
    t.header = {"overcoverage", "undercoverage"};
    t.values = Matrix::from_rows({{c.overcoverage, c.undercoverage}});
    if (a.out.empty()) {
        write_csv(std::cout, t);
    } else {
        write_table(a.out, t);
    }
}

struct SimulateArgs {
    Scenario s;
    std::string out;
};

void run_simulate(const SimulateArgs& a)
{
    const ScenarioReport report = run_scenario(a.s);
    const fs::path dir(a.out);
    fs::create_directories(dir / "clouds");

    {
        auto out = open_output((dir / "report.csv").string());
        out << "replicate,method,target,overcoverage,undercoverage,cloud_size\n";
        for (const auto& r : report.rows) {
            out << r.replicate << ',' << r.method << ',' << r.target << ',' << format_number(r.overcoverage) << ','
                << format_number(r.undercoverage) << ',' << r.cloud_size << '\n';
        }
    }
    {
        auto out = open_output((dir / "summary.csv").string());
        out << "method,target,median_overcoverage,median_undercoverage\n";
        for (const auto& r : summarize(report)) {
            out << r.method << ',' << r.target << ',' << format_number(r.median_overcoverage) << ','
                << format_number(r.median_undercoverage) << '\n';
        }
    }
    for (const auto& c : report.clouds) {
        const std::string stem = "rep" + std::to_string(c.replicate) + "_" + c.method;
        write_table(dir / "clouds" / (stem + "_pf.csv"),
                    pf_cloud_table(c.pf, report.d, c.method == "rs" ? "eaf" : "depth_rank"));
        write_table(dir / "clouds" / (stem + "_ps.csv"), ps_cloud_table(c.ps, report.p));
    }
    const nlohmann::json config = {{"benchmark", a.s.benchmark},
                                   {"n", a.s.n},
                                   {"noise_mult", a.s.noise_mult},
                                   {"replicates", a.s.replicates},
                                   {"alpha_rs", a.s.alpha_rs},
                                   {"alpha_mbd", a.s.alpha_mbd},
                                   {"mbd_cuts", a.s.mbd_cuts},
                                   {"truth_points", a.s.truth_points},
                                   {"lhs_restarts", a.s.lhs_restarts},
                                   {"seed", a.s.seed},
                                   {"bart", bart_json(a.s.bart)}};
    open_output((dir / "config.json").string()) << config.dump(2) << '\n';
    open_output((dir / "timings.json").string()) << nlohmann::json(report.seconds).dump(2) << '\n';
}

struct TurningArgs {
    TurningConfig tc;
    std::string out;
};

void run_turning_cmd(const TurningArgs& a)
{
    const TurningResult r = run_turning(a.tc);
    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_table(dir / "pf_cloud.csv", pf_cloud_table(r.pf, 2, "depth_rank"));
    write_table(dir / "ps_cloud.csv", ps_cloud_table(r.ps, 2));
    Table depths;
    depths.header = {"draw_index", "depth"};
    depths.values = Matrix(r.depths.depth.size(), 2);
    for (std::size_t i = 0; i < r.depths.depth.size(); ++i) {
        depths.values(i, 0) = static_cast<double>(i);
        depths.values(i, 1) = r.depths.depth[i];
    }
    write_table(dir / "depths.csv", depths);
    auto out = open_output((dir / "report.csv").string());
    out << "target,overcoverage,undercoverage\n";
    out << "pf," << format_number(r.pf_unit.overcoverage) << ',' << format_number(r.pf_unit.undercoverage) << '\n';
    out << "ps," << format_number(r.ps_unit.overcoverage) << ',' << format_number(r.ps_unit.undercoverage) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiobjective BART: fit, extract Pareto fronts and sets, quantify uncertainty"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "write a noisy benchmark dataset on a maximin LHS design");
    g->add_option("--bench", gen.bench, "mop2 | zdt3 | dtlz2m | turning");
    g->add_option("--n", gen.n, "sample size");
    g->add_option("--noise", gen.noise, "noise variance as a multiple of Var f_j");
    g->add_option("--restarts", gen.restarts, "LHS restarts");
    g->add_option("--seed", gen.seed, "random seed");
    g->add_flag("--raw", gen.raw, "raw benchmark units instead of the unit box");
    g->add_option("--out", gen.out, "dataset CSV")->required();

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "fit one BART model per output; write posterior draws");
    f->add_option("--data", fit.data, "dataset CSV with columns x1..xp,y1..yd")->required();
    f->add_option("--out", fit.out, "draws file (JSON lines)")->required();
    f->add_option("--bench", fit.bench, "take the input domain from this benchmark");
    f->add_flag("--raw", fit.raw, "with --bench: raw benchmark units");
    f->add_option("--domain-lo", fit.lo, "input domain lower corner")->delimiter(',');
    f->add_option("--domain-hi", fit.hi, "input domain upper corner")->delimiter(',');
    f->add_option("--threads", fit.threads, "worker threads (0 = all cores)");
    add_bart_flags(f, fit.cfg);

    ExtractArgs ex;
    auto* e = app.add_subcommand("extract", "exact image atlas of every posterior draw");
    e->add_option("--draws", ex.draws, "draws file")->required();
    e->add_option("--out", ex.out, "atlas file (JSON lines)")->required();
    e->add_option("--front", ex.front, "also write every draw's Pareto front to this CSV");
    e->add_option("--threads", ex.threads, "worker threads (0 = all cores)");

    UqArgs uq;
    auto* u = app.add_subcommand("uq", "Pareto front and set clouds from an atlas file");
    u->add_option("--atlas", uq.atlas, "atlas file")->required();
    u->add_option("--method", uq.method, "rs | mbd")->check(CLI::IsMember({"rs", "mbd"}));
    u->add_option("--alpha", uq.alpha, "band width (rs) or deepest fraction (mbd)");
    u->add_option("--cuts", uq.cuts, "cuts per axis for mbd");
    u->add_option("--out", uq.out, "output directory")->required();
    u->add_option("--threads", uq.threads, "worker threads (0 = all cores)");

    MetricsArgs me;
    auto* mt = app.add_subcommand("metrics", "over- and undercoverage of a cloud against a truth set");
    mt->add_option("--cloud", me.cloud, "cloud CSV (points or boxes)")->required();
    mt->add_option("--truth", me.truth, "truth CSV");
    mt->add_option("--bench", me.bench, "use this benchmark's true front or set");
    mt->add_option("--target", me.target, "pf | ps")->check(CLI::IsMember({"pf", "ps"}));
    mt->add_flag("--raw", me.raw, "with --bench: raw benchmark units");
    mt->add_option("--truth-points", me.truth_points, "truth discretization");
    mt->add_option("--out", me.out, "output CSV (default stdout)");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "run a benchmark scenario end to end");
    s->add_option("--bench", sim.s.benchmark, "mop2 | zdt3 | dtlz2m | turning");
    s->add_option("--n", sim.s.n, "sample size");
    s->add_option("--noise", sim.s.noise_mult, "noise variance as a multiple of Var f_j");
    s->add_option("--reps", sim.s.replicates, "replicates");
    s->add_option("--draws", sim.s.bart.n_draws, "posterior draws");
    s->add_option("--burn", sim.s.bart.n_burn, "burn-in sweeps");
    s->add_option("--alpha-rs", sim.s.alpha_rs, "random-sets band width");
    s->add_option("--alpha-mbd", sim.s.alpha_mbd, "deepest fraction for band depth");
    s->add_option("--mbd-cuts", sim.s.mbd_cuts, "cuts per axis for band depth");
    s->add_option("--truth-points", sim.s.truth_points, "truth discretization");
    s->add_option("--seed", sim.s.seed, "random seed");
    s->add_option("--threads", sim.s.threads, "worker threads (0 = all cores)");
    s->add_option("--out", sim.out, "output directory")->required();

    TurningArgs tu;
    auto* t = app.add_subcommand("turning", "turning-cost study on log costs with band depth");
    t->add_option("--n", tu.tc.n, "sample size");
    t->add_option("--draws", tu.tc.draws, "posterior draws");
    t->add_option("--burn", tu.tc.burn, "burn-in sweeps");
    t->add_option("--alpha", tu.tc.alpha, "deepest fraction");
    t->add_option("--cuts", tu.tc.mbd_cuts, "cuts per axis for band depth");
    t->add_option("--seed", tu.tc.seed, "random seed");
    t->add_option("--threads", tu.tc.threads, "worker threads (0 = all cores)");
    t->add_option("--out", tu.out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (g->parsed()) {
            run_generate(gen);
        } else if (f->parsed()) {
            run_fit(fit);
        } else if (e->parsed()) {
            run_extract(ex);
        } else if (u->parsed()) {
            run_uq(uq);
        } else if (mt->parsed()) {
            run_metrics(me);
        } else if (s->parsed()) {
            run_simulate(sim);
        } else if (t->parsed()) {
            run_turning_cmd(tu);
        }
    } catch (const std::exception& ex_) {
        std::cerr << "mobart: error: " << ex_.what() << '\n';
        return 1;
    }
    return 0;
}

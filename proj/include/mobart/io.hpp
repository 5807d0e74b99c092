#ifndef MOBART_IO_HPP
#define MOBART_IO_HPP

#include "mobart/atlas.hpp"
#include "mobart/attainment.hpp"
#include "mobart/bart.hpp"
#include "mobart/error.hpp"
#include "mobart/matrix.hpp"
#include "mobart/tree.hpp"

#include <json.hpp>

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace mobart {

using json = nlohmann::json;

// Split variables are 1-based in files (x1..xp) and 0-based in memory.
inline json tree_to_json(const Tree& tree, int id = 0)
{
    const auto& n = tree.node(id);
    if (n.is_leaf()) {
        return {{"mu", n.mu}};
    }
    return {{"var", n.rule.var + 1},
            {"cut", n.rule.cut},
            {"left", tree_to_json(tree, n.left)},
            {"right", tree_to_json(tree, n.right)}};
}

namespace detail {

    inline void tree_from_json(const json& j, Tree& tree, int id)
    {
        if (j.contains("mu")) {
            tree.set_mu(id, j.at("mu").get<double>());
            return;
        }
        const auto var = j.at("var").get<std::size_t>();
        if (var == 0) {
            throw std::invalid_argument("tree JSON: var is 1-based");
        }
        const auto [l, r] = tree.grow(id, {var - 1, j.at("cut").get<double>()}, 0.0, 0.0);
        tree_from_json(j.at("left"), tree, l);
        tree_from_json(j.at("right"), tree, r);
    }

} // namespace detail

inline Tree tree_from_json(const json& j)
{
    Tree tree;
    detail::tree_from_json(j, tree, 0);
    return tree;
}

inline json domain_to_json(const Domain& d) { return {{"lo", d.lo()}, {"hi", d.hi()}}; }

inline Domain domain_from_json(const json& j)
{
    return {j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>()};
}

inline json ensemble_to_json(const Ensemble& e)
{
    json trees = json::array();
    for (const auto& t : e.trees()) {
        trees.push_back(tree_to_json(t));
    }
    return {{"domain", domain_to_json(e.domain())},
            {"center", e.transform().center},
            {"scale", e.transform().scale},
            {"trees", std::move(trees)}};
}

inline Ensemble ensemble_from_json(const json& j)
{
    std::vector<Tree> trees;
    for (const auto& t : j.at("trees")) {
        trees.push_back(tree_from_json(t));
    }
    return {domain_from_json(j.at("domain")), std::move(trees),
            OutputTransform{j.at("center").get<double>(), j.at("scale").get<double>()}};
}

inline json draw_to_json(const PosteriorDraw& draw)
{
    json outputs = json::array();
    for (const auto& e : draw.me.outputs()) {
        outputs.push_back(ensemble_to_json(e));
    }
    return {{"draw_index", draw.draw_index}, {"sigma2", draw.sigma2}, {"outputs", std::move(outputs)}};
}

inline PosteriorDraw draw_from_json(const json& j)
{
    std::vector<Ensemble> outputs;
    for (const auto& e : j.at("outputs")) {
        outputs.push_back(ensemble_from_json(e));
    }
    return {j.at("draw_index").get<std::size_t>(), MultiEnsemble(std::move(outputs)),
            j.at("sigma2").get<std::vector<double>>()};
}

// Box upper faces are closed exactly where they meet the domain's upper face.
inline json atlas_to_json(std::size_t draw_index, const ImageAtlas& atlas)
{
    json cells = json::array();
    for (const auto& c : atlas.cells) {
        cells.push_back({{"alpha", c.alpha}, {"box", {{"lo", c.box.lo()}, {"hi", c.box.hi()}}}});
    }
    return {{"draw_index", draw_index}, {"domain", domain_to_json(atlas.domain)}, {"cells", std::move(cells)}};
}

struct AtlasRecord {
    std::size_t draw_index = 0;
    ImageAtlas atlas;
};

inline AtlasRecord atlas_from_json(const json& j)
{
    AtlasRecord rec{j.at("draw_index").get<std::size_t>(), {domain_from_json(j.at("domain")), {}}};
    const auto& dom = rec.atlas.domain;
    for (const auto& c : j.at("cells")) {
        auto lo = c.at("box").at("lo").get<std::vector<double>>();
        auto hi = c.at("box").at("hi").get<std::vector<double>>();
        if (lo.size() != dom.dim() || hi.size() != dom.dim()) {
            throw std::invalid_argument("atlas JSON: box dimension does not match the domain");
        }
        std::vector<std::uint8_t> closed(dom.dim());
        for (std::size_t k = 0; k < dom.dim(); ++k) {
            closed[k] = hi[k] == dom.hi(k) ? 1 : 0;
        }
        rec.atlas.cells.push_back({c.at("alpha").get<std::vector<double>>(), Box(std::move(lo), std::move(hi), std::move(closed))});
    }
    return rec;
}

// JSON-lines: one document per non-empty line.
template <class F>
void read_json_lines(std::istream& in, F&& on_document)
{
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            on_document(json::parse(line));
        } catch (const json::exception& e) {
            throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
        }
    }
}

inline std::vector<PosteriorDraw> read_draws(std::istream& in)
{
    std::vector<PosteriorDraw> out;
    read_json_lines(in, [&](const json& j) { out.push_back(draw_from_json(j)); });
    return out;
}

inline std::vector<AtlasRecord> read_atlases(std::istream& in)
{
    std::vector<AtlasRecord> out;
    read_json_lines(in, [&](const json& j) { out.push_back(atlas_from_json(j)); });
    return out;
}

// Shortest representation that round-trips.
inline std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

struct Table {
    std::vector<std::string> header;
    Matrix values;

    [[nodiscard]] std::size_t column_index(std::string_view name) const
    {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) {
                return k;
            }
        }
        throw std::invalid_argument("CSV: no column named " + std::string(name));
    }

    [[nodiscard]] bool has_column(std::string_view name) const
    {
        for (const auto& h : header) {
            if (h == name) {
                return true;
            }
        }
        return false;
    }

    // Columns prefix1, prefix2, ... in order, stopping at the first gap.
    [[nodiscard]] std::vector<std::size_t> numbered_columns(std::string_view prefix) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 1;; ++k) {
            const std::string name = std::string(prefix) + std::to_string(k);
            if (!has_column(name)) {
                return out;
            }
            out.push_back(column_index(name));
        }
    }

    [[nodiscard]] Matrix select(std::span<const std::size_t> columns) const
    {
        Matrix out(values.rows(), columns.size());
        for (std::size_t i = 0; i < values.rows(); ++i) {
            for (std::size_t k = 0; k < columns.size(); ++k) {
                out(i, k) = values(i, columns[k]);
            }
        }
        return out;
    }
};

namespace detail {

    inline std::vector<std::string_view> split_commas(std::string_view line)
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find(',', start);
            auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
                field.remove_prefix(1);
            }
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
                field.remove_suffix(1);
            }
            out.push_back(field);
            if (pos == std::string_view::npos) {
                return out;
            }
            start = pos + 1;
        }
    }

} // namespace detail

// Numeric CSV with one header row.
inline Table read_csv(std::istream& in)
{
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("CSV: missing header row");
    }
    for (auto f : detail::split_commas(line)) {
        t.header.emplace_back(f);
    }
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto fields = detail::split_commas(line);
        if (fields.size() != t.header.size()) {
            throw std::invalid_argument("CSV line " + std::to_string(number) + ": expected "
                                        + std::to_string(t.header.size()) + " fields");
        }
        for (auto f : fields) {
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
                throw std::invalid_argument("CSV line " + std::to_string(number) + ": not a number: "
                                            + std::string(f));
            }
            data.push_back(v);
        }
        ++rows;
    }
    t.values = Matrix(rows, t.header.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < t.header.size(); ++k) {
            t.values(i, k) = data[i * t.header.size() + k];
        }
    }
    return t;
}

inline void write_csv_row(std::ostream& out, std::span<const double> row)
{
    for (std::size_t k = 0; k < row.size(); ++k) {
        out << (k ? "," : "") << format_number(row[k]);
    }
    out << '\n';
}

inline void write_csv(std::ostream& out, const Table& t)
{
    for (std::size_t k = 0; k < t.header.size(); ++k) {
        out << (k ? "," : "") << t.header[k];
    }
    out << '\n';
    for (std::size_t i = 0; i < t.values.rows(); ++i) {
        write_csv_row(out, t.values.row(i));
    }
}

inline std::vector<std::string> numbered_names(std::string_view prefix, std::size_t count)
{
    std::vector<std::string> out;
    for (std::size_t k = 1; k <= count; ++k) {
        out.push_back(std::string(prefix) + std::to_string(k));
    }
    return out;
}

// Dataset CSV: x1..xp, y1..yd.
inline Table dataset_table(const Dataset& data)
{
    Table t;
    t.header = numbered_names("x", data.p());
    const auto ys = numbered_names("y", data.d());
    t.header.insert(t.header.end(), ys.begin(), ys.end());
    t.values = Matrix(data.n(), data.p() + data.d());
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t k = 0; k < data.p(); ++k) {
            t.values(i, k) = data.inputs(i, k);
        }
        for (std::size_t k = 0; k < data.d(); ++k) {
            t.values(i, data.p() + k) = data.outputs(i, k);
        }
    }
    return t;
}

inline Dataset dataset_from_table(const Table& t, std::optional<Domain> domain = std::nullopt)
{
    const auto xs = t.numbered_columns("x");
    const auto ys = t.numbered_columns("y");
    if (xs.empty() || ys.empty()) {
        throw std::invalid_argument("dataset CSV: need columns x1..xp and y1..yd");
    }
    Matrix inputs = t.select(xs);
    Matrix outputs = t.select(ys);
    Domain dom = domain ? *domain : observed_domain(inputs);
    return {std::move(dom), std::move(inputs), std::move(outputs)};
}

// PF cloud CSV: f1..fd, <score_name>, draw_index.
inline Table pf_cloud_table(const PFCloud& cloud, std::size_t d, const std::string& score_name)
{
    Table t;
    t.header = numbered_names("f", d);
    t.header.push_back(score_name);
    t.header.push_back("draw_index");
    t.values = Matrix(cloud.points.size(), d + 2);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        for (std::size_t k = 0; k < d; ++k) {
            t.values(i, k) = p.objective[k];
        }
        t.values(i, d) = p.score;
        t.values(i, d + 1) = static_cast<double>(p.draw_index);
    }
    return t;
}

// PS boxes CSV: lo1..lop, hi1..hip, draw_index.
inline Table ps_cloud_table(const PSCloud& ps, std::size_t p)
{
    Table t;
    t.header = numbered_names("lo", p);
    const auto his = numbered_names("hi", p);
    t.header.insert(t.header.end(), his.begin(), his.end());
    t.header.push_back("draw_index");
    t.values = Matrix(ps.boxes.size(), 2 * p + 1);
    for (std::size_t i = 0; i < ps.boxes.size(); ++i) {
        const auto& b = ps.boxes[i];
        for (std::size_t k = 0; k < p; ++k) {
            t.values(i, k) = b.box.lo(k);
            t.values(i, p + k) = b.box.hi(k);
        }
        t.values(i, 2 * p) = static_cast<double>(b.draw_index);
    }
    return t;
}

inline Table points_table(const PointSet& points, std::string_view prefix)
{
    Table t;
    const std::size_t d = points.empty() ? 0 : points.front().size();
    t.header = numbered_names(prefix, d);
    t.values = Matrix(points.size(), d);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            t.values(i, k) = points[i][k];
        }
    }
    return t;
}

// Points for metric computation from any cloud or truth CSV: box files
// (lo*/hi*) give box centroids, otherwise the f*, x* or all columns are used.
inline PointSet table_points(const Table& t)
{
    const auto los = t.numbered_columns("lo");
    const auto his = t.numbered_columns("hi");
    if (!los.empty() && los.size() == his.size()) {
        PointSet out(t.values.rows(), Point(los.size()));
        for (std::size_t i = 0; i < t.values.rows(); ++i) {
            for (std::size_t k = 0; k < los.size(); ++k) {
                out[i][k] = 0.5 * (t.values(i, los[k]) + t.values(i, his[k]));
            }
        }
        return out;
    }
    std::vector<std::size_t> cols = t.numbered_columns("f");
    if (cols.empty()) {
        cols = t.numbered_columns("x");
    }
    if (cols.empty()) {
        for (std::size_t k = 0; k < t.header.size(); ++k) {
            cols.push_back(k);
        }
    }
    PointSet out(t.values.rows(), Point(cols.size()));
    for (std::size_t i = 0; i < t.values.rows(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            out[i][k] = t.values(i, cols[k]);
        }
    }
    return out;
}

inline std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return in;
}

inline std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

} // namespace mobart

#endif

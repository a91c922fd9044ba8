#include "gmp/io.hpp"

#include "gmp/error.hpp"
#include "gmp/format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gmp {

const std::string& Table::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) {
            return v;
        }
    }
    throw InvalidArgument("table has no '" + key + "' metadata");
}

void write_table(std::ostream& out, const Table& table) {
    for (const auto& [k, v] : table.metadata) {
        out << "# " << k << ": " << v << '\n';
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_real(row[c]);
        }
        out << '\n';
    }
}

Table read_table(std::istream& in) {
    Table table;
    std::string line;
    bool have_columns = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            if (have_columns) {
                throw InvalidArgument("line " + std::to_string(line_no) +
                                      ": metadata after the column header");
            }
            const auto colon = line.find(": ");
            if (colon == std::string::npos || colon < 2) {
                throw InvalidArgument("line " + std::to_string(line_no) + ": malformed metadata");
            }
            table.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (!have_columns) {
            table.columns = std::move(fields);
            have_columns = true;
            continue;
        }
        if (fields.size() != table.columns.size()) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.columns.size()) + " fields");
        }
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_real(fields[c], row[c])) {
                throw InvalidArgument("line " + std::to_string(line_no) + ": bad number '" +
                                      fields[c] + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_columns) {
        throw InvalidArgument("table has no column header");
    }
    return table;
}

void save_table(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write " + path.string());
    }
    write_table(out, table);
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

Table load_table_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open " + path.string());
    }
    return read_table(in);
}

std::vector<std::pair<std::string, std::string>> standard_header(const std::string& process,
                                                                 int depth, std::uint64_t seed,
                                                                 const std::string& tree) {
    return {{"process", process},
            {"depth", std::to_string(depth)},
            {"seed", std::to_string(seed)},
            {"tree", tree},
            {"version", kVersion}};
}

namespace {

void append_path(Table& table, double id, std::span<const double> times,
                 std::span<const double> values) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        table.rows.push_back({id, times[i], values[i]});
    }
}

} // namespace

Table paths_to_table(std::span<const PathSample> paths,
                     std::vector<std::pair<std::string, std::string>> header) {
    Table table{std::move(header), {"path_id", "t", "value"}, {}};
    for (const PathSample& p : paths) {
        append_path(table, static_cast<double>(p.scope.path_id), p.times, p.values);
    }
    return table;
}

Table paths_to_table(const PathBatch& batch,
                     std::vector<std::pair<std::string, std::string>> header) {
    Table table{std::move(header), {"path_id", "t", "value"}, {}};
    table.rows.reserve(batch.paths * batch.times.size());
    for (std::size_t p = 0; p < batch.paths; ++p) {
        append_path(table, static_cast<double>(batch.first_path_id + p), batch.times, batch.row(p));
    }
    return table;
}

std::vector<PathSample> paths_from_table(const Table& table) {
    if (table.columns != std::vector<std::string>{"path_id", "t", "value"}) {
        throw InvalidArgument("not a path table (expected columns path_id,t,value)");
    }
    const int level = std::stoi(table.meta("depth"));
    const std::uint64_t seed = std::stoull(table.meta("seed"));
    std::vector<PathSample> paths;
    for (const auto& row : table.rows) {
        const auto id = static_cast<std::uint64_t>(row[0]);
        if (paths.empty() || paths.back().scope.path_id != id) {
            PathSample s;
            s.level = level;
            s.scope = {seed, id};
            paths.push_back(std::move(s));
        }
        paths.back().times.push_back(row[1]);
        paths.back().values.push_back(row[2]);
    }
    return paths;
}

Table tree_to_table(const SupportTree& tree, int levels,
                    std::vector<std::pair<std::string, std::string>> header) {
    if (levels < 0 || levels > tree.depth()) {
        throw InvalidArgument("tree dump: level exceeds tree depth");
    }
    Table table{std::move(header), {"n", "k", "l", "m", "r"}, {}};
    for (int n = 1; n <= levels; ++n) {
        const std::int64_t count = std::int64_t{1} << (n - 1);
        for (std::int64_t k = 0; k < count; ++k) {
            const Support s = tree.node(n, k);
            table.rows.push_back({static_cast<double>(n), static_cast<double>(k), s.l, s.m, s.r});
        }
    }
    return table;
}

Table basis_to_table(const Basis& basis, std::vector<std::pair<std::string, std::string>> header) {
    Table table{std::move(header), {"n", "k", "l", "m", "r", "L", "R"}, {}};
    for (std::size_t flat = 0; flat < basis.size(); ++flat) {
        const BasisElement& e = basis.element(static_cast<std::int64_t>(flat));
        table.rows.push_back({static_cast<double>(e.index.n), static_cast<double>(e.index.k),
                              e.support.l, e.support.m, e.support.r, e.L, e.R});
    }
    return table;
}

Table basis_curves_to_table(const Basis& basis, int resolution,
                            std::vector<std::pair<std::string, std::string>> header) {
    if (resolution < 1) {
        throw InvalidArgument("curve resolution must be positive");
    }
    Table table{std::move(header), {"t"}, {}};
    for (std::size_t flat = 0; flat < basis.size(); ++flat) {
        const NodeIndex idx = basis.element(static_cast<std::int64_t>(flat)).index;
        table.columns.push_back("psi_" + std::to_string(idx.n) + "_" + std::to_string(idx.k));
    }
    for (int i = 0; i <= resolution; ++i) {
        const double t = static_cast<double>(i) / resolution;
        std::vector<double> row{t};
        for (std::size_t flat = 0; flat < basis.size(); ++flat) {
            row.push_back(psi(basis.spec(), basis.element(static_cast<std::int64_t>(flat)), t));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table covtable_to_table(std::span<const CovErrorRow> rows,
                        std::vector<std::pair<std::string, std::string>> header) {
    Table table{std::move(header), {"N", "sup_error", "mean_error", "decreasing"}, {}};
    for (const CovErrorRow& r : rows) {
        table.rows.push_back({static_cast<double>(r.level), r.sup_error, r.mean_error,
                              r.decreasing ? 1.0 : 0.0});
    }
    return table;
}

std::vector<CovErrorRow> covtable_from_table(const Table& table) {
    if (table.columns != std::vector<std::string>{"N", "sup_error", "mean_error", "decreasing"}) {
        throw InvalidArgument("not a covariance table");
    }
    std::vector<CovErrorRow> rows;
    for (const auto& r : table.rows) {
        rows.push_back({static_cast<int>(r[0]), r[1], r[2], r[3] != 0.0});
    }
    return rows;
}

} // namespace gmp

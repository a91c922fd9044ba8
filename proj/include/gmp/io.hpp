#pragma once

#include "gmp/basis.hpp"
#include "gmp/kernels.hpp"
#include "gmp/measures.hpp"
#include "gmp/sampler.hpp"
#include "gmp/tree.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gmp {

inline constexpr const char* kVersion = "0.1.0";

/// Delimited text table:
///
///     # key: value          (metadata, in order)
///     col_a,col_b,...       (column names)
///     1,0.5,...             (rows, shortest round-trip decimal)
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Value of a metadata key; throws InvalidArgument when missing.
    const std::string& meta(const std::string& key) const;

    friend bool operator==(const Table&, const Table&) = default;
};

void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in);

void save_table(const std::filesystem::path& path, const Table& table);
Table load_table_file(const std::filesystem::path& path);

/// Standard header: process label, depth, seed, tree description, version.
std::vector<std::pair<std::string, std::string>> standard_header(const std::string& process,
                                                                 int depth, std::uint64_t seed,
                                                                 const std::string& tree);

/// Columns (path_id, t, value); rows ordered by path id, then time.
Table paths_to_table(std::span<const PathSample> paths,
                     std::vector<std::pair<std::string, std::string>> header);
Table paths_to_table(const PathBatch& batch,
                     std::vector<std::pair<std::string, std::string>> header);

/// Inverse of paths_to_table. Level and seed come from the "depth" and
/// "seed" metadata.
std::vector<PathSample> paths_from_table(const Table& table);

/// Columns (n, k, l, m, r) for levels 1..N.
Table tree_to_table(const SupportTree& tree, int levels,
                    std::vector<std::pair<std::string, std::string>> header);

/// Columns (n, k, l, m, r, L, R), including the root row (0, 0).
Table basis_to_table(const Basis& basis, std::vector<std::pair<std::string, std::string>> header);

/// Column t followed by one column "psi_<n>_<k>" per element, sampled at
/// resolution + 1 uniform points.
Table basis_curves_to_table(const Basis& basis, int resolution,
                            std::vector<std::pair<std::string, std::string>> header);

/// Columns (N, sup_error, mean_error, decreasing).
Table covtable_to_table(std::span<const CovErrorRow> rows,
                        std::vector<std::pair<std::string, std::string>> header);
std::vector<CovErrorRow> covtable_from_table(const Table& table);

} // namespace gmp

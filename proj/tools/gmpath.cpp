// gmpath: sample, verify and inspect Gaussian Markov processes built from
// a multiresolution Schauder basis.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 degenerate process.

#include "gmp/basis.hpp"
#include "gmp/error.hpp"
#include "gmp/format.hpp"
#include "gmp/fpt.hpp"
#include "gmp/io.hpp"
#include "gmp/kernels.hpp"
#include "gmp/measures.hpp"
#include "gmp/process.hpp"
#include "gmp/tree.hpp"
#include "gmp/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

struct RunConfig {
    std::string process = "wiener";
    int depth = 8;
    std::uint64_t seed = 0;
    std::size_t paths = 1;
    std::string output = "-";
    double split = 0.5;
    int threads = 0;
};

struct SampleFlags {
    std::string method = "synthesize";
};

struct CurveFlags {
    int resolution = 0;
};

struct CovFlags {
    int min_depth = 0;
    int grid = 129;
};

struct FptFlags {
    double boundary = 1.0;
    int coarse = 4;
    double band = 0.5;
    int bins = 20;
    bool compare = false;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("GMPATH_SEED");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    std::uint64_t value = 0;
    const std::string text(env);
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw gmp::InvalidArgument("GMPATH_SEED must be a non-negative integer");
    }
    return value;
}

gmp::SupportTree make_tree(const RunConfig& cfg) {
    if (cfg.depth < 0 || cfg.depth > gmp::SupportTree::kMaxDepth) {
        throw gmp::InvalidArgument("depth must be in 0.." +
                                   std::to_string(gmp::SupportTree::kMaxDepth));
    }
    if (!(cfg.split > 0.0 && cfg.split < 1.0)) {
        throw gmp::InvalidArgument("split ratio must lie strictly inside (0, 1)");
    }
    if (cfg.split == 0.5) {
        return gmp::uniform_tree(cfg.depth);
    }
    const double s = cfg.split;
    return gmp::general_tree(
        cfg.depth, [s](double l, double r) { return l + s * (r - l); },
        "split:" + gmp::format_real(s));
}

void emit(const RunConfig& cfg, const gmp::Table& table) {
    if (cfg.output == "-") {
        gmp::write_table(std::cout, table);
        std::cout.flush();
    } else {
        gmp::save_table(cfg.output, table);
    }
}

std::ostream& open_report(const RunConfig& cfg, std::ofstream& file) {
    if (cfg.output == "-") {
        return std::cout;
    }
    file.open(cfg.output);
    if (!file) {
        throw gmp::InvalidArgument("cannot write " + cfg.output);
    }
    return file;
}

int cmd_sample(const RunConfig& cfg, const SampleFlags& flags) {
    const gmp::ProcessSpec spec = gmp::parse_process(cfg.process);
    const gmp::SupportTree tree = make_tree(cfg);
    gmp::PathBatch batch;
    if (flags.method == "synthesize") {
        const gmp::Basis basis(spec, tree, cfg.depth);
        const auto plan =
            gmp::make_synthesis_plan(basis, gmp::prefix_order_times(tree, cfg.depth));
        batch = gmp::parallel::synthesize(plan, cfg.seed, 0, cfg.paths);
    } else {
        const gmp::Basis root(spec, tree, 0);
        const auto plan = gmp::make_synthesis_plan(root, gmp::prefix_order_times(tree, 0));
        batch = gmp::parallel::synthesize(plan, cfg.seed, 0, cfg.paths);
        for (int j = 0; j < cfg.depth; ++j) {
            batch = gmp::parallel::refine(gmp::make_refinement_plan(spec, tree, j), batch);
        }
        if (batch.degenerate_cells > 0) {
            std::cerr << "gmpath: note: " << batch.degenerate_cells
                      << " cells had a flat right increment (variance 0)\n";
        }
    }
    auto header = gmp::standard_header(spec.label(), cfg.depth, cfg.seed, tree.description());
    header.emplace_back("method", flags.method);
    header.emplace_back("paths", std::to_string(cfg.paths));
    emit(cfg, gmp::paths_to_table(batch, std::move(header)));
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    const gmp::ProcessSpec spec = gmp::parse_process(cfg.process);
    const gmp::SupportTree tree = make_tree(cfg);
    const auto results = gmp::run_invariant_suite(spec, tree, cfg.depth);
    std::ofstream file;
    std::ostream& out = open_report(cfg, file);
    for (const auto& [key, value] :
         gmp::standard_header(spec.label(), cfg.depth, cfg.seed, tree.description())) {
        out << "# " << key << ": " << value << '\n';
    }
    bool all = true;
    const gmp::CheckResult* worst = nullptr;
    double worst_ratio = -1.0;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << gmp::format_real(r.measured)
            << " tolerance=" << gmp::format_real(r.tolerance);
        if (!r.worst.empty()) {
            out << " worst=" << r.worst;
        }
        out << '\n';
        all = all && r.passed;
        const double ratio = r.tolerance > 0.0 ? r.measured / r.tolerance : r.measured;
        if (!r.passed && ratio > worst_ratio) {
            worst_ratio = ratio;
            worst = &r;
        }
    }
    out.flush();
    if (!all) {
        std::cerr << "gmpath: verification failed; worst offender: " << worst->name;
        if (!worst->worst.empty()) {
            std::cerr << " at " << worst->worst;
        }
        std::cerr << '\n';
        return kExitVerify;
    }
    return kExitOk;
}

int cmd_covtable(const RunConfig& cfg, const CovFlags& flags) {
    const gmp::ProcessSpec spec = gmp::parse_process(cfg.process);
    const gmp::SupportTree tree = make_tree(cfg);
    if (flags.min_depth < 0 || flags.min_depth > cfg.depth) {
        throw gmp::InvalidArgument("--min-depth must be in 0..depth");
    }
    if (flags.grid < 1) {
        throw gmp::InvalidArgument("--grid must be positive");
    }
    const auto grid = gmp::uniform_grid(flags.grid);
    const auto rows = gmp::covariance_error_table(spec, tree, flags.min_depth, cfg.depth, grid);
    auto header = gmp::standard_header(spec.label(), cfg.depth, cfg.seed, tree.description());
    header.emplace_back("grid", "i/" + std::to_string(flags.grid) + ", i=0.." +
                                    std::to_string(flags.grid - 1));
    emit(cfg, gmp::covtable_to_table(rows, std::move(header)));
    return kExitOk;
}

gmp::Table fpt_table(const gmp::FptReport& report) {
    gmp::Table t;
    t.columns = {"bin_lo", "bin_hi", "count"};
    for (std::size_t b = 0; b < report.histogram.size(); ++b) {
        t.rows.push_back({report.bin_edges[b], report.bin_edges[b + 1],
                          static_cast<double>(report.histogram[b])});
    }
    return t;
}

int cmd_fpt(const RunConfig& cfg, const FptFlags& flags) {
    const gmp::ProcessSpec spec = gmp::parse_process(cfg.process);
    const gmp::SupportTree tree = make_tree(cfg);
    gmp::FptConfig fc;
    fc.boundary = flags.boundary;
    fc.coarse_level = std::min(flags.coarse, cfg.depth);
    fc.target_level = cfg.depth;
    fc.paths = cfg.paths;
    fc.band = flags.band;
    fc.seed = cfg.seed;
    fc.bins = flags.bins;
    const gmp::FptReport report = gmp::run_fpt_adaptive(spec, tree, fc);
    gmp::Table table = fpt_table(report);
    table.metadata = gmp::standard_header(spec.label(), cfg.depth, cfg.seed, tree.description());
    auto& meta = table.metadata;
    meta.emplace_back("boundary", gmp::format_real(fc.boundary));
    meta.emplace_back("coarse_depth", std::to_string(fc.coarse_level));
    meta.emplace_back("band", gmp::format_real(fc.band));
    meta.emplace_back("paths", std::to_string(fc.paths));
    meta.emplace_back("crossings", std::to_string(report.crossings));
    meta.emplace_back("survival", gmp::format_real(report.survival));
    meta.emplace_back("survival_se", gmp::format_real(report.survival_se));
    meta.emplace_back("refined_fraction", gmp::format_real(report.refined_fraction));
    if (flags.compare) {
        const gmp::FptReport full = gmp::run_fpt_exhaustive(spec, tree, fc);
        meta.emplace_back("exhaustive_crossings", std::to_string(full.crossings));
        meta.emplace_back("exhaustive_survival", gmp::format_real(full.survival));
    }
    emit(cfg, table);
    return kExitOk;
}

int cmd_basis_dump(const RunConfig& cfg, const CurveFlags& flags) {
    const gmp::ProcessSpec spec = gmp::parse_process(cfg.process);
    const gmp::SupportTree tree = make_tree(cfg);
    const gmp::Basis basis(spec, tree, cfg.depth);
    auto header = gmp::standard_header(spec.label(), cfg.depth, cfg.seed, tree.description());
    if (flags.resolution > 0) {
        header.emplace_back("resolution", std::to_string(flags.resolution));
        emit(cfg, gmp::basis_curves_to_table(basis, flags.resolution, std::move(header)));
    } else {
        emit(cfg, gmp::basis_to_table(basis, std::move(header)));
    }
    return kExitOk;
}

int cmd_tree_dump(const RunConfig& cfg) {
    const gmp::SupportTree tree = make_tree(cfg);
    emit(cfg, gmp::tree_to_table(tree, cfg.depth,
                                 gmp::standard_header(cfg.process, cfg.depth, cfg.seed,
                                                      tree.description())));
    return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool with_paths) {
    sub->add_option("--process,-p", cfg.process, "wiener | ou:<alpha> | custom:<f-table>,<g-table>");
    sub->add_option("--depth,-N", cfg.depth, "tree depth N (resolution 2^-N)")
        ->check(CLI::Range(0, gmp::SupportTree::kMaxDepth));
    sub->add_option("--seed,-s", cfg.seed, "master seed (default 0, or $GMPATH_SEED)");
    sub->add_option("--output,-o", cfg.output, "output file, '-' for stdout");
    sub->add_option("--split", cfg.split, "split ratio of every support (0.5 = dyadic)");
    sub->add_option("--threads,-j", cfg.threads, "OpenMP threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    if (with_paths) {
        sub->add_option("--paths,-M", cfg.paths, "number of paths")->check(CLI::PositiveNumber);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian Markov process path construction via a multiresolution basis"};
    app.set_version_flag("--version", std::string(gmp::kVersion));
    app.require_subcommand(1);

    RunConfig cfg;
    SampleFlags sample_flags;
    CurveFlags curve_flags;
    CovFlags cov_flags;
    FptFlags fpt_flags;
    try {
        cfg.seed = default_seed();
    } catch (const gmp::Error& e) {
        std::cerr << "gmpath: " << e.what() << '\n';
        return kExitConfig;
    }

    auto* sample = app.add_subcommand("sample", "synthesize M paths on the level-N grid");
    add_common(sample, cfg, true);
    sample->add_option("--method", sample_flags.method, "synthesize | refine")
        ->check(CLI::IsMember({"synthesize", "refine"}));

    auto* verify = app.add_subcommand("verify", "run the basis and sampler invariant suites");
    add_common(verify, cfg, false);

    auto* covtable = app.add_subcommand("covtable", "partial-sum covariance error per level");
    add_common(covtable, cfg, false);
    covtable->add_option("--min-depth", cov_flags.min_depth, "first level of the table");
    covtable->add_option("--grid", cov_flags.grid, "grid points i/G, i = 0..G-1");

    auto* fpt = app.add_subcommand("fpt", "adaptive first-passage demo");
    add_common(fpt, cfg, true);
    fpt->add_option("--boundary,-b", fpt_flags.boundary, "crossing level b > 0");
    fpt->add_option("--coarse", fpt_flags.coarse, "coarse synthesis depth");
    fpt->add_option("--band", fpt_flags.band, "proximity band (inf refines everything)");
    fpt->add_option("--bins", fpt_flags.bins, "histogram bins over [0, 1]");
    fpt->add_flag("--compare", fpt_flags.compare, "also run exhaustive full-depth synthesis");

    auto* basis_dump = app.add_subcommand("basis-dump", "list (n, k, l, m, r, L, R)");
    add_common(basis_dump, cfg, false);
    basis_dump->add_option("--curves", curve_flags.resolution,
                           "sample every Psi at this many uniform steps instead");

    auto* tree_dump = app.add_subcommand("tree-dump", "list the supports (n, k, l, m, r)");
    add_common(tree_dump, cfg, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (cfg.threads > 0) {
            gmp::set_threads(cfg.threads);
        }
        if (*sample) return cmd_sample(cfg, sample_flags);
        if (*verify) return cmd_verify(cfg);
        if (*covtable) return cmd_covtable(cfg, cov_flags);
        if (*fpt) return cmd_fpt(cfg, fpt_flags);
        if (*basis_dump) return cmd_basis_dump(cfg, curve_flags);
        if (*tree_dump) return cmd_tree_dump(cfg);
    } catch (const gmp::DegenerateIncrement& e) {
        std::cerr << "gmpath: degenerate process: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const gmp::Error& e) {
        std::cerr << "gmpath: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "gmpath: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

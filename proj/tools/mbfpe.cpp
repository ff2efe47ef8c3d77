// mbfpe: similarity solutions of Fokker-Planck equations with moving boundaries.
//
//   mbfpe presets
//   mbfpe info III
//   mbfpe eval   --preset fig1 --out fig1.csv
//   mbfpe verify --config runs.cfg --cells 800 --paths 200000
//   mbfpe sample --preset fig1 --paths 200000 --seed 7 --out hist.csv
//
// Exit status: 0 when every requested check passes, 1 when one fails,
// 2 for usage or configuration errors.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "mbfpe/commands.hpp"
#include "mbfpe/errors.hpp"

namespace {

struct Common {
    std::string preset;
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cells;
    std::optional<std::size_t> paths;
};

void add_common(CLI::App* cmd, Common& c) {
    auto* preset = cmd->add_option("--preset", c.preset, "Built-in preset name (see 'presets')");
    auto* config = cmd->add_option("--config", c.config, "Config file with one [section] per run");
    preset->excludes(config);
    cmd->add_option("--out", c.out, "Output file (default: standard output)");
    cmd->add_option("--seed", c.seed, "Random seed for path sampling");
    cmd->add_option("--cells", c.cells, "PDE grid cells");
    cmd->add_option("--paths", c.paths, "Number of sample paths");
}

std::vector<mbfpe::RunConfig> resolve(const Common& c) {
    std::vector<mbfpe::RunConfig> runs;
    if (!c.preset.empty())
        runs.push_back(mbfpe::config_from_preset(mbfpe::figure_preset(c.preset)));
    else if (!c.config.empty())
        runs = mbfpe::load_config_file(c.config);
    else
        throw CLI::ValidationError("one of --preset or --config is required");
    for (auto& r : runs) {
        if (c.seed) r.seed = *c.seed;
        if (c.cells) r.cells = *c.cells;
        if (c.paths) r.paths = *c.paths;
    }
    return runs;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// Writes to --out when given, else to the section's output key, else stdout.
template <class Body>
void with_output(const std::string& cli_out, const mbfpe::RunConfig& run, bool append, Body&& body) {
    const std::string& path = !cli_out.empty() ? cli_out : run.output;
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream file(path, append ? std::ios::app : std::ios::trunc);
    if (!file) throw mbfpe::ConfigError(path, 0, "cannot open output file");
    body(file);
}

int cmd_eval(const Common& c) {
    const auto runs = resolve(c);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto sol = mbfpe::build_solution(runs[i].alpha, mbfpe::to_solution_class(runs[i]));
        with_output(c.out, runs[i], i > 0 && !c.out.empty(),
                    [&](std::ostream& os) { mbfpe::write_eval_csv(os, sol, runs[i]); });
    }
    return 0;
}

int cmd_verify(const Common& c) {
    const auto runs = resolve(c);
    bool ok = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        const auto sol = mbfpe::build_solution(run.alpha, mbfpe::to_solution_class(run));
        auto opts = mbfpe::verify_options(run);
        opts.workers = worker_count();
        std::cout << "[" << run.name << "]\n";
        const mbfpe::Report report = mbfpe::run_verification(sol, opts);
        report.print(std::cout);
        ok = ok && report.all_passed();
        if (!c.out.empty()) {
            std::ofstream diag(c.out, i > 0 ? std::ios::app : std::ios::trunc);
            if (!diag) throw mbfpe::ConfigError(c.out, 0, "cannot open output file");
            mbfpe::run_attractor(sol, run.cells, run.log_time_span, run.ds, &diag);
        }
    }
    return ok ? 0 : 1;
}

int cmd_sample(const Common& c) {
    const auto runs = resolve(c);
    bool ok = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        const auto sol = mbfpe::build_solution(run.alpha, mbfpe::to_solution_class(run));
        const mbfpe::SampleRun s = mbfpe::run_sample(sol, run, worker_count());
        with_output(c.out, run, i > 0 && !c.out.empty(),
                    [&](std::ostream& os) { mbfpe::write_histogram_csv(os, s.histogram); });
        const bool pass = s.distance <= run.sde_l1_tol;
        std::cerr << (pass ? "PASS " : "FAIL ") << run.name << " histogram L1=" << s.distance
                  << " threshold<=" << run.sde_l1_tol << " t " << s.t_start << " -> " << s.t_end
                  << " reflections=" << s.reflections << '\n';
        ok = ok && pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Similarity solutions of Fokker-Planck equations with moving boundaries"};
    app.require_subcommand(1);

    Common eval_opts, verify_opts, sample_opts;
    auto* eval = app.add_subcommand("eval", "Write t,x,W,J,D1,D2 rows as CSV");
    add_common(eval, eval_opts);
    auto* verify = app.add_subcommand("verify", "Run the analytic, PDE and path checks");
    add_common(verify, verify_opts);
    auto* sample = app.add_subcommand("sample", "Propagate sample paths and write a histogram CSV");
    add_common(sample, sample_opts);

    std::string info_class;
    auto* info = app.add_subcommand("info", "Describe a solution class");
    info->add_option("class", info_class, "I, II or III")->required()->check(CLI::IsMember({"I", "II", "III"}));
    auto* presets = app.add_subcommand("presets", "List the built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*eval) return cmd_eval(eval_opts);
        if (*verify) return cmd_verify(verify_opts);
        if (*sample) return cmd_sample(sample_opts);
        if (*info) {
            const auto kind = info_class == "I" ? mbfpe::ClassKind::I
                              : info_class == "II" ? mbfpe::ClassKind::II
                                                   : mbfpe::ClassKind::III;
            std::cout << mbfpe::class_info(kind);
            return 0;
        }
        if (*presets) {
            std::cout << mbfpe::presets_listing();
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const mbfpe::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const mbfpe::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

#include <ris/cli.hpp>

#include <ris/codebook.hpp>
#include <ris/config.hpp>
#include <ris/experiment.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ris {

namespace {

struct RunOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::vector<std::string> settings;
};

struct CodebookOptions
{
    int elements = 16;
    int size = 8;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    std::string out;
};

class usage_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

void add_run_options(CLI::App* cmd, RunOptions& opts)
{
    cmd->add_option("--config", opts.config_path, "key = value configuration file");
    cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--threads", opts.threads, "worker threads, 0 = auto (fallback: RIS_SIM_THREADS)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--set", opts.settings, "override a config key, KEY=VALUE (repeatable)");
}

ExperimentConfig resolve_config(const RunOptions& opts)
{
    ExperimentConfig cfg;
    try {
        if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
        for (const auto& s : opts.settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw config_error("--set expects KEY=VALUE, got '" + s + "'");
            const auto key = s.substr(0, eq);
            if ((key == "seed" && opts.seed) || (key == "output_dir" && opts.out_dir) ||
                (key == "threads" && opts.threads)) {
                throw config_error("--set " + key + " conflicts with the dedicated --" +
                                   (key == "output_dir" ? std::string("out") : key) + " flag");
            }
            apply_setting(cfg, key, s.substr(eq + 1));
        }
        if (opts.seed) cfg.seed = *opts.seed;
        if (opts.out_dir) cfg.output_dir = *opts.out_dir;
        if (opts.threads) {
            cfg.threads = *opts.threads;
        } else if (const char* env = std::getenv("RIS_SIM_THREADS")) {
            apply_setting(cfg, "threads", env);
        }
        cfg.validate();
    } catch (const config_error& e) {
        throw usage_error(e.what());
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    return cfg;
}

std::filesystem::path output_file(const ExperimentConfig& cfg, const std::string& name)
{
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
}

int run_overhead(const ExperimentConfig& cfg, std::ostream& out)
{
    for (const auto& result : run_overhead_experiment(cfg)) {
        const auto path = output_file(cfg, "overhead_q" + std::to_string(result.codebook_size) + ".csv");
        emit_csv(overhead_csv(result.series), path);
        out << path.string() << ": Q=" << result.codebook_size
            << " zero-overhead from frame " << result.series.zero_frame() << '\n';
    }
    return 0;
}

int run_rate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto result = run_rate_experiment(cfg);
    const auto path = output_file(cfg, "rate.csv");
    emit_csv(rate_csv(result), path);
    for (std::size_t i = 0; i < result.codebook_sizes.size(); ++i) {
        if (result.converged_fraction[i] < 1.0) {
            err << "warning: Q=" << result.codebook_sizes[i] << " converged in "
                << result.converged_fraction[i] * 100 << "% of realizations within the frame budget\n";
        }
    }
    out << path.string() << '\n';
    return 0;
}

int run_complexity(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto path = output_file(cfg, "complexity.csv");
    emit_csv(complexity_csv(run_complexity_experiment(cfg)), path);
    out << path.string() << '\n';
    return 0;
}

int run_gen_codebook(const CodebookOptions& opts, std::ostream& out, std::ostream& err)
{
    err << "n = " << opts.elements << "\nq = " << opts.size << "\ngamma = " << format_real(opts.amplitude)
        << "\nseed = " << opts.seed << "\nout = " << opts.out << '\n';
    if (opts.elements < 1 || opts.size < 1 || !(opts.amplitude >= 0 && opts.amplitude <= 1)) {
        throw usage_error("gen-codebook: n and q must be >= 1 and gamma in [0, 1]");
    }
    auto rng = derive_stream(opts.seed, {0});
    const auto cb = generate_random_codebook(opts.elements, opts.size, opts.amplitude, rng);
    save_codebook(opts.out, cb);
    out << opts.out << '\n';
    return 0;
}

} // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"RIS passive beamforming simulator", "ris_sim"};
    app.require_subcommand(1);

    RunOptions overhead_opts, rate_opts, complexity_opts;
    CodebookOptions cb_opts;

    auto* overhead = app.add_subcommand("overhead", "search overhead versus time (per-Q CSV)");
    add_run_options(overhead, overhead_opts);
    auto* rate = app.add_subcommand("rate", "converged effective rate per scheme versus Q");
    add_run_options(rate, rate_opts);
    auto* complexity = app.add_subcommand("complexity", "complexity counts per scheme versus Q");
    add_run_options(complexity, complexity_opts);

    auto* gen = app.add_subcommand("gen-codebook", "write a random reflection-pattern codebook");
    gen->add_option("--n", cb_opts.elements, "RIS elements")->required();
    gen->add_option("--q", cb_opts.size, "codebook size")->required();
    gen->add_option("--gamma", cb_opts.amplitude, "reflection amplitude");
    gen->add_option("--seed", cb_opts.seed, "seed");
    gen->add_option("--out", cb_opts.out, "output file")->required();

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ris_sim: " << e.what() << '\n';
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen_codebook(cb_opts, out, err);

        const RunOptions& opts = overhead->parsed() ? overhead_opts : rate->parsed() ? rate_opts : complexity_opts;
        const auto cfg = resolve_config(opts);
        err << describe_config(cfg);
        if (overhead->parsed()) return run_overhead(cfg, out);
        if (rate->parsed()) return run_rate(cfg, out, err);
        return run_complexity(cfg, out);
    } catch (const usage_error& e) {
        err << "ris_sim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "ris_sim: " << e.what() << '\n';
        return 1;
    }
}

} // namespace ris

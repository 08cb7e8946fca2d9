#pragma once

#include <ris/channel.hpp>
#include <ris/dpbf.hpp>
#include <ris/geometry.hpp>
#include <ris/types.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ris {

/// Every knob of a simulation run. Defaults reproduce the reference scenario:
/// 16 TX antennas, 16 RIS elements, 1 mW, T = 500 slots, 10 MHz at -160 dBm/Hz.
struct ExperimentConfig
{
    ScenarioKind scenario = ScenarioKind::area_uniform;
    int tx_antennas = 16;
    int ris_elements = 16;
    std::vector<int> q_list{100, 200};
    double tx_power_watt = 0.001;
    int coherence_slots = 500;
    int frames = 4000;
    int realizations = 100;
    int ao_iterations = 3;
    std::uint64_t seed = 1;

    Position3D tx_position{18, 24, 50};
    Position3D ris_position{0, 0, 50};
    double radius = 15;
    double rx_height = 1;

    double noise_psd_dbm_hz = -160;
    double bandwidth_hz = 10e6;
    ChannelParams<double> channel; // noise_power is derived from psd and bandwidth
    double reflection_amplitude = 1;
    bool shared_codebook = false;

    int convergence_window = 100;
    int measure_frames = 200;
    int matched_overhead_slots = 1;
    SearchScope search_scope = SearchScope::unmapped_only;

    int threads = 0; // 0 = hardware concurrency
    std::string output_dir = ".";

    void validate() const;
    Scenario<double> scenario_spec() const;
    ChannelParams<double> channel_params() const; // with noise power resolved
};

/// Per-frame averages across realizations of the overhead experiment.
struct TimeSeries
{
    std::vector<double> mean_q1;    // search overhead; 0 on matched frames
    std::vector<double> mean_tau;
    std::vector<double> match_fraction;
    std::vector<double> mean_effective_rate; // D-PBF
    std::vector<double> sd_q1;               // across realizations

    std::size_t frames() const { return mean_q1.size(); }

    /// 1-based frame from which mean Q1 stays exactly 0 to the end, or 0 if never.
    long zero_frame() const;

    /// Means of mean_q1 over consecutive non-overlapping windows.
    std::vector<double> window_means(std::size_t window) const;

    /// Standard error of each window mean, treating the realizations x frames
    /// samples of a window as independent.
    std::vector<double> window_standard_errors(std::size_t window, int realizations) const;
};

struct OverheadResult
{
    int codebook_size = 0;
    TimeSeries series;
};

struct RateRow
{
    int codebook_size = 0;
    std::string scheme;
    double mean_rate = 0;
    double mean_tau = 0;
    double mean_effective_rate = 0;
    double se_effective_rate = 0; // standard error across realizations
};

struct RateResult
{
    std::vector<RateRow> rows;
    std::vector<int> codebook_sizes;
    std::vector<double> converged_fraction;   // per Q, realizations that converged in budget
    std::vector<double> mean_convergence_frame; // per Q, over converged realizations

    const RateRow& row(int codebook_size, const std::string& scheme) const;
};

struct ComplexityRow
{
    int codebook_size = 0;
    std::string scheme;
    double complexity_count = 0;
};

/// Deterministic stream derived from the master seed and a tag path, e.g.
/// {realization} for codebooks or {realization, frame} for arrivals.
std::mt19937_64 derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

int resolve_threads(int requested);

/// Runs `body(i)` for i in [0, count) over `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

OverheadResult run_overhead_experiment(const ExperimentConfig& cfg, int codebook_size);
std::vector<OverheadResult> run_overhead_experiment(const ExperimentConfig& cfg);
RateResult run_rate_experiment(const ExperimentConfig& cfg);
std::vector<ComplexityRow> run_complexity_experiment(const ExperimentConfig& cfg);

std::string overhead_csv(const TimeSeries& series);
std::string rate_csv(const RateResult& result);
std::string complexity_csv(const std::vector<ComplexityRow>& rows);

void emit_csv(const std::string& contents, const std::filesystem::path& path);

} // namespace ris

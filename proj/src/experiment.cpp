#include <ris/experiment.hpp>

#include <ris/baselines.hpp>
#include <ris/codebook.hpp>
#include <ris/dpbf.hpp>
#include <ris/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ris {

namespace {

enum StreamTag : std::uint64_t
{
    codebook_tag = 1,
    frame_tag = 2,
};

struct Realization
{
    Codebook<double> codebook;
    DirectionDatabase<double> database;
    double threshold;
};

Realization start_realization(const ExperimentConfig& cfg, int codebook_size, int index)
{
    auto rng = derive_stream(cfg.seed, {codebook_tag, static_cast<std::uint64_t>(codebook_size),
                                        cfg.shared_codebook ? 0u : static_cast<std::uint64_t>(index)});
    return {generate_random_codebook(cfg.ris_elements, codebook_size, cfg.reflection_amplitude, rng),
            DirectionDatabase<double>(codebook_size), angle_threshold(codebook_size)};
}

/// Everything drawn for one RX arrival. The channel is drawn on demand from the
/// same per-frame stream, right after the position.
class Frame
{
public:
    Frame(const ExperimentConfig& cfg, const Scenario<double>& scenario,
          const ChannelParams<double>& params, int realization, long frame)
        : cfg_(cfg), params_(params),
          rng_(derive_stream(cfg.seed, {frame_tag, static_cast<std::uint64_t>(realization),
                                        static_cast<std::uint64_t>(frame)})),
          arrival_(next_arrival(scenario, frame, rng_))
    {
    }

    double angle() const { return arrival_.angle; }

    const ChannelSet<double>& channel()
    {
        if (!channel_) {
            channel_ = synthesize_channels(cfg_.tx_position, cfg_.ris_position, arrival_.position, params_,
                                           cfg_.tx_antennas, cfg_.ris_elements, rng_);
        }
        return *channel_;
    }

    const LinkGains<double>& gains()
    {
        if (!gains_) {
            beamformer_ = default_tx_beamformer(channel(), cfg_.tx_power_watt);
            gains_ = link_gains(channel(), beamformer_);
        }
        return *gains_;
    }

    std::mt19937_64& rng()
    {
        channel();
        return rng_;
    }

private:
    const ExperimentConfig& cfg_;
    const ChannelParams<double>& params_;
    std::mt19937_64 rng_;
    RxArrival<double> arrival_;
    std::optional<ChannelSet<double>> channel_;
    BeamformingVector<double> beamformer_;
    std::optional<LinkGains<double>> gains_;
};

double rate_of(double power, const ChannelParams<double>& params)
{
    return achievable_rate(power, params.noise_power);
}

} // namespace

void ExperimentConfig::validate() const
{
    if (tx_antennas < 1 || ris_elements < 1) throw invalid_parameter("m and n must be >= 1");
    if (q_list.empty()) throw invalid_parameter("q_list must not be empty");
    for (int q : q_list) {
        if (q < 1) throw invalid_parameter("every q in q_list must be >= 1");
    }
    if (!(tx_power_watt > 0)) throw invalid_parameter("tx_power_watt must be > 0");
    if (coherence_slots < 1) throw invalid_parameter("coherence_slots must be >= 1");
    if (frames < 1) throw invalid_parameter("frames must be >= 1");
    if (realizations < 1) throw invalid_parameter("realizations must be >= 1");
    if (ao_iterations < 1) throw invalid_parameter("ao_iterations must be >= 1");
    if (convergence_window < 1) throw invalid_parameter("convergence_window must be >= 1");
    if (measure_frames < 1) throw invalid_parameter("measure_frames must be >= 1");
    if (matched_overhead_slots < 0) throw invalid_parameter("matched_overhead_slots must be >= 0");
    if (threads < 0) throw invalid_parameter("threads must be >= 0");
    if (!(reflection_amplitude >= 0 && reflection_amplitude <= 1)) {
        throw invalid_parameter("reflection_amplitude must lie in [0, 1]");
    }
    if (!(bandwidth_hz > 0)) throw invalid_parameter("bandwidth_hz must be > 0");
    if (!tx_position.allFinite()) throw invalid_parameter("tx_position must be finite");
    scenario_spec().validate();
    channel_params().validate();
}

Scenario<double> ExperimentConfig::scenario_spec() const
{
    return {scenario, ris_position, radius, rx_height};
}

ChannelParams<double> ExperimentConfig::channel_params() const
{
    auto p = channel;
    p.noise_power = noise_power(noise_psd_dbm_hz, bandwidth_hz);
    return p;
}

long TimeSeries::zero_frame() const
{
    long first = 0;
    for (std::size_t f = mean_q1.size(); f-- > 0;) {
        if (mean_q1[f] != 0.0) break;
        first = static_cast<long>(f) + 1;
    }
    return first;
}

std::vector<double> TimeSeries::window_means(std::size_t window) const
{
    std::vector<double> out;
    if (window == 0) return out;
    for (std::size_t b = 0; b + window <= mean_q1.size(); b += window) {
        double sum = 0;
        for (std::size_t f = b; f < b + window; ++f) sum += mean_q1[f];
        out.push_back(sum / static_cast<double>(window));
    }
    return out;
}

std::vector<double> TimeSeries::window_standard_errors(std::size_t window, int realizations) const
{
    std::vector<double> out;
    if (window == 0 || realizations < 1) return out;
    for (std::size_t b = 0; b + window <= sd_q1.size(); b += window) {
        double var = 0;
        for (std::size_t f = b; f < b + window; ++f) var += sd_q1[f] * sd_q1[f];
        var /= static_cast<double>(window);
        out.push_back(std::sqrt(var / (static_cast<double>(window) * realizations)));
    }
    return out;
}

const RateRow& RateResult::row(int codebook_size, const std::string& scheme) const
{
    for (const auto& r : rows) {
        if (r.codebook_size == codebook_size && r.scheme == scheme) return r;
    }
    throw std::out_of_range("no rate row for Q=" + std::to_string(codebook_size) + " scheme=" + scheme);
}

std::mt19937_64 derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 * (path.size() + 1));
    const auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master);
    for (auto p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

int resolve_threads(int requested)
{
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body)
{
    threads = std::max(1, std::min(resolve_threads(threads), count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

OverheadResult run_overhead_experiment(const ExperimentConfig& cfg, int codebook_size)
{
    cfg.validate();
    if (codebook_size < 1) throw invalid_parameter("codebook size must be >= 1");
    const auto scenario = cfg.scenario_spec();
    const auto params = cfg.channel_params();
    const OverheadModel overhead{cfg.matched_overhead_slots};
    const auto frames = static_cast<std::size_t>(cfg.frames);

    struct Trace
    {
        std::vector<int> q1;
        std::vector<int> tau;
        std::vector<char> matched;
        std::vector<double> effective_rate;
    };
    std::vector<Trace> traces(static_cast<std::size_t>(cfg.realizations));

    parallel_for(cfg.realizations, cfg.threads, [&](int r) {
        auto state = start_realization(cfg, codebook_size, r);
        Trace trace;
        trace.q1.resize(frames);
        trace.tau.resize(frames);
        trace.matched.resize(frames);
        trace.effective_rate.resize(frames);
        for (std::size_t f = 0; f < frames; ++f) {
            Frame frame(cfg, scenario, params, r, static_cast<long>(f));
            const auto outcome = dpbf_select_with(state.database, state.codebook, frame.angle(),
                                                  state.threshold, [&] { return frame.gains(); }, cfg.search_scope);
            const int tau = std::min(per_frame_overhead(outcome, overhead), cfg.coherence_slots);
            const double power = frame.gains().power(state.codebook.at_id(outcome.chosen_id));
            trace.q1[f] = outcome.search_overhead();
            trace.tau[f] = tau;
            trace.matched[f] = outcome.matched;
            trace.effective_rate[f] = effective_rate(rate_of(power, params), tau, cfg.coherence_slots);
        }
        traces[static_cast<std::size_t>(r)] = std::move(trace);
    });

    OverheadResult result;
    result.codebook_size = codebook_size;
    auto& s = result.series;
    s.mean_q1.assign(frames, 0.0);
    s.mean_tau.assign(frames, 0.0);
    s.match_fraction.assign(frames, 0.0);
    s.mean_effective_rate.assign(frames, 0.0);
    for (const auto& t : traces) {
        for (std::size_t f = 0; f < frames; ++f) {
            s.mean_q1[f] += t.q1[f];
            s.mean_tau[f] += t.tau[f];
            s.match_fraction[f] += t.matched[f];
            s.mean_effective_rate[f] += t.effective_rate[f];
        }
    }
    const double n = static_cast<double>(cfg.realizations);
    for (std::size_t f = 0; f < frames; ++f) {
        s.mean_q1[f] /= n;
        s.mean_tau[f] /= n;
        s.match_fraction[f] /= n;
        s.mean_effective_rate[f] /= n;
    }
    s.sd_q1.assign(frames, 0.0);
    if (cfg.realizations > 1) {
        for (const auto& t : traces) {
            for (std::size_t f = 0; f < frames; ++f) {
                const double d = t.q1[f] - s.mean_q1[f];
                s.sd_q1[f] += d * d;
            }
        }
        for (auto& v : s.sd_q1) v = std::sqrt(v / (n - 1));
    }
    return result;
}

std::vector<OverheadResult> run_overhead_experiment(const ExperimentConfig& cfg)
{
    std::vector<OverheadResult> out;
    for (int q : cfg.q_list) out.push_back(run_overhead_experiment(cfg, q));
    return out;
}

RateResult run_rate_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto scenario = cfg.scenario_spec();
    const auto params = cfg.channel_params();
    const OverheadModel overhead{cfg.matched_overhead_slots};
    static const std::vector<std::string> schemes{"dpbf", "exhaustive", "ce", "random"};

    struct Sums
    {
        double rate[4] = {};
        double tau[4] = {};
        double effective[4] = {};
        bool converged = false;
        long convergence_frame = 0;
    };

    RateResult result;
    for (int q : cfg.q_list) {
        std::vector<Sums> sums(static_cast<std::size_t>(cfg.realizations));
        const int exhaustive_tau = std::min(q, cfg.coherence_slots);
        const int ce_tau = std::min(cfg.ris_elements, cfg.coherence_slots);

        parallel_for(cfg.realizations, cfg.threads, [&](int r) {
            auto state = start_realization(cfg, q, r);
            Sums acc;
            long f = 0;
            int run = 0;
            for (; f < cfg.frames && run < cfg.convergence_window; ++f) {
                Frame frame(cfg, scenario, params, r, f);
                const auto outcome = dpbf_select_with(state.database, state.codebook, frame.angle(),
                                                      state.threshold, [&] { return frame.gains(); }, cfg.search_scope);
                run = outcome.searched() ? 0 : run + 1;
            }
            acc.converged = run >= cfg.convergence_window;
            acc.convergence_frame = f;

            const auto record = [&](int scheme, double power, int tau) {
                const double rate = rate_of(power, params);
                acc.rate[scheme] += rate;
                acc.tau[scheme] += tau;
                acc.effective[scheme] += effective_rate(rate, tau, cfg.coherence_slots);
            };

            for (int k = 0; k < cfg.measure_frames; ++k, ++f) {
                Frame frame(cfg, scenario, params, r, f);
                const auto& gains = frame.gains();
                const auto outcome = dpbf_select_with(state.database, state.codebook, frame.angle(),
                                                      state.threshold, [&] { return gains; }, cfg.search_scope);
                record(0, gains.power(state.codebook.at_id(outcome.chosen_id)),
                       std::min(per_frame_overhead(outcome, overhead), cfg.coherence_slots));

                const auto best = exhaustive_cb_pbf(gains, state.codebook);
                record(1, gains.power(state.codebook.at_id(best.id)), exhaustive_tau);

                const auto ao = ce_pbf_ao(frame.channel(), cfg.tx_power_watt, cfg.ao_iterations);
                record(2, ao.objective_trace.back(), ce_tau);

                const auto pick = random_pbf(state.codebook, frame.rng());
                record(3, gains.power(state.codebook.at_id(pick.id)), pick.overhead);
            }
            sums[static_cast<std::size_t>(r)] = acc;
        });

        const double samples = static_cast<double>(cfg.realizations) * cfg.measure_frames;
        for (int s = 0; s < 4; ++s) {
            RateRow row;
            row.codebook_size = q;
            row.scheme = schemes[static_cast<std::size_t>(s)];
            for (const auto& acc : sums) {
                row.mean_rate += acc.rate[s];
                row.mean_tau += acc.tau[s];
                row.mean_effective_rate += acc.effective[s];
            }
            row.mean_rate /= samples;
            row.mean_tau /= samples;
            row.mean_effective_rate /= samples;
            if (cfg.realizations > 1) {
                double ss = 0;
                for (const auto& acc : sums) {
                    const double d = acc.effective[s] / cfg.measure_frames - row.mean_effective_rate;
                    ss += d * d;
                }
                row.se_effective_rate = std::sqrt(ss / (cfg.realizations - 1) / cfg.realizations);
            }
            result.rows.push_back(row);
        }
        int converged = 0;
        double frame_sum = 0;
        for (const auto& acc : sums) {
            if (acc.converged) {
                ++converged;
                frame_sum += static_cast<double>(acc.convergence_frame);
            }
        }
        result.codebook_sizes.push_back(q);
        result.converged_fraction.push_back(static_cast<double>(converged) / cfg.realizations);
        result.mean_convergence_frame.push_back(converged > 0 ? frame_sum / converged : 0.0);
    }
    return result;
}

std::vector<ComplexityRow> run_complexity_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<ComplexityRow> rows;
    const double ce = ce_complexity(cfg.ris_elements, cfg.ao_iterations);
    for (int q : cfg.q_list) {
        rows.push_back({q, "dpbf", dpbf_converged_complexity(q, cfg.ris_elements)});
        rows.push_back({q, "exhaustive", static_cast<double>(q) * cfg.ris_elements});
        rows.push_back({q, "ce", ce});
    }
    return rows;
}

std::string overhead_csv(const TimeSeries& series)
{
    std::ostringstream os;
    os << "frame,mean_q1,mean_tau,match_fraction\n";
    for (std::size_t f = 0; f < series.frames(); ++f) {
        os << (f + 1) << ',' << format_real(series.mean_q1[f]) << ',' << format_real(series.mean_tau[f]) << ','
           << format_real(series.match_fraction[f]) << '\n';
    }
    return os.str();
}

std::string rate_csv(const RateResult& result)
{
    std::ostringstream os;
    os << "Q,scheme,mean_rate,mean_tau,mean_effective_rate\n";
    for (const auto& r : result.rows) {
        os << r.codebook_size << ',' << r.scheme << ',' << format_real(r.mean_rate) << ','
           << format_real(r.mean_tau) << ',' << format_real(r.mean_effective_rate) << '\n';
    }
    return os.str();
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows)
{
    std::ostringstream os;
    os << "Q,scheme,complexity_count\n";
    for (const auto& r : rows) {
        os << r.codebook_size << ',' << r.scheme << ',' << format_real(r.complexity_count) << '\n';
    }
    return os.str();
}

void emit_csv(const std::string& contents, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << contents;
    os.flush();
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace ris

#pragma once

#include <ris/types.hpp>

#include <cmath>

namespace ris {

/// Noise power in watts for a PSD in dBm/Hz over `bandwidth_hz`.
inline double noise_power(double psd_dbm_per_hz, double bandwidth_hz)
{
    if (!(bandwidth_hz > 0)) throw invalid_parameter("noise_power: bandwidth must be > 0");
    const double dbm = psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double achievable_rate(double received_power, double noise)
{
    if (!(noise > 0)) throw invalid_parameter("achievable_rate: noise must be > 0");
    if (!(received_power >= 0)) throw invalid_parameter("achievable_rate: received power must be >= 0");
    return std::log2(1.0 + received_power / noise);
}

/// (1 - tau/T) * R. Overhead and coherence are slot counts.
inline double effective_rate(double rate, double overhead, double coherence)
{
    if (!(coherence > 0)) throw invalid_parameter("effective_rate: coherence must be > 0");
    if (!(overhead >= 0)) throw invalid_parameter("effective_rate: overhead must be >= 0");
    if (overhead > coherence) throw invalid_parameter("effective_rate: training exceeds the coherence block");
    return (1.0 - overhead / coherence) * rate;
}

struct RateRecord
{
    double rate = 0;
    double overhead = 0;
    double coherence = 1;
    double effective_rate = 0;
};

inline RateRecord make_rate_record(double rate, double overhead, double coherence)
{
    return {rate, overhead, coherence, effective_rate(rate, overhead, coherence)};
}

} // namespace ris

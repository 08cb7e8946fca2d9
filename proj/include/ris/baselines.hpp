#pragma once

#include <ris/channel.hpp>
#include <ris/codebook.hpp>
#include <ris/dpbf.hpp>
#include <ris/types.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace ris {

struct SchemeChoice
{
    int id = 0;
    int overhead = 0; // training slots
};

/// Conventional codebook PBF: try every codeword, keep the strongest.
template <class Scalar>
SchemeChoice exhaustive_cb_pbf(const LinkGains<Scalar>& gains, const Codebook<Scalar>& cb)
{
    std::vector<int> all(static_cast<std::size_t>(cb.size()));
    std::iota(all.begin(), all.end(), 1);
    return {search_best(gains, cb, all).winner, cb.size()};
}

template <class Scalar>
SchemeChoice exhaustive_cb_pbf(const ChannelSet<Scalar>& ch,
                               const BeamformingVector<Scalar>& v,
                               const Codebook<Scalar>& cb)
{
    return exhaustive_cb_pbf(link_gains(ch, v), cb);
}

/// Uniformly random codeword with no training.
template <class Scalar, class URBG>
SchemeChoice random_pbf(const Codebook<Scalar>& cb, URBG& rng)
{
    if (cb.size() < 1) throw invalid_parameter("random_pbf: empty codebook");
    std::uniform_int_distribution<int> pick(1, cb.size());
    return {pick(rng), 0};
}

template <class Scalar>
struct AOResult
{
    vec_type<Scalar> phases;
    BeamformingVector<Scalar> beamformer;
    std::vector<Scalar> objective_trace; // received power after each iteration
    int iterations = 0;

    ReflectionPattern<Scalar> pattern() const { return {phases, Scalar(1)}; }
};

/// Full-CSI alternating optimization. Each iteration sets V to MRT on the
/// effective channel, then rotates every cascaded term onto the phase of the
/// direct term. Starts from all-zero phases; unit reflection amplitude.
template <class Scalar>
AOResult<Scalar> ce_pbf_ao(const ChannelSet<Scalar>& ch, Scalar power, int iterations)
{
    if (iterations < 1) throw invalid_parameter("ce_pbf_ao: iterations must be >= 1");
    const auto n = ch.ris_elements();
    const auto m = ch.tx_antennas();
    if (ch.tx_ris.rows() != n || ch.tx_ris.cols() != m) {
        throw dimension_mismatch("ce_pbf_ao: inconsistent channel dimensions");
    }

    AOResult<Scalar> out;
    out.iterations = iterations;
    out.phases = vec_type<Scalar>::Zero(n);
    out.beamformer.power = power;
    out.objective_trace.reserve(static_cast<std::size_t>(iterations));

    const auto wrap = [](Scalar x) {
        x = std::fmod(x, 2 * pi_v<Scalar>);
        if (x < 0) x += 2 * pi_v<Scalar>;
        return x >= 2 * pi_v<Scalar> ? Scalar(0) : x;
    };

    for (int it = 0; it < iterations; ++it) {
        const ReflectionPattern<Scalar> rp{out.phases, Scalar(1)};
        const ccolvec_type<Scalar> theta = pattern_to_coefficients(rp);
        const crowvec_type<Scalar> h_eff = ch.ris_rx * theta.asDiagonal() * ch.tx_ris + ch.direct;
        const Scalar h_norm = h_eff.norm();
        if (!(h_norm > 0)) throw invalid_parameter("ce_pbf_ao: effective channel is zero");
        out.beamformer.weights = std::sqrt(power) * h_eff.adjoint() / h_norm;

        const auto gains = link_gains(ch, out.beamformer);
        const Scalar reference = std::arg(gains.direct);
        for (Eigen::Index k = 0; k < n; ++k) {
            out.phases[k] = wrap(reference - std::arg(gains.cascade[k]));
        }
        out.objective_trace.push_back(gains.power(out.pattern()));
    }
    return out;
}

/// N_i * N^4.5, the CE-PBF complexity figure used for comparison.
inline double ce_complexity(int elements, int iterations = 3)
{
    if (elements < 1) throw invalid_parameter("ce_complexity: N must be >= 1");
    return static_cast<double>(iterations) * std::pow(static_cast<double>(elements), 4.5);
}

/// 3Q + N, the converged D-PBF worst case.
inline double dpbf_converged_complexity(int codebook_size, int elements)
{
    return 3.0 * codebook_size + elements;
}

} // namespace ris

#pragma once

#include <ris/codebook.hpp>
#include <ris/geometry.hpp>
#include <ris/types.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace ris {

/// Large-scale and fading parameters of the three hops.
template <class Scalar>
struct ChannelParams
{
    Scalar spacing_ratio = 0.5;     // element spacing / wavelength
    Scalar c0 = 1e-3;               // path gain at 1 m (-30 dB)
    Scalar alpha_direct = 3.5;
    Scalar alpha_tx_ris = 2.2;
    Scalar alpha_ris_rx = 2.2;
    Scalar rician_k = 10;           // linear; +inf gives pure LOS
    Scalar noise_power = 1e-12;     // watts

    void validate() const
    {
        if (!(alpha_direct >= 2 && alpha_tx_ris >= 2 && alpha_ris_rx >= 2)) {
            throw invalid_parameter("path-loss exponents must be >= 2");
        }
        if (!(rician_k >= 0)) throw invalid_parameter("rician K must be >= 0");
        if (!(c0 > 0)) throw invalid_parameter("c0 must be > 0");
        if (!(noise_power > 0)) throw invalid_parameter("noise power must be > 0");
        if (!(spacing_ratio > 0)) throw invalid_parameter("spacing ratio must be > 0");
    }
};

/// One realization of the direct, TX-RIS and RIS-RX channels.
template <class Scalar>
struct ChannelSet
{
    crowvec_type<Scalar> direct;  // H_o, 1 x M
    cmat_type<Scalar> tx_ris;     // G_1, N x M
    crowvec_type<Scalar> ris_rx;  // G_2, 1 x N
    int clamped_hops = 0;         // hops shorter than the 1 m model floor

    Eigen::Index tx_antennas() const { return direct.size(); }
    Eigen::Index ris_elements() const { return ris_rx.size(); }
};

template <class Scalar>
struct BeamformingVector
{
    ccolvec_type<Scalar> weights; // V, M x 1
    Scalar power = 0;             // ||V||^2
};

template <class Scalar>
ccolvec_type<Scalar> steering_vector(int num_elements, Scalar spacing_ratio, Scalar angle)
{
    if (num_elements < 1) throw invalid_parameter("steering_vector: num_elements must be >= 1");
    ccolvec_type<Scalar> a(num_elements);
    const Scalar step = 2 * pi_v<Scalar> * spacing_ratio * std::cos(angle);
    for (int n = 0; n < num_elements; ++n) {
        a[n] = std::polar(Scalar(1), step * static_cast<Scalar>(n));
    }
    return a;
}

/// C0 * d^-alpha with distances below 1 m clamped to 1 m. `clamped` is
/// incremented whenever the floor is applied.
template <class Scalar>
Scalar path_loss(Scalar distance, Scalar exponent, Scalar c0, int& clamped)
{
    if (distance < 1) {
        ++clamped;
        distance = 1;
    }
    return c0 * std::pow(distance, -exponent);
}

template <class Scalar>
Scalar path_loss(Scalar distance, Scalar exponent, Scalar c0)
{
    int ignored = 0;
    return path_loss(distance, exponent, c0, ignored);
}

namespace detail {

template <class Scalar, class URBG>
complex_t<Scalar> complex_gaussian(URBG& rng)
{
    std::normal_distribution<Scalar> half(0, std::sqrt(Scalar(0.5)));
    const Scalar re = half(rng);
    const Scalar im = half(rng);
    return {re, im};
}

template <class Scalar, class URBG>
cmat_type<Scalar> complex_gaussian(Eigen::Index rows, Eigen::Index cols, URBG& rng)
{
    cmat_type<Scalar> out(rows, cols);
    // Column-major fill order keeps draws reproducible.
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            out(r, c) = complex_gaussian<Scalar>(rng);
        }
    }
    return out;
}

template <class Scalar>
std::pair<Scalar, Scalar> rician_weights(Scalar k)
{
    if (std::isinf(k)) return {Scalar(1), Scalar(0)};
    return {std::sqrt(k / (k + 1)), std::sqrt(1 / (k + 1))};
}

template <class Scalar>
Scalar hop_length(const point_type<Scalar>& a, const point_type<Scalar>& b, const char* name)
{
    const Scalar d = (a - b).norm();
    if (!(d > 0)) throw degenerate_geometry(std::string("zero-length hop: ") + name);
    return d;
}

} // namespace detail

/// Draws one realization. H_o is Rayleigh; G_1 and G_2 are Rician with ULA
/// line-of-sight components at the horizontal departure/arrival azimuths.
template <class Scalar, class URBG>
ChannelSet<Scalar> synthesize_channels(const point_type<Scalar>& tx,
                                       const point_type<Scalar>& ris,
                                       const point_type<Scalar>& rx,
                                       const ChannelParams<Scalar>& params,
                                       int tx_antennas,
                                       int ris_elements,
                                       URBG& rng)
{
    if (tx_antennas < 1 || ris_elements < 1) {
        throw invalid_parameter("synthesize_channels: M and N must be >= 1");
    }
    const Scalar d_direct = detail::hop_length(tx, rx, "tx-rx");
    const Scalar d_tx_ris = detail::hop_length(tx, ris, "tx-ris");
    const Scalar d_ris_rx = detail::hop_length(ris, rx, "ris-rx");

    ChannelSet<Scalar> ch;
    const Scalar g_direct = std::sqrt(path_loss(d_direct, params.alpha_direct, params.c0, ch.clamped_hops));
    const Scalar g_tx_ris = std::sqrt(path_loss(d_tx_ris, params.alpha_tx_ris, params.c0, ch.clamped_hops));
    const Scalar g_ris_rx = std::sqrt(path_loss(d_ris_rx, params.alpha_ris_rx, params.c0, ch.clamped_hops));

    const auto [w_los, w_nlos] = detail::rician_weights(params.rician_k);

    const auto a_tx_depart = steering_vector(tx_antennas, params.spacing_ratio, horizontal_azimuth(tx, ris));
    const auto a_ris_arrive = steering_vector(ris_elements, params.spacing_ratio, horizontal_azimuth(ris, tx));
    const auto a_ris_depart = steering_vector(ris_elements, params.spacing_ratio, horizontal_azimuth(ris, rx));

    ch.direct = g_direct * detail::complex_gaussian<Scalar>(1, tx_antennas, rng);

    const cmat_type<Scalar> los_g1 = a_ris_arrive * a_tx_depart.adjoint();
    ch.tx_ris = g_tx_ris * (w_los * los_g1 +
                            w_nlos * detail::complex_gaussian<Scalar>(ris_elements, tx_antennas, rng));

    ch.ris_rx = g_ris_rx * (w_los * a_ris_depart.transpose() +
                            w_nlos * detail::complex_gaussian<Scalar>(1, ris_elements, rng));
    return ch;
}

/// |(G_2 diag(theta) G_1 + H_o) V|^2, evaluated literally.
template <class Scalar>
Scalar received_power(const ChannelSet<Scalar>& ch,
                      const ReflectionPattern<Scalar>& rp,
                      const BeamformingVector<Scalar>& v)
{
    const auto m = ch.tx_antennas();
    const auto n = ch.ris_elements();
    if (ch.tx_ris.rows() != n || ch.tx_ris.cols() != m || rp.size() != n || v.weights.size() != m) {
        throw dimension_mismatch("received_power: inconsistent M/N across channel, pattern and beamformer");
    }
    const ccolvec_type<Scalar> theta = pattern_to_coefficients(rp);
    const crowvec_type<Scalar> h_eff = ch.ris_rx * theta.asDiagonal() * ch.tx_ris + ch.direct;
    return std::norm((h_eff * v.weights)(0, 0));
}

/// Per-element cascaded gains for a fixed V, so that the received field for
/// coefficients theta is sum_n theta[n] * cascade[n] + direct.
template <class Scalar>
struct LinkGains
{
    ccolvec_type<Scalar> cascade;
    complex_t<Scalar> direct;

    Scalar power(const ccolvec_type<Scalar>& theta) const
    {
        return std::norm((theta.array() * cascade.array()).sum() + direct);
    }

    Scalar power(const ReflectionPattern<Scalar>& rp) const
    {
        if (rp.size() != cascade.size()) {
            throw dimension_mismatch("LinkGains::power: pattern size differs from RIS element count");
        }
        complex_t<Scalar> field = direct;
        for (Eigen::Index n = 0; n < rp.size(); ++n) {
            field += std::polar(rp.amplitude, rp.phases[n]) * cascade[n];
        }
        return std::norm(field);
    }
};

template <class Scalar>
LinkGains<Scalar> link_gains(const ChannelSet<Scalar>& ch, const BeamformingVector<Scalar>& v)
{
    if (v.weights.size() != ch.tx_antennas() || ch.tx_ris.cols() != ch.tx_antennas()) {
        throw dimension_mismatch("link_gains: beamformer length differs from M");
    }
    LinkGains<Scalar> g;
    g.cascade = ch.ris_rx.transpose().cwiseProduct(ch.tx_ris * v.weights);
    g.direct = (ch.direct * v.weights)(0, 0);
    return g;
}

/// sqrt(P) times the principal right singular vector of G_1.
template <class Scalar>
BeamformingVector<Scalar> default_tx_beamformer(const ChannelSet<Scalar>& ch, Scalar power)
{
    if (ch.tx_ris.size() == 0 || ch.tx_ris.squaredNorm() == 0) {
        throw invalid_parameter("default_tx_beamformer: TX-RIS channel is zero");
    }
    // Right singular vectors of G_1 are eigenvectors of the Gram matrix G_1^H G_1.
    const cmat_type<Scalar> gram = ch.tx_ris.adjoint() * ch.tx_ris;

    // Power iteration converges in a few steps when the LOS component
    // dominates; small eigengaps fall through to the dense solver.
    Eigen::Index start = 0;
    gram.diagonal().real().maxCoeff(&start);
    ccolvec_type<Scalar> v = gram.col(start);
    bool converged = false;
    if (v.norm() > 0) {
        v.normalize();
        const Scalar tol = 64 * std::numeric_limits<Scalar>::epsilon();
        for (int it = 0; it < 64 && !converged; ++it) {
            ccolvec_type<Scalar> next = gram * v;
            next.normalize();
            converged = (next - v).norm() < tol;
            v = std::move(next);
        }
    }
    if (!converged) {
        Eigen::SelfAdjointEigenSolver<cmat_type<Scalar>> eig(gram);
        v = eig.eigenvectors().col(gram.cols() - 1).normalized(); // eigenvalues ascend
    }

    BeamformingVector<Scalar> out;
    out.weights = std::sqrt(power) * v;
    out.power = power;
    return out;
}

} // namespace ris

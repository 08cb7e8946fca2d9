#pragma once

#include <ris/types.hpp>

#include <cmath>
#include <random>
#include <string>

namespace ris {

enum class ScenarioKind
{
    area_uniform, // RXs uniform over the half-disc
    edge_uniform  // RXs uniform on the semicircular boundary arc
};

inline std::string to_string(ScenarioKind kind)
{
    return kind == ScenarioKind::area_uniform ? "area" : "edge";
}

/// Serving region around the RIS. The half-disc lies in the y >= 0 half-plane
/// of the RIS ground projection; directions are measured from +x.
template <class Scalar>
struct Scenario
{
    ScenarioKind kind = ScenarioKind::area_uniform;
    point_type<Scalar> ris_position{0, 0, 50};
    Scalar radius = 15;
    Scalar rx_height = 1;

    void validate() const
    {
        if (!(radius > 0) || !std::isfinite(radius)) {
            throw invalid_parameter("scenario radius must be positive and finite");
        }
        if (!(rx_height >= 0) || !std::isfinite(rx_height)) {
            throw invalid_parameter("scenario rx_height must be nonnegative and finite");
        }
        if (!ris_position.allFinite()) {
            throw invalid_parameter("scenario ris_position must be finite");
        }
    }
};

template <class Scalar, class URBG>
point_type<Scalar> sample_rx_position(const Scenario<Scalar>& scenario, URBG& rng)
{
    std::uniform_real_distribution<Scalar> unit(0, 1);
    // The radial variate is drawn for both kinds so that one seed yields the
    // same azimuth sequence in either scenario.
    const Scalar u = unit(rng);
    const Scalar r = scenario.kind == ScenarioKind::area_uniform ? scenario.radius * std::sqrt(u) : scenario.radius;
    const Scalar azimuth = pi_v<Scalar> * unit(rng);
    return {
        scenario.ris_position.x() + r * std::cos(azimuth),
        scenario.ris_position.y() + r * std::sin(azimuth),
        scenario.rx_height,
    };
}

/// Azimuth of any horizontal offset, in (-pi, pi]. Used for array steering
/// where the full circle is meaningful.
template <class Scalar>
Scalar horizontal_azimuth(const point_type<Scalar>& from, const point_type<Scalar>& to)
{
    const Scalar dx = to.x() - from.x();
    const Scalar dy = to.y() - from.y();
    if (dx == 0 && dy == 0) {
        throw degenerate_geometry("azimuth undefined: points share a vertical line");
    }
    // -0.0 would send atan2 to -pi on the negative x axis.
    return std::atan2(dy == 0 ? Scalar(0) : dy, dx);
}

/// Direction of an RX as seen from the RIS, in [0, pi].
template <class Scalar>
Scalar rx_angle(const point_type<Scalar>& rx, const point_type<Scalar>& ris)
{
    const Scalar angle = horizontal_azimuth(ris, rx);
    if (angle < 0) {
        throw invalid_parameter("rx lies outside the serving half-plane (y < ris.y)");
    }
    return angle;
}

template <class Scalar = double>
Scalar angle_threshold(int codebook_size)
{
    if (codebook_size < 1) {
        throw invalid_parameter("angle_threshold: codebook size must be >= 1");
    }
    return pi_v<Scalar> / static_cast<Scalar>(codebook_size);
}

template <class Scalar>
struct RxArrival
{
    long frame_index = 0;
    point_type<Scalar> position;
    Scalar angle = 0;
};

template <class Scalar, class URBG>
RxArrival<Scalar> next_arrival(const Scenario<Scalar>& scenario, long frame_index, URBG& rng)
{
    RxArrival<Scalar> arrival;
    arrival.frame_index = frame_index;
    arrival.position = sample_rx_position(scenario, rng);
    arrival.angle = rx_angle(arrival.position, scenario.ris_position);
    return arrival;
}

} // namespace ris

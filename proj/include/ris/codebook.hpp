#pragma once

#include <ris/types.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ris {

/// One RIS configuration: per-element phase shifts with a common reflection amplitude.
template <class Scalar>
struct ReflectionPattern
{
    vec_type<Scalar> phases; // radians, each in [0, 2pi)
    Scalar amplitude = 1;    // gamma in [0, 1]

    Eigen::Index size() const { return phases.size(); }
};

template <class Scalar>
ccolvec_type<Scalar> pattern_to_coefficients(const ReflectionPattern<Scalar>& rp)
{
    ccolvec_type<Scalar> theta(rp.size());
    for (Eigen::Index n = 0; n < rp.size(); ++n) {
        theta[n] = std::polar(rp.amplitude, rp.phases[n]);
    }
    return theta;
}

/// Immutable ordered set of patterns. IDs are 1-based positions.
template <class Scalar>
class Codebook
{
public:
    Codebook() = default;

    explicit Codebook(std::vector<ReflectionPattern<Scalar>> patterns)
        : patterns_(std::move(patterns))
    {
        if (patterns_.empty()) {
            throw invalid_parameter("codebook must contain at least one pattern");
        }
        const auto n = patterns_.front().size();
        for (const auto& rp : patterns_) {
            if (rp.size() != n || n < 1) {
                throw invalid_parameter("codebook patterns must share the same nonzero element count");
            }
            if (!(rp.amplitude >= 0 && rp.amplitude <= 1)) {
                throw invalid_parameter("reflection amplitude must lie in [0, 1]");
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!(rp.phases[i] >= 0 && rp.phases[i] < 2 * pi_v<Scalar>)) {
                    throw invalid_parameter("pattern phase outside [0, 2pi)");
                }
            }
        }
    }

    int size() const { return static_cast<int>(patterns_.size()); }
    Eigen::Index elements() const { return patterns_.empty() ? 0 : patterns_.front().size(); }

    const ReflectionPattern<Scalar>& at_id(int id) const
    {
        if (id < 1 || id > size()) {
            throw invalid_parameter("codeword id " + std::to_string(id) + " out of range 1.." +
                                    std::to_string(size()));
        }
        return patterns_[static_cast<std::size_t>(id - 1)];
    }

    const std::vector<ReflectionPattern<Scalar>>& patterns() const { return patterns_; }

private:
    std::vector<ReflectionPattern<Scalar>> patterns_;
};

template <class Scalar, class URBG>
Codebook<Scalar> generate_random_codebook(int elements, int codebook_size, Scalar amplitude, URBG& rng)
{
    if (elements < 1 || codebook_size < 1) {
        throw invalid_parameter("generate_random_codebook: N and Q must be >= 1");
    }
    std::uniform_real_distribution<Scalar> phase(0, 2 * pi_v<Scalar>);
    std::vector<ReflectionPattern<Scalar>> patterns(static_cast<std::size_t>(codebook_size));
    for (auto& rp : patterns) {
        rp.amplitude = amplitude;
        rp.phases.resize(elements);
        for (int n = 0; n < elements; ++n) {
            rp.phases[n] = phase(rng);
        }
    }
    return Codebook<Scalar>(std::move(patterns));
}

// Plain-text codebook file: "N Q gamma" then Q lines of N phases.
// %.17g keeps doubles round-trip exact.

inline std::string format_real(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

template <class Scalar>
void write_codebook(std::ostream& os, const Codebook<Scalar>& cb)
{
    const Scalar amplitude = cb.size() > 0 ? cb.patterns().front().amplitude : Scalar(1);
    os << cb.elements() << ' ' << cb.size() << ' ' << format_real(amplitude) << '\n';
    for (const auto& rp : cb.patterns()) {
        for (Eigen::Index n = 0; n < rp.size(); ++n) {
            if (n > 0) os << ' ';
            os << format_real(rp.phases[n]);
        }
        os << '\n';
    }
}

template <class Scalar>
Codebook<Scalar> read_codebook(std::istream& is)
{
    long elements = 0, count = 0;
    Scalar amplitude = 0;
    if (!(is >> elements >> count >> amplitude) || elements < 1 || count < 1) {
        throw invalid_parameter("codebook file: malformed header, expected 'N Q gamma'");
    }
    std::vector<ReflectionPattern<Scalar>> patterns(static_cast<std::size_t>(count));
    for (long q = 0; q < count; ++q) {
        auto& rp = patterns[static_cast<std::size_t>(q)];
        rp.amplitude = amplitude;
        rp.phases.resize(elements);
        for (long n = 0; n < elements; ++n) {
            if (!(is >> rp.phases[n])) {
                throw invalid_parameter("codebook file: truncated at pattern " + std::to_string(q + 1));
            }
        }
    }
    std::string trailing;
    if (is >> trailing) {
        throw invalid_parameter("codebook file: trailing data after " + std::to_string(count) + " patterns");
    }
    return Codebook<Scalar>(std::move(patterns));
}

template <class Scalar>
void save_codebook(const std::string& path, const Codebook<Scalar>& cb)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_codebook(os, cb);
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

template <class Scalar>
Codebook<Scalar> load_codebook(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_codebook<Scalar>(is);
}

} // namespace ris

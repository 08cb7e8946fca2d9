#pragma once

#include <ris/channel.hpp>
#include <ris/codebook.hpp>
#include <ris/types.hpp>

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ris {

/// Codeword ID -> most recent RX direction it served. One slot per codeword,
/// empty until first written.
template <class Scalar>
class DirectionDatabase
{
public:
    DirectionDatabase() = default;

    explicit DirectionDatabase(int codebook_size)
    {
        if (codebook_size < 1) throw invalid_parameter("direction database size must be >= 1");
        slots_.resize(static_cast<std::size_t>(codebook_size));
    }

    int size() const { return static_cast<int>(slots_.size()); }

    const std::optional<Scalar>& at_id(int id) const { return slots_[index(id)]; }

    /// Stores `angle` in slot `id` and returns what was there before.
    std::optional<Scalar> write(int id, Scalar angle)
    {
        if (!(angle >= 0 && angle <= pi_v<Scalar>)) {
            throw invalid_parameter("direction database angles must lie in [0, pi]");
        }
        auto& slot = slots_[index(id)];
        auto previous = slot;
        slot = angle;
        ++writes_;
        return previous;
    }

    int filled() const
    {
        int count = 0;
        for (const auto& s : slots_) count += s.has_value();
        return count;
    }

    std::uint64_t writes() const { return writes_; }

    const std::vector<std::optional<Scalar>>& slots() const { return slots_; }

private:
    std::size_t index(int id) const
    {
        if (id < 1 || id > size()) {
            throw invalid_parameter("database id " + std::to_string(id) + " out of range 1.." +
                                    std::to_string(size()));
        }
        return static_cast<std::size_t>(id - 1);
    }

    std::vector<std::optional<Scalar>> slots_;
    std::uint64_t writes_ = 0;
};

/// Which unmatched codewords enter the search phase.
enum class SearchScope
{
    /// Every codeword that failed the match test, mapped or not.
    all_unmatched,
    /// Only codewords with no stored direction yet. Once every slot is filled
    /// an unmatched RX reuses the codeword with the nearest stored direction
    /// and nothing is searched.
    unmapped_only,
};

template <class Scalar>
struct SelectionOutcome
{
    int chosen_id = 0;
    bool matched = false;
    bool nearest_fallback = false;       // unmatched, nothing left to search
    int q1 = 0;                          // size of candidate_ids
    std::vector<int> candidate_ids;      // S_IDs
    std::vector<Scalar> metric_values;   // received power per candidate (search only)
    std::optional<Scalar> previous_angle; // slot content overwritten by this call

    bool searched() const { return !matched && !nearest_fallback; }

    /// Codewords actually tried on air: q1 for a search, none otherwise.
    int search_overhead() const { return searched() ? q1 : 0; }
};

template <class Scalar>
struct MatchResult
{
    std::optional<int> matched_id;
    std::vector<int> candidates;
};

/// Scans slots 1..Q in order and stops at the first stored direction within
/// `threshold` of `angle`. Every slot examined before that is a candidate.
template <class Scalar>
MatchResult<Scalar> try_match(const DirectionDatabase<Scalar>& db, Scalar angle, Scalar threshold)
{
    if (!(angle >= 0 && angle <= pi_v<Scalar>)) {
        throw invalid_parameter("try_match: rx angle must lie in [0, pi]");
    }
    MatchResult<Scalar> result;
    result.candidates.reserve(static_cast<std::size_t>(db.size()));
    for (int q = 1; q <= db.size(); ++q) {
        const auto& stored = db.at_id(q);
        if (stored && std::abs(angle - *stored) <= threshold) {
            result.matched_id = q;
            return result;
        }
        result.candidates.push_back(q);
    }
    return result;
}

template <class Scalar>
struct SearchResult
{
    int winner = 0;
    std::vector<Scalar> metrics;
};

/// Rote learning over `candidates`: argmax received power, ties to the lowest ID.
template <class Scalar>
SearchResult<Scalar> search_best(const LinkGains<Scalar>& gains,
                                 const Codebook<Scalar>& cb,
                                 const std::vector<int>& candidates)
{
    if (candidates.empty()) throw invalid_parameter("search_best: candidate list is empty");
    SearchResult<Scalar> result;
    result.metrics.reserve(candidates.size());
    Scalar best = -1;
    for (int id : candidates) {
        const Scalar p = gains.power(cb.at_id(id));
        result.metrics.push_back(p);
        if (p > best || (p == best && id < result.winner)) {
            best = p;
            result.winner = id;
        }
    }
    return result;
}

template <class Scalar>
SearchResult<Scalar> search_best(const ChannelSet<Scalar>& ch,
                                 const BeamformingVector<Scalar>& v,
                                 const Codebook<Scalar>& cb,
                                 const std::vector<int>& candidates)
{
    return search_best(link_gains(ch, v), cb, candidates);
}

/// Stored slot whose direction is closest to `angle`; ties go to the lowest ID.
template <class Scalar>
std::optional<int> nearest_direction(const DirectionDatabase<Scalar>& db, Scalar angle)
{
    std::optional<int> best;
    Scalar best_gap = 0;
    for (int q = 1; q <= db.size(); ++q) {
        if (const auto& stored = db.at_id(q)) {
            const Scalar gap = std::abs(angle - *stored);
            if (!best || gap < best_gap) {
                best = q;
                best_gap = gap;
            }
        }
    }
    return best;
}

/// One pass of the direction-based selection for a new RX. Writes exactly one
/// database slot. `gains` is only evaluated when a search runs.
template <class Scalar, class GainsFn>
SelectionOutcome<Scalar> dpbf_select_with(DirectionDatabase<Scalar>& db,
                                          const Codebook<Scalar>& cb,
                                          Scalar angle,
                                          Scalar threshold,
                                          GainsFn&& gains,
                                          SearchScope scope = SearchScope::all_unmatched)
{
    if (db.size() != cb.size()) {
        throw dimension_mismatch("dpbf_select: database and codebook sizes differ");
    }
    auto match = try_match(db, angle, threshold);
    if (!match.matched_id && scope == SearchScope::unmapped_only) {
        std::erase_if(match.candidates, [&](int id) { return db.at_id(id).has_value(); });
    }

    SelectionOutcome<Scalar> out;
    out.q1 = static_cast<int>(match.candidates.size());
    out.candidate_ids = std::move(match.candidates);
    if (match.matched_id) {
        out.matched = true;
        out.chosen_id = *match.matched_id;
    } else if (out.candidate_ids.empty()) {
        // Only reachable for unmapped_only with a full database.
        out.nearest_fallback = true;
        out.chosen_id = *nearest_direction(db, angle);
    } else {
        auto search = search_best(gains(), cb, out.candidate_ids);
        out.chosen_id = search.winner;
        out.metric_values = std::move(search.metrics);
    }
    out.previous_angle = db.write(out.chosen_id, angle);
    return out;
}

template <class Scalar>
SelectionOutcome<Scalar> dpbf_select(DirectionDatabase<Scalar>& db,
                                     const ChannelSet<Scalar>& ch,
                                     const BeamformingVector<Scalar>& v,
                                     const Codebook<Scalar>& cb,
                                     Scalar angle,
                                     Scalar threshold,
                                     SearchScope scope = SearchScope::all_unmatched)
{
    return dpbf_select_with(db, cb, angle, threshold, [&] { return link_gains(ch, v); }, scope);
}

/// Training slots charged to this RX.
struct OverheadModel
{
    int matched_slots = 1; // one configure-and-confirm slot
};

template <class Scalar>
int per_frame_overhead(const SelectionOutcome<Scalar>& outcome, const OverheadModel& model = {})
{
    return outcome.searched() ? outcome.q1 : model.matched_slots;
}

struct ComplexityCount
{
    std::int64_t configuration = 0; // element writes: N per configured pattern
    std::int64_t total = 0;         // configuration plus database scan and argmax
};

/// Operation counts for one selection. A match costs the worst-case scan of
/// steps 5-7, 3Q + N in total. A search adds Q1 pattern configurations and the
/// argmax over them to the full 3Q scan.
template <class Scalar>
ComplexityCount complexity_counters(const SelectionOutcome<Scalar>& outcome, int elements, int codebook_size)
{
    if (elements < 1 || codebook_size < 1) throw invalid_parameter("complexity_counters: N and Q must be >= 1");
    const std::int64_t n = elements;
    const std::int64_t q = codebook_size;
    if (!outcome.searched()) {
        return {n, 3 * q + n};
    }
    if (outcome.q1 < 1) {
        throw invalid_parameter("complexity_counters: a search outcome must have q1 >= 1");
    }
    const std::int64_t q1 = outcome.q1;
    return {q1 * n, 3 * q + q1 * n + q1};
}

// Snapshot format: one line per slot, "id angle" or "id EMPTY".

template <class Scalar>
void write_database(std::ostream& os, const DirectionDatabase<Scalar>& db)
{
    for (int q = 1; q <= db.size(); ++q) {
        os << q << ' ';
        if (const auto& s = db.at_id(q)) {
            os << format_real(*s);
        } else {
            os << "EMPTY";
        }
        os << '\n';
    }
}

template <class Scalar>
DirectionDatabase<Scalar> read_database(std::istream& is)
{
    std::vector<std::optional<Scalar>> slots;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        int id = 0;
        std::string value;
        std::string extra;
        if (!(ls >> id >> value) || (ls >> extra)) {
            throw invalid_parameter("database snapshot line " + std::to_string(line_no) + ": expected 'id angle|EMPTY'");
        }
        if (id != static_cast<int>(slots.size()) + 1) {
            throw invalid_parameter("database snapshot line " + std::to_string(line_no) + ": ids must be 1..Q in order");
        }
        if (value == "EMPTY") {
            slots.emplace_back();
        } else {
            std::size_t used = 0;
            double parsed = 0;
            try {
                parsed = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != value.size()) {
                throw invalid_parameter("database snapshot line " + std::to_string(line_no) + ": bad angle '" + value + "'");
            }
            slots.emplace_back(static_cast<Scalar>(parsed));
        }
    }
    DirectionDatabase<Scalar> db(static_cast<int>(slots.size()));
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) db.write(static_cast<int>(i) + 1, *slots[i]);
    }
    return db;
}

} // namespace ris

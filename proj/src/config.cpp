#include <ris/config.hpp>

#include <ris/codebook.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ris {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    const std::string v = trim(text);
    T out{};
    const auto* begin = v.data();
    const auto* end = v.data() + v.size();
    // from_chars rejects a leading '+'.
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (v.empty() || ec != std::errc() || ptr != end) {
        throw config_error("bad value for '" + key + "': '" + v + "'");
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, sep)) parts.push_back(trim(part));
    return parts;
}

Position3D parse_position(const std::string& key, const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw config_error("'" + key + "' expects x,y,z");
    return {parse_number<double>(key, parts[0]), parse_number<double>(key, parts[1]),
            parse_number<double>(key, parts[2])};
}

bool parse_bool(const std::string& key, const std::string& text)
{
    const auto v = trim(text);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("'" + key + "' expects true or false");
}

std::string join_position(const Position3D& p)
{
    return format_real(p.x()) + "," + format_real(p.y()) + "," + format_real(p.z());
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"scenario", [](auto& c, auto& k, auto& v) {
             const auto t = trim(v);
             if (t == "area") c.scenario = ScenarioKind::area_uniform;
             else if (t == "edge") c.scenario = ScenarioKind::edge_uniform;
             else throw config_error("'" + k + "' expects area or edge");
         }},
        {"m", [](auto& c, auto& k, auto& v) { c.tx_antennas = parse_number<int>(k, v); }},
        {"n", [](auto& c, auto& k, auto& v) { c.ris_elements = parse_number<int>(k, v); }},
        {"q_list", [](auto& c, auto& k, auto& v) {
             c.q_list.clear();
             for (const auto& p : split(v, ',')) c.q_list.push_back(parse_number<int>(k, p));
         }},
        {"tx_power_watt", [](auto& c, auto& k, auto& v) { c.tx_power_watt = parse_number<double>(k, v); }},
        {"coherence_slots", [](auto& c, auto& k, auto& v) { c.coherence_slots = parse_number<int>(k, v); }},
        {"frames", [](auto& c, auto& k, auto& v) { c.frames = parse_number<int>(k, v); }},
        {"realizations", [](auto& c, auto& k, auto& v) { c.realizations = parse_number<int>(k, v); }},
        {"ao_iterations", [](auto& c, auto& k, auto& v) { c.ao_iterations = parse_number<int>(k, v); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
        {"tx_position", [](auto& c, auto& k, auto& v) { c.tx_position = parse_position(k, v); }},
        {"ris_position", [](auto& c, auto& k, auto& v) { c.ris_position = parse_position(k, v); }},
        {"radius", [](auto& c, auto& k, auto& v) { c.radius = parse_number<double>(k, v); }},
        {"rx_height", [](auto& c, auto& k, auto& v) { c.rx_height = parse_number<double>(k, v); }},
        {"noise_psd_dbm_hz", [](auto& c, auto& k, auto& v) { c.noise_psd_dbm_hz = parse_number<double>(k, v); }},
        {"bandwidth_hz", [](auto& c, auto& k, auto& v) { c.bandwidth_hz = parse_number<double>(k, v); }},
        {"spacing_ratio", [](auto& c, auto& k, auto& v) { c.channel.spacing_ratio = parse_number<double>(k, v); }},
        {"c0", [](auto& c, auto& k, auto& v) { c.channel.c0 = parse_number<double>(k, v); }},
        {"alpha_direct", [](auto& c, auto& k, auto& v) { c.channel.alpha_direct = parse_number<double>(k, v); }},
        {"alpha_tx_ris", [](auto& c, auto& k, auto& v) { c.channel.alpha_tx_ris = parse_number<double>(k, v); }},
        {"alpha_ris_rx", [](auto& c, auto& k, auto& v) { c.channel.alpha_ris_rx = parse_number<double>(k, v); }},
        {"rician_k", [](auto& c, auto& k, auto& v) { c.channel.rician_k = parse_number<double>(k, v); }},
        {"reflection_amplitude", [](auto& c, auto& k, auto& v) { c.reflection_amplitude = parse_number<double>(k, v); }},
        {"shared_codebook", [](auto& c, auto& k, auto& v) { c.shared_codebook = parse_bool(k, v); }},
        {"convergence_window", [](auto& c, auto& k, auto& v) { c.convergence_window = parse_number<int>(k, v); }},
        {"measure_frames", [](auto& c, auto& k, auto& v) { c.measure_frames = parse_number<int>(k, v); }},
        {"matched_overhead_slots", [](auto& c, auto& k, auto& v) { c.matched_overhead_slots = parse_number<int>(k, v); }},
        {"search_scope", [](auto& c, auto& k, auto& v) {
             const auto t = trim(v);
             if (t == "unmapped") c.search_scope = SearchScope::unmapped_only;
             else if (t == "all") c.search_scope = SearchScope::all_unmatched;
             else throw config_error("'" + k + "' expects unmapped or all");
         }},
        {"threads", [](auto& c, auto& k, auto& v) { c.threads = parse_number<int>(k, v); }},
        {"output_dir", [](auto& c, auto&, auto& v) { c.output_dir = trim(v); }},
    };
    return table;
}

} // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    const auto it = setters().find(trim(key));
    if (it == setters().end()) throw config_error("unknown key '" + trim(key) + "'");
    it->second(cfg, it->first, value);
}

ExperimentConfig parse_config(std::istream& is, const std::string& source)
{
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const config_error& e) {
            throw config_error(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(source + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw config_error("cannot read config '" + path + "'");
    return parse_config(is, path);
}

std::string describe_config(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    os << "scenario = " << to_string(cfg.scenario) << '\n';
    os << "m = " << cfg.tx_antennas << '\n';
    os << "n = " << cfg.ris_elements << '\n';
    os << "q_list = ";
    for (std::size_t i = 0; i < cfg.q_list.size(); ++i) os << (i ? "," : "") << cfg.q_list[i];
    os << '\n';
    os << "tx_power_watt = " << format_real(cfg.tx_power_watt) << '\n';
    os << "coherence_slots = " << cfg.coherence_slots << '\n';
    os << "frames = " << cfg.frames << '\n';
    os << "realizations = " << cfg.realizations << '\n';
    os << "ao_iterations = " << cfg.ao_iterations << '\n';
    os << "seed = " << cfg.seed << '\n';
    os << "tx_position = " << join_position(cfg.tx_position) << '\n';
    os << "ris_position = " << join_position(cfg.ris_position) << '\n';
    os << "radius = " << format_real(cfg.radius) << '\n';
    os << "rx_height = " << format_real(cfg.rx_height) << '\n';
    os << "noise_psd_dbm_hz = " << format_real(cfg.noise_psd_dbm_hz) << '\n';
    os << "bandwidth_hz = " << format_real(cfg.bandwidth_hz) << '\n';
    os << "spacing_ratio = " << format_real(cfg.channel.spacing_ratio) << '\n';
    os << "c0 = " << format_real(cfg.channel.c0) << '\n';
    os << "alpha_direct = " << format_real(cfg.channel.alpha_direct) << '\n';
    os << "alpha_tx_ris = " << format_real(cfg.channel.alpha_tx_ris) << '\n';
    os << "alpha_ris_rx = " << format_real(cfg.channel.alpha_ris_rx) << '\n';
    os << "rician_k = " << format_real(cfg.channel.rician_k) << '\n';
    os << "reflection_amplitude = " << format_real(cfg.reflection_amplitude) << '\n';
    os << "shared_codebook = " << (cfg.shared_codebook ? "true" : "false") << '\n';
    os << "convergence_window = " << cfg.convergence_window << '\n';
    os << "measure_frames = " << cfg.measure_frames << '\n';
    os << "matched_overhead_slots = " << cfg.matched_overhead_slots << '\n';
    os << "search_scope = " << (cfg.search_scope == SearchScope::unmapped_only ? "unmapped" : "all") << '\n';
    os << "threads = " << cfg.threads << '\n';
    os << "output_dir = " << cfg.output_dir << '\n';
    return os.str();
}

} // namespace ris

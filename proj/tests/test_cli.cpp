#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ris/cli.hpp>
#include <ris/codebook.hpp>
#include <ris/config.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ris;
namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "ris_sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("ris_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream(path) << text;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* small_run = "q_list = 10\nframes = 50\nrealizations = 3\nmeasure_frames = 5\n";

} // namespace

TEST_CASE("overhead run writes one CSV per Q and echoes the config")
{
    const auto dir = scratch("overhead");
    write_file(dir / "cfg.txt", std::string(small_run) + "q_list = 10,12\n");
    const auto r = run({"overhead", "--config", (dir / "cfg.txt").string(), "--seed", "7", "--out", (dir / "o").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("seed = 7") != std::string::npos);
    CHECK(r.err.find("q_list = 10,12") != std::string::npos);
    CHECK(fs::exists(dir / "o" / "overhead_q10.csv"));
    CHECK(fs::exists(dir / "o" / "overhead_q12.csv"));
    CHECK(std::distance(fs::directory_iterator(dir / "o"), fs::directory_iterator{}) == 2);
}

TEST_CASE("same seed, same bytes; --threads does not matter")
{
    const auto dir = scratch("determinism");
    write_file(dir / "cfg.txt", small_run);
    const auto cfg = (dir / "cfg.txt").string();
    CHECK(run({"rate", "--config", cfg, "--seed", "3", "--threads", "1", "--out", (dir / "a").string()}).code == 0);
    CHECK(run({"rate", "--config", cfg, "--seed", "3", "--threads", "4", "--out", (dir / "b").string()}).code == 0);
    CHECK(read_file(dir / "a" / "rate.csv") == read_file(dir / "b" / "rate.csv"));
    CHECK(run({"complexity", "--config", cfg, "--out", (dir / "c").string()}).code == 0);
    CHECK(read_file(dir / "c" / "complexity.csv").rfind("Q,scheme,complexity_count\n", 0) == 0);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"overhead", "--bogus"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"overhead", "--config", "/nonexistent/cfg.txt"}).code == 2);
    CHECK(run({"overhead", "--set", "tx_power_watt=-1"}).code == 2);
    CHECK(run({"overhead", "--set", "nokey=1"}).code == 2);
    CHECK(run({"overhead", "--seed", "1", "--set", "seed=2"}).code == 2);
    const auto r = run({"overhead", "--threads", "-3"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("runtime failures exit with 1")
{
    const auto dir = scratch("runtime");
    write_file(dir / "blocker", "x");
    write_file(dir / "cfg.txt", small_run);
    const auto r = run({"complexity", "--config", (dir / "cfg.txt").string(), "--out", (dir / "blocker" / "sub").string()});
    CHECK(r.code == 1);
}

TEST_CASE("gen-codebook writes an N = 1, Q = 8 codebook")
{
    const auto dir = scratch("codebook");
    const auto path = (dir / "cb.txt").string();
    const auto r = run({"gen-codebook", "--n", "1", "--q", "8", "--seed", "1", "--out", path});
    CHECK(r.code == 0);
    const auto cb = load_codebook<double>(path);
    CHECK(cb.size() == 8);
    CHECK(cb.elements() == 1);
    const auto first = read_file(path);
    CHECK(run({"gen-codebook", "--n", "1", "--q", "8", "--seed", "1", "--out", path}).code == 0);
    CHECK(read_file(path) == first);
    CHECK(run({"gen-codebook", "--n", "0", "--q", "8", "--out", path}).code == 2);
    CHECK(run({"gen-codebook", "--q", "8", "--out", path}).code == 2);
}

TEST_CASE("config file: defaults, lists, comments and errors")
{
    std::istringstream empty("");
    const auto d = parse_config(empty);
    CHECK(d.tx_antennas == 16);
    CHECK(d.ris_elements == 16);
    CHECK(d.tx_power_watt == 0.001);
    CHECK(d.coherence_slots == 500);
    CHECK(d.realizations == 100);
    CHECK(d.ao_iterations == 3);
    CHECK(d.tx_position == Position3D(18, 24, 50));
    CHECK(d.ris_position == Position3D(0, 0, 50));

    std::istringstream sweep("# sweep\nq_list = 50,100,150,200  # four points\nscenario = edge\nrician_k = inf\n");
    const auto s = parse_config(sweep);
    CHECK(s.q_list == std::vector<int>{50, 100, 150, 200});
    CHECK(s.scenario == ScenarioKind::edge_uniform);
    CHECK(std::isinf(s.channel.rician_k));

    std::istringstream negative("tx_power_watt = -1\n");
    CHECK_THROWS_AS(parse_config(negative), config_error);

    std::istringstream unknown("m = 4\n\nfoo = 1\n");
    try {
        parse_config(unknown, "cfg");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("cfg:3") != std::string::npos);
    }

    std::istringstream no_equals("m 4\n");
    CHECK_THROWS_AS(parse_config(no_equals), config_error);
    std::istringstream bad_number("m = 4x\n");
    CHECK_THROWS_AS(parse_config(bad_number), config_error);
}

TEST_CASE("describe_config round-trips through the parser")
{
    ExperimentConfig cfg;
    cfg.q_list = {25, 75};
    cfg.seed = 123456789012345ULL;
    cfg.channel.rician_k = 3.25;
    cfg.scenario = ScenarioKind::edge_uniform;
    cfg.search_scope = SearchScope::all_unmatched;
    std::istringstream is(describe_config(cfg));
    const auto back = parse_config(is);
    CHECK(describe_config(back) == describe_config(cfg));
}

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "apf/cli.hpp"

using namespace apf;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path fresh_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
}

}  // namespace

TEST_CASE("list names every built-in") {
    const CliResult r = cli({"list"});
    CHECK(r.code == 0);
    for (const char* name : {"head_on", "narrow_gap", "four_agent_swap", "urban_dynamic"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("help is not an error") {
    const CliResult r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("run") != std::string::npos);
    CHECK(r.out.find("validate") != std::string::npos);
}

TEST_CASE("usage problems exit with code 2") {
    CHECK(cli({}).code == 2);                                    // missing subcommand
    CHECK(cli({"run"}).code == 2);                               // missing scenario
    CHECK(cli({"run", "head_on", "--guidance", "x"}).code == 2); // bad enum value
    const CliResult unknown = cli({"run", "no_such_scenario"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("unknown scenario") != std::string::npos);
    const CliResult badset = cli({"validate", "head_on", "--set", "gains.bogus=1"});
    CHECK(badset.code == 2);
    CHECK(badset.err.find("unknown --set key") != std::string::npos);
    const CliResult badval = cli({"validate", "head_on", "--set", "gains.k_att=fast"});
    CHECK(badval.code == 2);
    CHECK(badval.err.find("invalid numeric value") != std::string::npos);
    const CliResult noeq = cli({"validate", "head_on", "--set", "gains.k_att"});
    CHECK(noeq.code == 2);
    CHECK(noeq.err.find("key=value") != std::string::npos);
    // Overrides that break invariants are config errors too.
    const CliResult broken = cli({"run", "head_on", "--set", "gains.gamma=2"});
    CHECK(broken.code == 2);
    CHECK(broken.err.find("gains.gamma must be in (0, 1]") != std::string::npos);
}

TEST_CASE("validate echoes the resolved configuration") {
    const CliResult r = cli({"validate", "narrow_gap"});
    CHECK(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["name"] == "narrow_gap");
    CHECK(j["obstacles"].size() == 2);

    const CliResult tuned = cli({"validate", "narrow_gap", "--set", "gains.k_rep0=45"});
    CHECK(tuned.code == 0);
    const nlohmann::json tj = nlohmann::json::parse(tuned.out);
    CHECK(tj["gains"]["k_rep0"] == 45.0);
}

TEST_CASE("run writes one CSV and one metrics file per run") {
    const fs::path dir = fresh_dir("apf_cli_run");
    const CliResult r =
        cli({"run", "head_on", "--t-max", "2", "--out", dir.string()});
    CHECK(r.code == 4);  // timeout: nowhere near the goal in 2 s
    CHECK(r.out.find("verdict=timeout") != std::string::npos);
    CHECK(fs::exists(dir / "head_on_proposed.csv"));
    CHECK(fs::exists(dir / "head_on_proposed.json"));

    const CliResult rb = cli({"run", "head_on", "--t-max", "2", "--guidance", "baseline",
                              "--out", dir.string()});
    CHECK(rb.code == 4);
    CHECK(fs::exists(dir / "head_on_baseline.csv"));
    CHECK(fs::exists(dir / "head_on_baseline.json"));
}

TEST_CASE("run exit codes follow the verdict") {
    const fs::path dir = fresh_dir("apf_cli_verdicts");

    const CliResult ok = cli({"run", "head_on", "--out", dir.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict=reached") != std::string::npos);

    const std::string stall_text = R"({
      "name": "ring_trap",
      "agents": [{"start": [0, 0], "goal": [400, 0]}],
      "obstacles": [{"position": [400, 0], "b": 30}],
      "sim": {"guidance": "baseline"}
    })";
    const fs::path stall_file = write_file(dir, "ring_trap.json", stall_text);
    const CliResult stall = cli({"run", stall_file.string(), "--out", dir.string()});
    CHECK(stall.code == 4);
    CHECK(stall.out.find("verdict=stall") != std::string::npos);
    CHECK(fs::exists(dir / "ring_trap_baseline.csv"));

    const std::string crash_text = R"({
      "name": "hard_body",
      "agents": [{"start": [0, 0], "goal": [800, 0]}],
      "obstacles": [{"position": [400, 0], "b": 40, "physical_radius": 40}]
    })";
    const fs::path crash_file = write_file(dir, "hard_body.json", crash_text);
    const CliResult crash = cli({"run", crash_file.string(), "--out", dir.string()});
    CHECK(crash.code == 3);
    CHECK(crash.out.find("verdict=collision") != std::string::npos);
    CHECK(crash.out.find("collision: agent 0 vs obstacle 0") != std::string::npos);
}

TEST_CASE("explicit flags win over --set") {
    const fs::path dir = fresh_dir("apf_cli_precedence");
    // --set pushes t_max to 100, the flag pulls it back to 2: timeout at 2 s.
    const CliResult r = cli({"run", "head_on", "--set", "sim.t_max=100", "--t-max", "2",
                             "--out", dir.string()});
    CHECK(r.code == 4);
    CHECK(r.out.find("duration=2 ") != std::string::npos);
}

TEST_CASE("compare tabulates both guidance laws") {
    const fs::path dir = fresh_dir("apf_cli_compare");
    const CliResult r = cli({"compare", "narrow_gap", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("proposed") != std::string::npos);
    CHECK(r.out.find("baseline") != std::string::npos);
    CHECK(r.out.find("min_separation") != std::string::npos);
    CHECK(fs::exists(dir / "narrow_gap_proposed.csv"));
    CHECK(fs::exists(dir / "narrow_gap_baseline.csv"));
    CHECK(fs::exists(dir / "narrow_gap_proposed.json"));
    CHECK(fs::exists(dir / "narrow_gap_baseline.json"));
}

TEST_CASE("warnings surface on stderr without failing the run") {
    const fs::path dir = fresh_dir("apf_cli_warn");
    const std::string text = R"({
      "name": "close_pair",
      "agents": [
        {"start": [0, 0], "goal": [400, 0]},
        {"start": [0, 20], "goal": [400, 20]}
      ],
      "sim": {"t_max": 1}
    })";
    const fs::path file = write_file(dir, "close_pair.json", text);
    const CliResult r = cli({"run", file.string(), "--out", dir.string()});
    CHECK(r.code == 4);  // timeout after 1 s; the point is the warning
    CHECK(r.err.find("warning:") != std::string::npos);
    CHECK(r.err.find("repulsive axis") != std::string::npos);
}

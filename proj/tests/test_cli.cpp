#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlpc/commands.hpp"
#include "nlpc/config.hpp"
#include "nlpc/io.hpp"

using namespace nlpc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nlpc_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "nlpc");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("default configuration round-trips") {
    const RunConfig c = config_from_json(json::object());
    const json doc = config_to_json(c);
    CHECK(config_to_json(config_from_json(doc)) == doc);
    CHECK(config_from_json(doc).crystal_spec().angle_rad == c.crystal_spec().angle_rad);
}

TEST_CASE("unknown keys and bad types name their location") {
    auto expect = [](const json& doc, const std::string& fragment) {
        try {
            config_from_json(doc);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect(json{{"crystal", {{"periodnm", 1}}}}, "crystal.periodnm");
    expect(json{{"bogus", 1}}, "bogus");
    expect(json{{"crystal", {{"period_nm", "x"}}}}, "crystal.period_nm");
    expect(json{{"grid", {{"harmonics", {{0, 0}}}}}}, "grid.harmonics[0]");
    expect(json{{"pump", {{"polarization", "z"}}}}, "pump.polarization");
    expect(json{{"crystal", {{"contrast", 3.0}}}}, "crystal");
    expect(json{{"output", {{"format", "csv"}}}}, "output.format");
    expect(json{{"material", "glass"}}, "material");
}

TEST_CASE("overrides") {
    json doc = json::object();
    apply_override(doc, "crystal.period_nm=276.5");
    apply_override(doc, "output.dir=results");
    apply_override(doc, "grid.harmonics=[[0,0,0],[1,0,0]]");
    const RunConfig c = config_from_json(doc);
    CHECK(c.crystal.period_nm == 276.5);
    CHECK(c.output.dir == "results");
    CHECK(c.harmonics().size() == 2);
    CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "crystal.period_nm.x=1"), ConfigError);
}

TEST_CASE("material from a file") {
    const auto dir = scratch("material");
    io::write_file(dir / "mat.json",
                   R"({"name": "test", "ordinary": [2.7359, 0.01878, 0.01822, 0.01354],
                       "extraordinary": [2.3753, 0.01224, 0.01667, 0.01516], "window_um": [0.3, 1.5]})");
    const RunConfig c = config_from_json(json{{"material", {{"file", "mat.json"}}}}, dir);
    CHECK(c.material.name == "test");
    CHECK(c.material.ordinary.a == 2.7359);
    CHECK(config_to_json(c)["material"]["name"] == "test");
}

TEST_CASE("binary matrix round trip") {
    const auto dir = scratch("binary");
    Eigen::MatrixXcd m(3, 4);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = {r + 0.25 * c, -c * 1e-300};
    io::write_binary_matrix(dir / "m.bin", m, {1.0, 0.5, 2.0, 0.25});
    CHECK(fs::file_size(dir / "m.bin") == 64 + 12 * 16);
    const auto back = io::read_binary_matrix(dir / "m.bin");
    CHECK(back.version == 1);
    CHECK(back.flags == io::kBinaryComplex);
    CHECK(back.axes.idler_step == 0.25);
    CHECK(back.data == m);
    io::write_binary_matrix(dir / "r.bin", Eigen::MatrixXd(m.real()), {});
    CHECK(io::read_binary_matrix(dir / "r.bin").data.real() == m.real());
}

TEST_CASE("number formatting reads back exactly") {
    for (double v : {0.1, 1.0 / 3.0, 2.216e15, -6.87769672722529e-24}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(run({"dispersion", "--out", (dir / "a").string(), "--set", "crystal.nope=1"}) == kExitConfig);
    CHECK(run({"nosuchcommand"}) == kExitConfig);
    CHECK(run({"jsa", "--out", (dir / "b").string(), "--set", "pump.center_nm=440", "--set", "grid.points=16"}) ==
          kExitDomain);
    CHECK(run({"design", "--out", (dir / "c").string(), "--set", "design.alpha=[0,0]", "--set", "design.scan=[1,8,4]",
               "--set", "design.contour_offsets_nm=[]"}) == kExitNoConvergence);
    CHECK(run({"fourier", "--out", (dir / "d").string()}) == kExitOk);
}

TEST_CASE("a written configuration reproduces byte-identical output") {
    const auto dir = scratch("roundtrip");
    const std::string out = (dir / "run").string();
    const std::vector<std::string> common{"--set", "design.apply=true",  "--set", "design.scan=[16,16,8]",
                                          "--set", "grid.points=24",     "--threads", "2"};
    auto args = common;
    args.insert(args.begin(), {"jsa", "--out", out});
    REQUIRE(run(args) == kExitOk);
    fs::rename(out, dir / "first");
    REQUIRE(run({"jsa", "--config", (dir / "first" / "config.json").string()}) == kExitOk);
    // The stored document names the original output directory.
    REQUIRE(fs::exists(out));
    for (const char* name : {"jsa.tsv", "jsa_meta.txt", "config.json"})
        CHECK(slurp(dir / "first" / name) == slurp(fs::path(out) / name));
    const std::string header = slurp(fs::path(out) / "jsa.tsv").substr(0, 200);
    CHECK(header.rfind("# nlpc 0.1.0\n# command: jsa\n# config: {", 0) == 0);
}

TEST_CASE("binary jsa output and dispersion metadata") {
    const auto dir = scratch("formats");
    REQUIRE(run({"jsa", "--out", (dir / "j").string(), "--format", "bin", "--set", "grid.points=16", "--set",
                 "crystal.period_nm=276.76", "--set", "crystal.contrast=0.02816", "--set",
                 "crystal.angle_deg=41.089"}) == kExitOk);
    const auto m = io::read_binary_matrix(dir / "j" / "jsa_amplitude.bin");
    CHECK(m.data.rows() == 16);
    CHECK(m.axes.signal_step > 0);
    REQUIRE(run({"dispersion", "--out", (dir / "d").string(), "--set", "dispersion.points=11"}) == kExitOk);
    const auto text = slurp(dir / "d" / "dispersion_o.tsv");
    CHECK(text.find("# sf10_gvd_s2_per_m: ") != std::string::npos);
    CHECK(slurp(dir / "d" / "dispersion_gaps.txt").find("gap_e_lambda_center_nm: ") != std::string::npos);
}

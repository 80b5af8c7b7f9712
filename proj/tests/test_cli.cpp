#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kBin = AMO_BIN;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("amo_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& args) {
    int st = std::system((kBin + " " + args + " >/dev/null 2>&1").c_str());
    return (st >> 8) & 0xff;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("bands: header block and union closed form") {
    TempDir td;
    fs::path out = td.path / "bands.csv";
    REQUIRE(run("bands --alpha 1/2 --beta 1 --out " + out.string()) == 0);
    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0].rfind("# amotk ", 0) == 0);
    CHECK(lines[1] == "# command = bands");
    bool saw_alpha = false, saw_mode = false;
    std::size_t header_rows = 0;
    for (const auto& l : lines) {
        if (l.rfind("# alpha = 1/2", 0) == 0) saw_alpha = true;
        if (l.rfind("# mode = union", 0) == 0) saw_mode = true;
        if (!l.empty() && l[0] == '#') ++header_rows;
    }
    CHECK(saw_alpha);
    CHECK(saw_mode);
    CHECK(lines[header_rows] == "lower,upper");
    REQUIRE(lines.size() == header_rows + 2);  // single band
    const std::string& row = lines[header_rows + 1];
    auto comma = row.find(',');
    REQUIRE(comma != std::string::npos);
    double lo = std::stod(row.substr(0, comma)), hi = std::stod(row.substr(comma + 1));
    CHECK(std::abs(lo + 2.0 * std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(hi - 2.0 * std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("exit codes: invalid input, numeric mode, unknown command") {
    CHECK(run("bands --alpha 1/0") == 2);
    CHECK(run("bands --mode bogus") == 2);
    CHECK(run("frobnicate") == 64);
    CHECK(run("") == 64);
    CHECK(run("verify nonsense --alpha 1/2") == 2);
    CHECK(run("localize --alpha 1/2 --N 10") == 2);  // N below the documented floor
}

TEST_CASE("outputs are byte-for-byte reproducible and atomic") {
    TempDir td;
    fs::path a = td.path / "a.csv", b = td.path / "b.csv";
    std::string args = "ids --alpha 5/8 --beta 1.5 --M 64";
    REQUIRE(run(args + " --out " + a.string()) == 0);
    REQUIRE(run(args + " --out " + b.string()) == 0);
    std::string ca = slurp(a);
    CHECK(ca == slurp(b));
    CHECK(!ca.empty());
    CHECK_FALSE(fs::exists(a.string() + ".tmp"));

    // ids column: cumulative distribution ending at 1
    auto lines = lines_of(ca);
    REQUIRE(!lines.empty());
    CHECK(lines.back().substr(lines.back().find(',') + 1) == "1");
}

TEST_CASE("config file supplies defaults, flags still win") {
    TempDir td;
    fs::path cfgp = td.path / "amo.cfg";
    {
        std::ofstream cfg(cfgp);
        cfg << "# sample config\n"
            << "alpha = 1/2\n"
            << "beta = 1.0  # inline comment\n"
            << "mode = union\n";
    }
    fs::path from_cfg = td.path / "cfg.csv", from_flag = td.path / "flag.csv";
    REQUIRE(run("bands --config " + cfgp.string() + " --out " + from_cfg.string()) == 0);
    REQUIRE(run("bands --alpha 1/2 --beta 1 --out " + from_flag.string()) == 0);
    CHECK(slurp(from_cfg) == slurp(from_flag));

    // an explicit flag overrides the file value
    fs::path override_out = td.path / "ovr.csv";
    REQUIRE(run("bands --config " + cfgp.string() + " --beta 0 --out " +
                override_out.string()) == 0);
    std::string body = slurp(override_out);
    CHECK(body.find("# beta = 0\n") != std::string::npos);
    CHECK(body.find("-2,2\n") != std::string::npos);

    CHECK(run("bands --config " + (td.path / "missing.cfg").string()) == 2);
}

TEST_CASE("hdelta-cloud CSV shape") {
    TempDir td;
    fs::path out = td.path / "cloud.csv";
    REQUIRE(run("hdelta-cloud --alpha 1/3 --beta 1.5 --delta 1.4 --ntheta 4 --nkappa 5 --out " +
                out.string()) == 0);
    auto lines = lines_of(slurp(out));
    std::size_t data = 0;
    bool saw_schema = false;
    for (const auto& l : lines) {
        if (l == "re,im,theta_index,kappa_index") saw_schema = true;
        else if (!l.empty() && l[0] != '#' && saw_schema) ++data;
    }
    CHECK(saw_schema);
    CHECK(data == 3u * 4u * 5u);
}

TEST_CASE("level-curve requires a grid; produces rows when given one") {
    TempDir td;
    CHECK(run("level-curve --alpha 1/2 --beta 1 --level 1.2") == 2);
    fs::path out = td.path / "lc.csv";
    REQUIRE(run("level-curve --alpha 1/2 --beta 1 --M 64 --level 1.2 "
                "--grid 81:81:-8:8:-4:4 --out " + out.string()) == 0);
    auto lines = lines_of(slurp(out));
    bool saw_schema = false;
    std::size_t data = 0;
    for (const auto& l : lines) {
        if (l == "curve_id,x,y,closed") saw_schema = true;
        else if (!l.empty() && l[0] != '#' && saw_schema) ++data;
    }
    CHECK(saw_schema);
    CHECK(data > 10);
}

TEST_CASE("localize and gaps emit parseable JSON") {
    TempDir td;
    fs::path loc = td.path / "loc.json";
    REQUIRE(run("localize --alpha 34/55 --beta 3 --E 0.5 --N 600 --out " + loc.string()) == 0);
    json jl = json::parse(slurp(loc));
    CHECK(jl["command"] == "localize");
    CHECK(jl.contains("eigenvalue"));
    CHECK(jl.contains("decay_rate"));
    CHECK(jl["config"]["N"] == "600");

    fs::path gaps = td.path / "gaps.json";
    REQUIRE(run("gaps --alpha 1/2 --beta 1 --mode fixed --out " + gaps.string()) == 0);
    json jg = json::parse(slurp(gaps));
    CHECK(jg["exploratory"] == true);
    CHECK(jg["band_count"] == 2);
    REQUIRE(jg["gaps"].size() == 1);
    CHECK(std::abs(jg["gaps"][0]["length"].get<double>() - 4.0) < 1e-9);
}

TEST_CASE("verify duality: JSON report and exit code track pass") {
    TempDir td;
    fs::path rep = td.path / "verify.json";
    REQUIRE(run("verify duality --alpha 2/5 --beta 3 --out " + rep.string()) == 0);
    json j = json::parse(slurp(rep));
    CHECK(j["claim"] == "duality");
    CHECK(j["pass"] == true);
    CHECK(j["deviations"]["max_edge_mismatch"].get<double>() <= 1e-8);
    CHECK(j["thresholds"]["max_edge_mismatch"].get<double>() == 1e-8);
    CHECK(j.contains("runtime_seconds"));
}

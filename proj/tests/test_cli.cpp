#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quadlind/cli.hpp"
#include "quadlind/json_io.hpp"

using namespace quadlind;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("quadlind_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string scalar_model_json() {
    return R"({"L": 1, "hbar": 1.0, "h": [[[0.0, 0.0]]],
               "lambda_plus": [[[0.75, 0.0]]], "lambda_minus": [[[0.25, 0.0]]]})";
}

json last_line_json(const std::string& text) {
    std::istringstream in(text);
    std::string line, last;
    while (std::getline(in, line)) {
        if (!line.empty()) last = line;
    }
    return json::parse(last);
}

int run_cfg(const cli::RunConfig& cfg, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = cli::run(cfg, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("parse_xx_list") {
    const XXChainParams p = cli::parse_xx_list("4,1,0.5,2,0.5,1,0");
    CHECK(p.L == 4);
    CHECK(p.J == 1.0);
    CHECK(p.h_z == 0.5);
    CHECK(p.Gamma_1 == 2.0);
    CHECK(p.nbar_1 == 1.0);
    CHECK(p.hbar == 1.0);
    CHECK(cli::parse_xx_list("4,1,0.5,2,0.5,1,0,2").hbar == 2.0);
    CHECK_THROWS_AS(cli::parse_xx_list("4,1,0.5"), ValidationError);
    CHECK_THROWS_AS(cli::parse_xx_list("4,1,0.5,2,0.5,1,nope"), ValidationError);
    CHECK_THROWS_AS(cli::parse_xx_list("0,1,0.5,2,0.5,1,0"), ValidationError);
}

TEST_CASE("parse_sweep_axis") {
    const cli::SweepAxis a = cli::parse_sweep_axis("Gamma_1=0.5,1,2");
    CHECK(a.parameter == "Gamma_1");
    REQUIRE(a.values.size() == 3);
    CHECK(a.values[1] == 1.0);
    const cli::SweepAxis b = cli::parse_sweep_axis("J=0:1:5");
    REQUIRE(b.values.size() == 5);
    CHECK(b.values[0] == 0.0);
    CHECK(b.values[4] == 1.0);
    CHECK(b.values[2] == 0.5);
    CHECK_THROWS_AS(cli::parse_sweep_axis("noequals"), ValidationError);
    CHECK_THROWS_AS(cli::parse_sweep_axis("J=0:1:0"), ValidationError);
}

TEST_CASE("spectrum on a scalar model file reports the rapidity -0.5") {
    TempDir tmp;
    {
        std::ofstream f(tmp.file("model.json"));
        f << scalar_model_json();
    }
    cli::RunConfig cfg;
    cfg.command = cli::Command::Spectrum;
    cfg.model_path = tmp.file("model.json");
    cfg.out_path = tmp.file("spec.json");
    std::string out;
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);

    std::ifstream result(tmp.file("spec.json"));
    json j;
    result >> j;
    CHECK(j["L"] == 1);
    CHECK(j["rapidities"][0][0].get<double>() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(j["rapidities"][0][1].get<double>() == doctest::Approx(0.0));
    CHECK(j["gap"].get<double>() == doctest::Approx(1.0).epsilon(1e-13));

    const json summary = last_line_json(out);
    CHECK(summary["command"] == "spectrum");
    CHECK(summary["L"] == 1);
}

TEST_CASE("steady writes occupations; csv cells re-parse bitwise") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.command = cli::Command::Steady;
    cfg.xx_params = cli::parse_xx_list("3,1,0.2,2,0.5,0.9,0.1");
    cfg.out_path = tmp.file("steady.csv");
    cfg.format = "csv";
    std::string out;
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);

    std::ifstream f(tmp.file("steady.csv"));
    std::string header, row1;
    std::getline(f, header);
    std::getline(f, row1);
    CHECK(header == "site,occupation,current_to_next");
    // bitwise round trip of the occupation cell
    const json summary = last_line_json(out);
    const double expected = summary["occupation_first"].get<double>();
    const auto c1 = row1.find(',');
    const auto c2 = row1.find(',', c1 + 1);
    const double parsed = std::stod(row1.substr(c1 + 1, c2 - c1 - 1));
    CHECK(std::memcmp(&parsed, &expected, sizeof(double)) == 0);
}

TEST_CASE("identical config produces identical output files") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.command = cli::Command::Spectrum;
    cfg.xx_params = cli::parse_xx_list("5,1,0.3,2,0.5,0.8,0.2");
    cfg.out_path = tmp.file("a.json");
    CHECK(run_cfg(cfg) == cli::kExitOk);
    cfg.out_path = tmp.file("b.json");
    CHECK(run_cfg(cfg) == cli::kExitOk);
    std::ifstream fa(tmp.file("a.json")), fb(tmp.file("b.json"));
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
}

TEST_CASE("evolve runs from the vacuum and reports occupations") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.command = cli::Command::Evolve;
    cfg.model_path = "";
    cfg.model_path.reset();
    cfg.xx_params = cli::parse_xx_list("2,1,0,1,1,1,0");
    cfg.out_path = tmp.file("traj.json");
    cfg.t_max = 4.0;
    cfg.n_times = 5;
    CHECK(run_cfg(cfg) == cli::kExitOk);
    std::ifstream f(tmp.file("traj.json"));
    json j;
    f >> j;
    CHECK(j["times"].size() == 5);
    CHECK(j["occupations"].size() == 5);
    CHECK(j["occupations"][0][0].get<double>() == 0.0);
}

TEST_CASE("xx-compare: condition violation exits 1 with the expected message") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::XXCompare;
    cfg.xx_params = cli::parse_xx_list("4,1,0,1,2,0.9,0.1");  // J^2 != G1 GL
    std::string out, err;
    CHECK(run_cfg(cfg, &out, &err) == cli::kExitValidation);
    CHECK(err.find("closed form inapplicable") != std::string::npos);
}

TEST_CASE("xx-compare runs on a valid condition point") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.command = cli::Command::XXCompare;
    cfg.xx_params = cli::parse_xx_list("10,1,0,2,0.5,0.9,0.1");
    cfg.out_path = tmp.file("cmp.csv");
    cfg.format = "csv";
    std::string out;
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);
    const json summary = last_line_json(out);
    CHECK(summary["max_deviation"].get<double>() < 1e-2);
}

TEST_CASE("steady on a marginal model exits 2") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::Steady;
    cfg.xx_params = cli::parse_xx_list("2,0,0.3,1,0,0.8,0");  // J=0, site 2 dark
    std::string out, err;
    CHECK(run_cfg(cfg, &out, &err) == cli::kExitNumerical);
    CHECK(err.find("marginal") != std::string::npos);
}

TEST_CASE("missing model source exits 1") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::Spectrum;
    std::string out, err;
    CHECK(run_cfg(cfg, &out, &err) == cli::kExitValidation);
    CHECK(err.find("model source") != std::string::npos);
}

TEST_CASE("verify at L = 2 with a fixed seed passes every oracle check") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::Verify;
    XXChainParams p;
    p.L = 2;
    cfg.xx_params = p;
    cfg.seed = 7;
    std::string out;
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);
    const json summary = last_line_json(out);
    CHECK(summary["all_pass"] == true);
}

TEST_CASE("sweep: grid rows, per-point failure isolation, resume manifest") {
    TempDir tmp;
    cli::RunConfig cfg;
    cfg.command = cli::Command::Sweep;
    // base chain has Gamma_L = 0, so the Gamma_1 = 0 point is fully closed
    // (marginal) and must be flagged without killing the sweep
    cfg.xx_params = cli::parse_xx_list("3,1,0,1,0,0.9,0.5");
    cfg.sweep_axes = {cli::parse_sweep_axis("Gamma_1=0,0.5,2")};
    cfg.out_path = tmp.file("sweep.csv");
    cfg.format = "csv";
    std::string out;
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);

    std::ifstream f(tmp.file("sweep.csv"));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);  // header + 3 rows
    CHECK(lines[0].rfind("index,Gamma_1,", 0) == 0);
    CHECK(lines[1].find("marginal") != std::string::npos);  // Gamma_1 = 0 row flagged
    CHECK(lines[2].find("ok") != std::string::npos);
    CHECK(lines[3].find("ok") != std::string::npos);

    // manifest lists all three rows; a re-run resumes (recomputes nothing)
    std::ifstream mf(tmp.file("sweep.csv.manifest"));
    int entries = 0;
    while (std::getline(mf, line)) {
        if (!line.empty()) ++entries;
    }
    CHECK(entries == 3);
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);
    std::ifstream mf2(tmp.file("sweep.csv.manifest"));
    entries = 0;
    while (std::getline(mf2, line)) {
        if (!line.empty()) ++entries;
    }
    CHECK(entries == 3);  // nothing appended on resume
}

TEST_CASE("sweep rejects bad axes") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::Sweep;
    cfg.xx_params = cli::parse_xx_list("3,1,0,1,1,0.9,0.5");
    cfg.sweep_axes = {cli::parse_sweep_axis("bogus=1,2")};
    std::string out, err;
    CHECK(run_cfg(cfg, &out, &err) == cli::kExitValidation);
    CHECK(err.find("unknown sweep parameter") != std::string::npos);
}

TEST_CASE("bench runs at small sizes") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::Bench;
    cfg.bench_sizes = {8, 16};
    std::string out;
    CHECK(run_cfg(cfg, &out) == cli::kExitOk);
    const json summary = last_line_json(out);
    CHECK(summary["runs"].size() == 2);
}

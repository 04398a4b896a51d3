#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "arc/cli.hpp"
#include "arc/io.hpp"
#include "arc/oracle.hpp"
#include "support.hpp"

using namespace arc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "arc");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "arc_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("points files round trip") {
    const auto pts = testing::random_points(37, 5, 1, 3.0);
    for (auto fmt : {PointsFormat::Text, PointsFormat::Binary}) {
        const auto p = scratch(fmt == PointsFormat::Text ? "rt.txt" : "rt.bin");
        write_points_file(p.string(), pts, fmt);
        const auto back = read_points_file(p.string());
        CHECK(back == pts);
        write_points_file(p.string(), back, fmt);
        const auto first = slurp(p);
        write_points_file(p.string(), read_points_file(p.string()), fmt);
        CHECK(slurp(p) == first);
    }
}

TEST_CASE("malformed files") {
    const auto bad = scratch("bad.txt");
    write_text(bad, "arc-points v1 2 2\n0 0 1\n0 x 1\n");
    CHECK_THROWS_WITH_AS(read_points_file(bad.string()), doctest::Contains("line 3"), FormatError);
    auto r = cli({"oracle", "--data", bad.string(), "--q", "0 0", "--eps", "0.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);

    write_text(bad, "arc-points v1 3 2\n0 0 1\n");
    CHECK(cli({"oracle", "--data", bad.string(), "--q", "0 0", "--eps", "0.5"}).code == 2);

    const auto bin = scratch("bad.bin");
    write_points_file(bin.string(), testing::random_points(4, 2, 2), PointsFormat::Binary);
    auto bytes = slurp(bin);
    bytes.resize(bytes.size() - 5);
    write_text(bin, bytes);
    CHECK_THROWS_WITH_AS(read_points_file(bin.string()), doctest::Contains("offset"), FormatError);

    const auto model = scratch("bad.json");
    write_text(model, "{\"format\": \"arc-model\", \"version\": 1");
    CHECK_THROWS_AS(load_model(model.string()), FormatError);
}

TEST_CASE("configuration errors") {
    const auto data = scratch("cfg.txt");
    write_points_file(data.string(), testing::random_points(10, 2, 3), PointsFormat::Text);
    const auto model = scratch("cfg.json").string();
    CHECK(cli({"build", "--data", data.string(), "--eps", "1.5", "--seed", "1", "--out-model", model}).code == 3);
    CHECK(cli({"build", "--data", data.string(), "--eps", "0.5", "--mode", "magic", "--seed", "1", "--out-model",
               model})
              .code == 3);
    CHECK(cli({"build", "--eps", "0.5"}).code == 3);
    CHECK(cli({"nonsense"}).code == 3);
    CHECK(cli({"oracle", "--data", data.string(), "--q", "0 0 0", "--eps", "0.5"}).code == 3);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("oracle on the unit grid") {
    const auto data = scratch("grid.txt");
    REQUIRE(cli({"gen", "--kind", "grid", "--n", "100", "--d", "2", "--seed", "0", "--out", data.string()}).code == 0);
    const auto r = cli({"oracle", "--data", data.string(), "--q", "4 4", "--eps", "0.5"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["weight_r"].get<double>() == 5.0);
    CHECK(j["weight_outer"].get<double>() == 9.0);
    CHECK(j["t_q"].get<std::size_t>() == 4);
}

TEST_CASE("build, query, eval and rebuild") {
    const auto data = scratch("pts.bin").string();
    const auto queries = scratch("q.txt").string();
    const auto probe = scratch("probe.txt").string();
    const auto model = scratch("m.json").string();
    const auto report = scratch("report.json").string();
    REQUIRE(cli({"gen", "--kind", "clusters", "--n", "200", "--d", "4", "--seed", "5", "--side", "4", "--spread",
                 "0.5", "--out", data, "--binary"})
                .code == 0);
    REQUIRE(cli({"gen-queries", "--kind", "near-data", "--m", "400", "--seed", "6", "--data", data, "--out", queries})
                .code == 0);
    REQUIRE(cli({"gen-queries", "--kind", "uniform", "--m", "100", "--seed", "7", "--data", data, "--out", probe})
                .code == 0);
    REQUIRE(cli({"build", "--data", data, "--eps", "0.5", "--mode", "learned", "--queries", queries, "--seed", "8",
                 "--out-model", model})
                .code == 0);

    const auto pts = read_points_file(data);
    const auto q = cli({"query", "--model", model, "--data", data, "--q", "2 2 2 2", "--verify"});
    REQUIRE(q.code == 0);
    const auto jq = json::parse(q.out);
    CHECK(jq["weight"].get<double>() == doctest::Approx(jq["member_weight"].get<double>()).epsilon(1e-12));
    CHECK(oracle::check_sandwich(pts, Point{2, 2, 2, 2}, EpsParams(0.5),
                                 jq["members"].get<std::vector<std::uint32_t>>()));

    const auto e = cli({"eval", "--model", model, "--data", data, "--queries", queries, "--out-report", report});
    REQUIRE(e.code == 0);
    const auto jr = json::parse(slurp(report));
    CHECK(jr["sandwich_pass_rate"].get<double>() >= 0.99);
    CHECK(jr["holdout_overlaps_training"].get<bool>());
    CHECK(jr["oracle_visiting_agreement"].get<double>() == 1.0);

    const auto e2 = cli({"eval", "--model", model, "--data", data, "--queries", probe, "--out-report", report});
    REQUIRE(e2.code == 0);
    CHECK_FALSE(json::parse(slurp(report))["holdout_overlaps_training"].get<bool>());

    const auto m = load_model(model);
    const auto a = rebuild_index(m, pts);
    const auto b = rebuild_index(load_model(model), pts);
    CHECK(model_to_json(model_of(a, m.training_digest)) + "\n" == slurp(model));
    for (const auto& row : read_queries_file(probe).queries) CHECK(a.count(row, true) == b.count(row, true));

    const auto other = testing::random_points(200, 4, 9);
    CHECK_THROWS_AS(rebuild_index(m, other), FormatError);
    const auto wrong = scratch("wrong.txt").string();
    write_points_file(wrong, other, PointsFormat::Text);
    CHECK(cli({"query", "--model", model, "--data", wrong, "--q", "2 2 2 2"}).code == 2);
}

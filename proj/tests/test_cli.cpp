#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "radixlab/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "radixlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = radixlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exact laws") {
    CHECK(run({"laws", "marginal", "--tree", "00,01,1"}).out == "3/16\n");
    CHECK(run({"laws", "kernel", "--tree", "0,1", "--target", "00,01,1"}).out == "4/3\n");
    CHECK(run({"laws", "forward", "--tree", "0,1", "--target", "00,01,1"}).out == "1/4\n");
    CHECK(run({"laws", "backward", "--tree", "00,01", "--target", "00,01,1"}).out == "1/3\n");
    CHECK(run({"laws", "green", "--tree", "e", "--target", "0,1"}).out == "1/2\n");
    CHECK(run({"laws", "marginal", "--tree", "0,1", "--measure", R"({"type":"bernoulli","p1":"1/3"})"}).out == "4/9\n");
}

TEST_CASE("build") {
    CHECK(run({"build", "--strings", "0(0),01(1),1(1)"}).out == "00,01,1\n");
    const auto dup = run({"build", "--strings", "0(0),(0)"});
    CHECK(dup.code == 2);
    CHECK(dup.err.find("DuplicateInput") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"laws", "marginal"}).code == 1);
    CHECK(run({"laws", "marginal", "--tree", "00,1"}).code == 2);
    CHECK(run({"laws", "marginal", "--tree", "0,1", "--measure", R"({"type":"bernoulli","p1":0.3})"}).code == 2);
    CHECK(run({"simulate", "--measure", "nu1", "--n", "3"}).code == 2);
    CHECK(run({"laws", "marginal", "--tree", "0,1", "--format", "xml"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("counterexample table") {
    const auto r = run({"counterexample", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["command"] == "counterexample");
    CHECK(doc["rows"].size() == 8);
    for (const auto& row : doc["rows"]) {
        CHECK((row["exact"] == "4/9" || row["exact"] == "5/9"));
        CHECK(row["h_root"] == "1/1");
        CHECK(row["h_pair"] == "8/9");
    }
}

TEST_CASE("seeded output is reproducible") {
    const auto a = run({"simulate", "--n", "6", "--replicas", "3", "--seed", "17"});
    const auto b = run({"simulate", "--n", "6", "--replicas", "3", "--seed", "17", "--threads", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("replica,step,tree,labels\n", 0) == 0);
    CHECK(run({"simulate", "--n", "6", "--replicas", "3", "--seed", "18"}).out != a.out);
}

TEST_CASE("output file") {
    const std::string path = "radixlab_cli_test_output.csv";
    REQUIRE(run({"enumerate", "--n", "2", "--depth-cap", "2", "--out", path}).code == 0);
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == "tree\n\"0,1\"\n\"00,01\"\n\"10,11\"\n");
    std::remove(path.c_str());
}

TEST_CASE("harmonic and verify") {
    const auto h = run({"harmonic", "--measure", "nu1", "--tree", "0,1"});
    CHECK(h.out.find("h,8/9\n") != std::string::npos);
    CHECK(h.out.find("theta,4/9\n") != std::string::npos);
    CHECK(h.out.find("theta_total,1/1\n") != std::string::npos);
    const auto v = run({"verify", "--n", "3", "--depth-cap", "3", "--format", "json"});
    CHECK(v.code == 0);
    CHECK(nlohmann::json::parse(v.out)["ok"] == true);
}

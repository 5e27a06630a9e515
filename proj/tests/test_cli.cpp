#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odlab/cli.hpp"
#include "odlab/io.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out, err;
    nlohmann::json doc() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "odlab");
    std::vector<const char*> argv;
    for (auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = odlab::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string cfg(const char* name) { return std::string(ODLAB_SOURCE_DIR) + "/configs/" + name; }

std::string golden(const char* name)
{
    std::ifstream f(std::string(ODLAB_GOLDEN_DIR) + "/" + name);
    REQUIRE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("order")
    {
        auto d = run({"order", "--config", cfg("d_dx.json")});
        REQUIRE(d.code == 0);
        CHECK(d.doc()["derivation_order"] == 1);
        CHECK(d.doc()["diffop_order"] == 1);
        CHECK(d.doc()["schema"] == "odlab/1");
        auto d2 = run({"order", "--config", cfg("d2_dx2.json"), "--kind", "derivation"});
        CHECK(d2.doc()["derivation_order"] == 2);
        CHECK_FALSE(d2.doc().contains("diffop_order"));
        auto lx = run({"order", "--config", cfg("left_mult_x.json"), "--max-order", "3"});
        CHECK(lx.out == golden("order_left_mult_x.json"));
        CHECK(lx.doc()["derivation_order"] == "exceeds 3");
        CHECK(lx.doc()["diffop_order"] == 0);
    }

    TEST_CASE("filt")
    {
        auto f = run({"filt", "--config", cfg("antisym_binary.json"), "--arity", "3"});
        REQUIRE(f.code == 0);
        CHECK(f.out == golden("filt_antisym_binary.json"));
        auto csv = run({"filt", "--config", cfg("antisym_binary.json"), "--format", "csv"});
        CHECK(csv.out == golden("filt_antisym_binary.csv"));
        auto lie = run({"filt", "--config", cfg("lie.json")});
        CHECK(lie.doc()["dims"]["(1,1,1)"] == 0);
        CHECK(lie.doc()["dims"]["(2,2,2)"] == 2);
        auto ax = run({"filt", "--config", cfg("lie.json"), "--check", "axioms"});
        CHECK(ax.code == 0);
        CHECK(ax.doc()["violations"].empty());
        auto pre = run({"filt", "--config", cfg("antisym_binary.json"), "--kind", "prestandard", "--check", "saturation"});
        CHECK(pre.code == 1);
        CHECK_FALSE(pre.doc()["violations"].empty());
    }

    TEST_CASE("tight")
    {
        auto lie = run({"tight", "--config", cfg("lie.json"), "--check", "tight"});
        CHECK(lie.code == 0);
        CHECK(lie.doc()["tight"] == true);
        auto com = run({"tight", "--config", cfg("com.json"), "--check", "tight"});
        CHECK(com.code == 1);
        CHECK(com.doc()["tight"] == false);
        CHECK(run({"tight", "--config", cfg("com.json")}).code == 0);
        CHECK(run({"tight", "--config", cfg("lie_admissible.json")}).doc()["tight"] == true);
    }

    TEST_CASE("bracket")
    {
        auto j = run({"bracket", "--kind", "superbig", "--check", "jacobi", "--config", cfg("superbig.json")});
        REQUIRE(j.code == 0);
        CHECK(j.doc()["jacobi_residual"] == 0);
        CHECK(j.doc()["up_to_h"] == 3);
        auto big = run({"bracket", "--kind", "big"});
        CHECK(big.code == 0);
        CHECK(big.doc()["up_to_h"] == 0);
        auto as = run({"bracket", "--kind", "terilla"});
        CHECK(as.code == 0);
        CHECK(as.doc()["assoc_residual"] == 0);
        auto anti = run({"bracket", "--check", "antisymmetry"});
        CHECK(anti.doc()["antisymmetry_residual"] == 0);
        CHECK(run({"bracket", "--kind", "terilla", "--check", "jacobi"}).code == 2);
    }

    TEST_CASE("usage and config errors exit with 2")
    {
        auto bad = run({"order", "--config", cfg("bad_key.json")});
        CHECK(bad.code == 2);
        auto diag = nlohmann::json::parse(bad.err);
        CHECK(diag["error"] == "config");
        CHECK(std::string(diag["message"]).find("truncaton") != std::string::npos);
        CHECK(run({}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"order"}).code == 2);
        CHECK(run({"filt", "--config", cfg("lie.json"), "--kind", "weird"}).code == 2);
        CHECK(run({"tight", "--config", cfg("lie.json"), "--format", "csv"}).code == 2);
        CHECK(run({"order", "--config", "/nonexistent.json"}).code == 2);
        const auto tmp = std::filesystem::temp_directory_path() / "odlab_broken.json";
        std::ofstream(tmp) << "{\"schema\": \"odlab/1\",\n \"arity\": }";
        auto broken = run({"filt", "--config", tmp.string()});
        CHECK(broken.code == 2);
        CHECK(broken.err.find(":2:") != std::string::npos);
    }

    TEST_CASE("output files and threads")
    {
        const auto dir = std::filesystem::temp_directory_path() / "odlab_cli_out";
        std::filesystem::create_directories(dir);
        setenv("ODLAB_OUTPUT_DIR", dir.string().c_str(), 1);
        auto r = run({"filt", "--config", cfg("antisym_binary.json"), "--output", "lat.json", "--threads", "2"});
        unsetenv("ODLAB_OUTPUT_DIR");
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream f(dir / "lat.json");
        std::stringstream ss;
        ss << f.rdbuf();
        CHECK(ss.str() == golden("filt_antisym_binary.json"));
    }

    TEST_CASE("selftest subset")
    {
        auto r = run({"selftest", "--check", "4", "--format", "json"});
        CHECK(r.code == 0);
        auto d = r.doc();
        CHECK(d["schema"] == "odlab/1");
        CHECK(d["pass"] == true);
        CHECK(run({"selftest", "--check", "11"}).code == 2);
    }
}

// End-to-end checks of the command-line tool through a real process.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ck/family.hpp"
#include "ck/serialize.hpp"

namespace fs = std::filesystem;
using namespace ck;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path log = dir / "run.log";
    std::string cmd = std::string(GRAPHCK_CLI_PATH) + " " + args + " > " +
                      log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    r.output.assign((std::istreambuf_iterator<char>(in)), {});
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / "graphck_cli_test";
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
};

std::shared_ptr<const Graph> two_cycle() {
    return make_graph({"u", "v"}, {{"a", "u", "v"}, {"b", "v", "u"}});
}

}  // namespace

TEST_CASE("verify: exact family classifies FULL_CK with exit 0") {
    Workspace ws;
    auto fam = build_cycle_exact(two_cycle());
    fs::path famfile = ws.dir / "exact.json";
    save_json(famfile.string(), family_to_json(fam));

    RunResult r = run_cli("verify --family " + famfile.string(), ws.dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("FULL_CK") != std::string::npos);
}

TEST_CASE("verify: invalid family exits 2 but still writes the report") {
    Workspace ws;
    auto fam = build_fock(two_cycle(), 3);
    fam.S[0] *= 1.1;
    fs::path famfile = ws.dir / "bad.json";
    save_json(famfile.string(), family_to_json(fam));
    fs::path out = ws.dir / "report.json";

    RunResult r = run_cli(
        "verify --family " + famfile.string() + " --out " + out.string(), ws.dir);
    CHECK(r.exit_code == 2);
    Json doc = load_json(out.string());
    CHECK(doc.at("report").at("classification") == "INVALID");
    CHECK(doc.at("meta").at("tool_version") == kToolVersion);
}

TEST_CASE("wold: fock on the loop reports multiplicity one") {
    Workspace ws;
    auto g = make_graph({"v"}, {{"e", "v", "v"}});
    auto fam = build_fock(g, 4);
    fs::path famfile = ws.dir / "fock.json";
    save_json(famfile.string(), family_to_json(fam));
    fs::path out = ws.dir / "wold.json";

    RunResult r = run_cli(
        "wold --family " + famfile.string() + " --out " + out.string(), ws.dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("alpha(v) = 1") != std::string::npos);
    Json doc = load_json(out.string());
    CHECK(doc.at("wold").at("multiplicities").at("v") == 1);
}

TEST_CASE("dilate: clears the defects of a fock family") {
    Workspace ws;
    auto fam = build_fock(two_cycle(), 3);
    fs::path famfile = ws.dir / "fock2.json";
    save_json(famfile.string(), family_to_json(fam));
    fs::path out = ws.dir / "dilated.json";

    RunResult r = run_cli("dilate --family " + famfile.string() +
                              " --depth 3 --max-degree 2 --out " + out.string(),
                          ws.dir);
    CHECK(r.exit_code == 0);
    Json doc = load_json(out.string());
    OperatorFamily dil = family_from_json(doc.at("family"));
    CHECK(dil.dimension > fam.dimension);
    CHECK(doc.at("certificate").at("max_compression_error").get<double>() <= 1e-9);
}

TEST_CASE("normalform matches the isometry relation") {
    Workspace ws;
    auto g = two_cycle();
    fs::path gfile = ws.dir / "g.json";
    save_json(gfile.string(), graph_to_json(*g));

    RunResult r =
        run_cli("normalform \"s*(a) s(a)\" --graph " + gfile.string(), ws.dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("p(u)") != std::string::npos);

    RunResult bad =
        run_cli("normalform \"s(zz)\" --graph " + gfile.string(), ws.dir);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("column") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    Workspace ws;
    CHECK(run_cli("", ws.dir).exit_code == 1);
    CHECK(run_cli("verify", ws.dir).exit_code == 1);
    CHECK(run_cli("verify --family " + (ws.dir / "nope.json").string(), ws.dir)
              .exit_code == 1);
}

TEST_CASE("outputs are byte-identical across runs") {
    Workspace ws;
    auto fam = build_fock(two_cycle(), 3);
    fs::path famfile = ws.dir / "fock3.json";
    save_json(famfile.string(), family_to_json(fam));
    fs::path o1 = ws.dir / "r1.json";
    fs::path o2 = ws.dir / "r2.json";
    std::string base = "report --family " + famfile.string() + " --seed 7 --out ";
    CHECK(run_cli(base + o1.string(), ws.dir).exit_code == 0);
    CHECK(run_cli(base + o2.string(), ws.dir).exit_code == 0);
    CHECK(slurp(o1) == slurp(o2));
    Json doc = load_json(o1.string());
    CHECK(doc.at("meta").at("seed") == 7);
}

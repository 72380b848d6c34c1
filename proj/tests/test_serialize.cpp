#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "ck/dilate.hpp"
#include "ck/family.hpp"
#include "ck/serialize.hpp"
#include "ck/verify.hpp"
#include "ck/wold.hpp"
#include "generators.hpp"

using namespace ck;

namespace {

std::shared_ptr<const Graph> two_cycle() {
    return make_graph({"u", "v"}, {{"a", "u", "v"}, {"b", "v", "u"}});
}

}  // namespace

TEST_CASE("graph round trip") {
    auto g = make_graph({"u", "v", "w"}, {{"a", "u", "v", "0"},
                                          {"b", "v", "u", "1"},
                                          {"c", "w", "v", "0"}});
    auto back = graph_from_json(graph_to_json(*g));
    CHECK(g->same_structure(*back));
    // default color fills in
    Json j = graph_to_json(*g);
    j["edges"][0].erase("color");
    auto filled = graph_from_json(j);
    CHECK(filled->edge(*filled->edge_index("a")).color ==
          *filled->color_index("0"));
}

TEST_CASE("matrix round trip is bit exact") {
    gen::Rng rng(2);
    Matrix m = random_unitary(5, rng) * 3.7;
    Matrix back = matrix_from_json(matrix_to_json(m), 5, 5);
    CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS(matrix_from_json(matrix_to_json(m), 4, 5));
}

TEST_CASE("family round trip is bit exact") {
    gen::Rng rng(8);
    auto fock = build_fock(two_cycle(), 3);
    auto fam = gen::conjugate(fock, random_unitary(fock.dimension, rng));
    fam.depth = 3;
    OperatorFamily back = family_from_json(family_to_json(fam));
    CHECK(back.dimension == fam.dimension);
    CHECK(back.depth == 3);
    CHECK(back.tolerance == fam.tolerance);
    for (int v = 0; v < 2; ++v)
        CHECK((back.P[v] - fam.P[v]).cwiseAbs().maxCoeff() == 0.0);
    for (int e = 0; e < 2; ++e)
        CHECK((back.S[e] - fam.S[e]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.interior - fam.interior).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coordinate interiors serialize as index lists") {
    auto fam = build_fock(two_cycle(), 2);
    Json j = family_to_json(fam);
    CHECK(j.at("interior").is_array());
    OperatorFamily back = family_from_json(j);
    CHECK((back.interior - fam.interior).cwiseAbs().maxCoeff() == 0.0);

    auto exact = build_cycle_exact(two_cycle());
    CHECK(family_to_json(exact).at("interior") == "all");
}

TEST_CASE("family documents may reference an external graph") {
    auto g = two_cycle();
    auto fam = build_fock(g, 2);
    Json j = family_to_json(fam);
    j["graph"] = "graph.json";
    CHECK_THROWS(family_from_json(j));  // unresolved reference
    OperatorFamily back = family_from_json(j, g);
    CHECK(back.g().same_structure(*g));
}

TEST_CASE("report and wold serialization") {
    auto fam = build_fock(two_cycle(), 3);
    RelationReport rep = check_full_ck(fam);
    Json jr = report_to_json(rep, fam.g());
    CHECK(jr.at("classification") == "TCK");
    CHECK(jr.at("singular").size() == 2);

    WoldDecomposition w = wold_decompose(fam);
    Json jw = wold_to_json(w);
    CHECK(jw.at("multiplicities").at("u") == 1);
    CHECK(jw.at("multiplicities").at("v") == 1);
}

TEST_CASE("certificate serialization") {
    auto fam = build_fock(two_cycle(), 3);
    Dilation d = full_ck_dilation(fam, 2, 2);
    Json jc = certificate_to_json(d.certificate, fam.g());
    CHECK(jc.at("max_degree") == 2);
    CHECK(jc.at("max_compression_error").get<double>() <= 1e-9);
}

TEST_CASE("save and load through files, stable bytes") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "graphck_ser_test";
    fs::create_directories(dir);
    auto fam = build_fock(two_cycle(), 2);
    Json j = family_to_json(fam);
    std::string p1 = (dir / "a.json").string();
    std::string p2 = (dir / "b.json").string();
    save_json(p1, j);
    save_json(p2, family_to_json(fam));
    Json r1 = load_json(p1);
    CHECK(r1 == j);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK_THROWS(load_json((dir / "missing.json").string()));
    fs::remove_all(dir);
}

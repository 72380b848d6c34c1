#include "doctest.h"

#include "ck/family.hpp"
#include "ck/verify.hpp"
#include "generators.hpp"

using namespace ck;

namespace {

std::shared_ptr<const Graph> loop() { return make_graph({"v"}, {{"e", "v", "v"}}); }

std::shared_ptr<const Graph> two_cycle() {
    return make_graph({"u", "v"}, {{"a", "u", "v"}, {"b", "v", "u"}});
}

}  // namespace

TEST_CASE("fock families verify as TCK") {
    auto fam = build_fock(loop(), 4);
    RelationReport rep = check_tck(fam);
    CHECK(rep.classification == Classification::TCK);
    CHECK(rep.projection_residual <= 1e-12);
    for (const ColorCheck& cc : rep.colors)
        for (const auto& [e, r] : cc.isometry_residual) CHECK(r <= 1e-12);
}

TEST_CASE("cycle-exact verifies as FULL_CK with zero residuals") {
    auto fam = build_cycle_exact(two_cycle());
    RelationReport rep = check_full_ck(fam);
    CHECK(rep.classification == Classification::FULL_CK);
    CHECK(rep.projection_residual == 0.0);
    for (const ColorCheck& cc : rep.colors) {
        for (const auto& [e, r] : cc.isometry_residual) CHECK(r == 0.0);
        for (const auto& [v, vc] : cc.vertices) {
            CHECK(vc.defect_norm == 0.0);
            CHECK(vc.defect_rank == 0);
        }
    }
    CHECK(rep.singular.empty());
}

TEST_CASE("a scaled shift is INVALID with the predicted residual") {
    auto fam = build_fock(loop(), 4);
    fam.S[0] *= 1.1;
    RelationReport rep = check_tck(fam);
    CHECK(rep.classification == Classification::INVALID);
    // |1.1^2 - 1| on the compressed isometry block
    double r = rep.colors[0].isometry_residual.at(0);
    CHECK(r == doctest::Approx(0.21).epsilon(1e-6));
}

TEST_CASE("rho_infty classifies FULL_CK; fock is singular exactly at receivers") {
    gen::Rng rng(7);
    std::vector<std::shared_ptr<const Graph>> suite = {loop(), two_cycle()};
    for (int t = 0; t < 8; ++t) suite.push_back(gen::random_graph(rng, 4, 6));
    for (const auto& g : suite) {
        auto rho = build_rho_infty(g, TailSelection::select(*g), 3);
        CHECK(check_full_ck(rho).classification == Classification::FULL_CK);
        CHECK(singular_vertex_set(rho).empty());

        auto fock = build_fock(g, 3);
        std::set<std::pair<int, int>> expect;
        for (int c = 0; c < g->num_colors(); ++c)
            for (int v : g->receivers(c)) expect.insert({c, v});
        CHECK(singular_vertex_set(fock) == expect);
        // the vacuum at a received vertex is never in an edge range
        for (const auto& [c, v] : expect) {
            Matrix d = vertex_defect(fock, c, v);
            Vector vac = Vector::Zero(fock.dimension);
            auto basis = PathBasis(*g, 3);
            for (int i = 0; i < basis.size(); ++i)
                if (basis.path(i).length() == 0 && basis.path(i).source() == v)
                    vac(i) = 1.0;
            CHECK(std::abs((vac.adjoint() * d * vac)(0, 0).real() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("defects are PSD whenever TCK passes") {
    gen::Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        auto g = gen::random_graph(rng, 4, 6);
        auto fam = build_fock(g, 3);
        RelationReport rep = check_full_ck(fam);
        REQUIRE(rep.is_at_least_tck());
        for (const ColorCheck& cc : rep.colors)
            for (const auto& [v, vc] : cc.vertices) CHECK(vc.tck_slack >= -1e-9);
    }
}

TEST_CASE("classification is monotone under direct sums") {
    auto g = loop();
    auto fock = build_fock(g, 3);   // TCK
    auto cyc = build_cycle_exact(g);  // FULL_CK
    CHECK(check_full_ck(direct_sum({cyc, cyc})).classification ==
          Classification::FULL_CK);
    CHECK(check_full_ck(direct_sum({fock, cyc})).classification ==
          Classification::TCK);
}

TEST_CASE("commutant dimension probe") {
    CHECK(commutant_dimension(build_cycle_exact(two_cycle())) == 1);
    auto one = build_fock(make_graph({"v"}, {}), 1);
    CHECK(commutant_dimension(one) == 1);
    auto twice = direct_sum({build_cycle_exact(two_cycle()),
                             build_cycle_exact(two_cycle())});
    CHECK(commutant_dimension(twice) >= 2);
}

TEST_CASE("singular vertices with ranks, single color") {
    auto fam = build_fock(two_cycle(), 3);
    auto sv = singular_vertices(fam);
    REQUIRE(sv.size() == 2);
    for (const auto& [v, rank] : sv) CHECK(rank == 1);
}

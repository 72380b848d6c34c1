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

std::shared_ptr<const Graph> edgeless() { return make_graph({"a", "b"}, {}); }

}  // namespace

TEST_CASE("fock family on the loop is the nilpotent shift") {
    auto fam = build_fock(loop(), 3);
    REQUIRE(fam.dimension == 4);
    Matrix expect = Matrix::Zero(4, 4);
    for (int i = 0; i < 3; ++i) expect(i + 1, i) = 1.0;  // lengths 0->1->2->3
    CHECK(op_norm(fam.S[0] - expect) == 0.0);
    CHECK(op_norm(fam.P[0] - Matrix::Identity(4, 4)) == 0.0);
    // interior drops the top length layer
    for (int i = 0; i < 4; ++i)
        CHECK(fam.interior(i, i) == Complex(i < 3 ? 1.0 : 0.0));
    CHECK_THROWS_AS(build_fock(loop(), 0), std::invalid_argument);
}

TEST_CASE("fock family on the edgeless graph") {
    auto fam = build_fock(edgeless(), 5);
    CHECK(fam.dimension == 2);
    for (const Matrix& p : fam.P) CHECK(std::abs(p.trace()) == 1.0);
    CHECK(check_full_ck(fam).classification == Classification::FULL_CK);
}

TEST_CASE("fock isometry relation holds on the interior") {
    gen::Rng rng(42);
    for (int t = 0; t < 15; ++t) {
        auto g = gen::random_graph(rng, 4, 5);
        auto fam = build_fock(g, gen::pick(rng, 1, 4));
        for (int e = 0; e < g->num_edges(); ++e) {
            Matrix lhs = fam.S[e].adjoint() * fam.S[e];
            CHECK(fam.interior_residual(lhs, fam.P[g->edge(e).src]) <= 1e-12);
        }
    }
}

TEST_CASE("pi_v on the edgeless graph is one-dimensional") {
    auto g = edgeless();
    auto fam = build_pi_v(g, 0, 3);
    CHECK(fam.dimension == 1);
    CHECK(fam.P[0](0, 0) == Complex(1.0));
    CHECK(fam.P[1](0, 0) == Complex(0.0));
}

TEST_CASE("rho_infty on the loop is interior full CK") {
    auto g = loop();
    TailSelection tails = TailSelection::select(*g);
    auto fam = build_rho_infty(g, tails, 4);
    RelationReport rep = check_full_ck(fam);
    CHECK(rep.classification == Classification::FULL_CK);
    CHECK(op_norm(vertex_defect(fam, 0, 0)) <= 1e-12);
    // every interior vector sits in the range of the edge operator
    Matrix range = fam.S[0] * fam.S[0].adjoint();
    CHECK(op_norm(fam.compress(fam.P[0] - range)) <= 1e-12);
}

TEST_CASE("rho_infty on the edgeless graph is just the vertex projections") {
    auto g = edgeless();
    auto fam = build_rho_infty(g, TailSelection::select(*g), 3);
    CHECK(fam.dimension == 2);
    CHECK(check_full_ck(fam).classification == Classification::FULL_CK);
}

TEST_CASE("cycle-exact families") {
    auto fam1 = build_cycle_exact(loop());
    CHECK(fam1.dimension == 1);
    CHECK(fam1.P[0](0, 0) == Complex(1.0));
    CHECK(std::abs(fam1.S[0](0, 0)) == doctest::Approx(1.0));

    auto fam2 = build_cycle_exact(two_cycle());
    CHECK(fam2.dimension == 2);
    for (int v = 0; v < 2; ++v)
        CHECK(op_norm(vertex_defect(fam2, 0, v)) == 0.0);
    CHECK(check_full_ck(fam2).classification == Classification::FULL_CK);

    auto chain = make_graph({"u", "v"}, {{"a", "u", "v"}});
    CHECK_THROWS(build_cycle_exact(chain));
}

TEST_CASE("gauge unitary at z = 1 is the identity") {
    auto g = two_cycle();
    TailSelection tails = TailSelection::select(*g);
    BackwardBasis basis = rho_infty_basis(*g, tails, 3);
    Matrix u = gauge_unitary(basis, Complex(1.0, 0.0));
    CHECK(op_norm(u - Matrix::Identity(basis.size(), basis.size())) == 0.0);
}

TEST_CASE("gauge covariance of the backward family") {
    auto g = two_cycle();
    TailSelection tails = TailSelection::select(*g);
    auto fam = build_rho_infty(g, tails, 3);
    BackwardBasis basis = rho_infty_basis(*g, tails, 3);
    Complex z = std::polar(1.0, 1.234);
    Matrix u = gauge_unitary(basis, z);
    for (const Matrix& p : fam.P) CHECK(op_norm(u * p * u.adjoint() - p) <= 1e-12);
    for (const Matrix& s : fam.S)
        CHECK(op_norm(fam.compress(u * s * u.adjoint() - z * s)) <= 1e-12);
}

TEST_CASE("direct sum") {
    CHECK_THROWS(direct_sum({}));
    auto block = build_cycle_exact(two_cycle());
    auto sum = direct_sum({block, block});
    CHECK(sum.dimension == 4);
    RelationReport rep = check_full_ck(sum);
    CHECK(rep.classification == Classification::FULL_CK);
    for (int v = 0; v < 2; ++v) CHECK(op_norm(vertex_defect(sum, 0, v)) == 0.0);
}

TEST_CASE("restrict to the full space is the identity operation") {
    auto fam = build_fock(loop(), 3);
    Matrix full = Matrix::Identity(fam.dimension, fam.dimension);
    auto r = restrict_family(fam, full);
    CHECK(op_norm(r.S[0] - fam.S[0]) == 0.0);
    CHECK(op_norm(r.interior - fam.interior) == 0.0);
}

TEST_CASE("restricting to a non-reducing subspace fails") {
    auto fam = build_fock(loop(), 3);
    // span of positive-length paths: S_e* maps length 1 back to the vacuum
    Matrix sub = Matrix::Zero(fam.dimension, fam.dimension - 1);
    for (int i = 1; i < fam.dimension; ++i) sub(i, i - 1) = 1.0;
    CHECK_THROWS(restrict_family(fam, sub));
}

TEST_CASE("restrict picks out a direct summand") {
    auto g = loop();
    auto pi = build_pi_v(g, 0, 3);
    auto cyc = build_cycle_exact(g);
    auto sum = direct_sum({pi, cyc});
    Matrix sub = Matrix::Zero(sum.dimension, 1);
    sub(pi.dimension, 0) = 1.0;
    auto r = restrict_family(sum, sub);
    CHECK(r.dimension == 1);
    CHECK(std::abs(r.S[0](0, 0)) == doctest::Approx(1.0));
    CHECK(check_full_ck(r).classification == Classification::FULL_CK);
}

TEST_CASE("color view extracts one color class") {
    auto g = make_graph({"v"}, {{"e", "v", "v", "0"}, {"f", "v", "v", "1"}});
    auto fam = build_fock(g, 2);
    auto view = color_view(fam, 0);
    CHECK(view.g().num_edges() == 1);
    CHECK(view.g().num_colors() == 1);
    CHECK(check_tck(view).classification != Classification::INVALID);
}

TEST_CASE("labels and label helpers") {
    auto fam = build_fock(loop(), 2);
    REQUIRE(static_cast<int>(fam.labels.size()) == fam.dimension);
    auto g = loop();
    CHECK(path_label(*g, Path::at_vertex(*g, 0)) == fam.labels[0]);
}

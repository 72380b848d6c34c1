#include "doctest.h"

#include "ck/dilate.hpp"
#include "ck/family.hpp"
#include "ck/verify.hpp"
#include "generators.hpp"

using namespace ck;

namespace {

std::shared_ptr<const Graph> loop() { return make_graph({"v"}, {{"e", "v", "v"}}); }

std::shared_ptr<const Graph> two_cycle() {
    return make_graph({"u", "v"}, {{"a", "u", "v"}, {"b", "v", "u"}});
}

double worst_interior_defect(const DilationCertificate& cert) {
    double worst = 0.0;
    for (const auto& [key, n] : cert.interior_defects) worst = std::max(worst, n);
    return worst;
}

}  // namespace

TEST_CASE("one-step dilation at a singular vertex") {
    auto fam = build_pi_v(loop(), 0, 3);
    int before = check_full_ck(fam).colors[0].vertices.at(0).defect_rank;
    REQUIRE(before == 1);

    Dilation d = one_step_dilation(fam, 0, 3, 2);
    CHECK(check_tck(d.family).classification != Classification::INVALID);
    CHECK(d.certificate.max_compression_error <= 1e-10);
    double corner = 0.0;
    for (const auto& [e, n] : d.certificate.corner_norms)
        corner = std::max(corner, n);
    CHECK(corner >= 0.5);

    // the embedded copies' wandering directions are now reachable: the
    // dilated defect no longer contains every inflated vacuum
    Matrix defect = vertex_defect(d.family, 0, 0);
    int copies = 3;
    int hit = 0;
    for (int c = 0; c < copies; ++c) {
        Vector vac = Vector::Zero(d.family.dimension);
        vac(c * fam.dimension) = 1.0;  // vacuum of copy c
        if ((defect * vac).norm() < 0.5) ++hit;
    }
    CHECK(hit > 0);
}

TEST_CASE("one-step dilation refuses full CK input and tiny inflations") {
    auto exact = build_cycle_exact(loop());
    CHECK_THROWS_WITH_AS(one_step_dilation(exact, 0, 2, 2),
                         doctest::Contains("not singular"), std::invalid_argument);
    auto fam = build_pi_v(loop(), 0, 3);
    CHECK_THROWS_WITH_AS(one_step_dilation(fam, 0, 1, 3),
                         doctest::Contains("inflation too small"),
                         std::invalid_argument);
}

TEST_CASE("full CK dilation of an exact family is trivial") {
    auto fam = build_cycle_exact(two_cycle());
    Dilation d = full_ck_dilation(fam, 3);
    CHECK(d.family.dimension == fam.dimension);
    CHECK(d.certificate.max_compression_error <= 1e-12);
    CHECK(worst_interior_defect(d.certificate) <= 1e-12);
    CHECK(gen::max_corner_norm(d.family, d.certificate.embedding) <= 1e-12);
}

TEST_CASE("full CK dilation clears the fock defects") {
    auto fam = build_fock(loop(), 4);
    Dilation d = full_ck_dilation(fam, 3, 2);
    CHECK(worst_interior_defect(d.certificate) <= 1e-9);
    CHECK(d.certificate.max_compression_error <= 1e-9);
    CHECK(check_full_ck(d.family).classification == Classification::FULL_CK);
}

TEST_CASE("full CK dilation of pi_v on the 2-cycle") {
    auto fam = build_pi_v(two_cycle(), 1, 3);
    double before = check_full_ck(fam).colors[0].vertices.at(1).defect_norm;
    REQUIRE(before > 0.5);
    Dilation d = full_ck_dilation(fam, 3, 2);
    CHECK(worst_interior_defect(d.certificate) <= 1e-9);
    CHECK(d.certificate.max_compression_error <= 1e-9);
}

TEST_CASE("compression certificate on a direct summand is free") {
    auto fam = build_fock(loop(), 3);
    auto dilated = direct_sum({fam, build_cycle_exact(loop())});
    Matrix emb = Matrix::Zero(dilated.dimension, fam.dimension);
    emb.block(0, 0, fam.dimension, fam.dimension) =
        Matrix::Identity(fam.dimension, fam.dimension);
    DilationCertificate cert = compression_certificate(fam, dilated, emb, 3);
    CHECK(cert.max_compression_error == 0.0);
    CHECK(cert.monomials_checked > 1);
}

TEST_CASE("certificates notice corruption") {
    auto fam = build_fock(loop(), 4);
    Dilation d = full_ck_dilation(fam, 3, 2);
    // corrupt within the embedded range so the compression must see it
    const Matrix& emb = d.certificate.embedding;
    d.family.S[0] += 1e-3 * emb.col(1) * emb.col(0).adjoint();
    DilationCertificate cert = compression_certificate(
        fam, d.family, d.certificate.embedding, d.certificate.max_degree);
    CHECK(cert.max_compression_error >= 1e-4);
}

TEST_CASE("certificate rejects a non-isometric embedding") {
    auto fam = build_fock(loop(), 3);
    Matrix bad = Matrix::Ones(fam.dimension, fam.dimension);
    CHECK_THROWS(compression_certificate(fam, fam, bad, 2));
}

TEST_CASE("colored dilation, single color, matches the direct construction") {
    auto fam = build_fock(loop(), 3);
    Dilation a = full_ck_dilation(fam, 3, 2);
    Dilation b = colored_full_ck_dilation(fam, 3, 512, 2);
    CHECK(a.certificate.max_compression_error <= 1e-9);
    CHECK(b.certificate.max_compression_error <= 1e-9);
    CHECK(worst_interior_defect(a.certificate) <= 1e-9);
    CHECK(worst_interior_defect(b.certificate) <= 1e-9);
    CHECK(!b.certificate.partial);
}

TEST_CASE("colored dilation leaves a per-color exact family alone") {
    auto g2 = make_graph({"v"}, {{"e", "v", "v", "0"}, {"f", "v", "v", "1"}});
    OperatorFamily both;
    both.graph = g2;
    both.dimension = 1;
    both.P = {Matrix::Identity(1, 1)};
    both.S = {Matrix::Identity(1, 1), Complex(0, 1) * Matrix::Identity(1, 1)};
    both.interior = Matrix::Identity(1, 1);
    Dilation d = colored_full_ck_dilation(both, 4);
    CHECK(d.family.dimension == 1);
    CHECK(d.certificate.max_compression_error == 0.0);
    CHECK(worst_interior_defect(d.certificate) == 0.0);
}

TEST_CASE("colored dilation extends a mixed pair of colors") {
    auto g2 = make_graph({"v"}, {{"e", "v", "v", "0"}, {"f", "v", "v", "1"}});
    auto shift = build_fock(loop(), 3);
    OperatorFamily fam;
    fam.graph = g2;
    fam.dimension = shift.dimension;
    fam.P = {Matrix::Identity(fam.dimension, fam.dimension)};
    fam.S = {shift.S[0], Matrix::Identity(fam.dimension, fam.dimension)};
    fam.interior = shift.interior;
    REQUIRE(check_tck(fam).classification != Classification::INVALID);

    Dilation d = colored_full_ck_dilation(fam, 4, 512);
    CHECK(worst_interior_defect(d.certificate) <= 1e-9);
    CHECK(d.certificate.max_compression_error <= 1e-9);
}

TEST_CASE("colored dilation respects the dimension budget honestly") {
    gen::Rng rng(31);
    ck::OperatorFamily fam = gen::random_colored_family(rng, 2, 40);
    Dilation d = colored_full_ck_dilation(fam, 3, 60);
    if (!d.certificate.partial) CHECK(worst_interior_defect(d.certificate) <= 1e-9);
    CHECK(d.family.dimension <= 60);
    CHECK(d.certificate.max_compression_error <= 1e-9);
}

TEST_CASE("colored dilation validates its color order") {
    auto g2 = make_graph({"v"}, {{"e", "v", "v", "0"}, {"f", "v", "v", "1"}});
    auto fam = build_fock(g2, 2);
    CHECK_THROWS(colored_full_ck_dilation(fam, 2, 512, -1, {0, 0}));
    Dilation d = colored_full_ck_dilation(fam, 2, 512, 1, {1, 0});
    CHECK(d.certificate.max_compression_error <= 1e-9);
}

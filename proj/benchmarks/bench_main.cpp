#include <benchmark/benchmark.h>

#include <random>

#include "ck/dilate.hpp"
#include "ck/expr.hpp"
#include "ck/family.hpp"
#include "ck/staralg.hpp"
#include "ck/verify.hpp"
#include "ck/wold.hpp"

namespace {

std::shared_ptr<const ck::Graph> two_cycle_with_stem() {
    return ck::make_graph({"u", "v", "w"},
                          {{"a", "u", "v"},
                           {"b", "v", "u"},
                           {"c", "w", "v"},
                           {"d", "u", "w"}});
}

void bm_build_fock(benchmark::State& state) {
    auto g = two_cycle_with_stem();
    int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto fam = ck::build_fock(g, depth);
        benchmark::DoNotOptimize(fam.dimension);
    }
}
BENCHMARK(bm_build_fock)->Arg(4)->Arg(6)->Arg(8);

void bm_check_full_ck(benchmark::State& state) {
    auto g = two_cycle_with_stem();
    auto fam = ck::build_fock(g, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto rep = ck::check_full_ck(fam);
        benchmark::DoNotOptimize(rep.projection_residual);
    }
}
BENCHMARK(bm_check_full_ck)->Arg(4)->Arg(6);

void bm_wold_decompose(benchmark::State& state) {
    auto g = two_cycle_with_stem();
    auto fam = ck::build_fock(g, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto w = ck::wold_decompose(fam);
        benchmark::DoNotOptimize(w.total_multiplicity());
    }
}
BENCHMARK(bm_wold_decompose)->Arg(3)->Arg(4)->Arg(5);

void bm_normal_form(benchmark::State& state) {
    auto g = two_cycle_with_stem();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> vtx(0, g->num_vertices() - 1);
    std::uniform_int_distribution<int> edg(0, g->num_edges() - 1);
    std::vector<std::vector<ck::Generator>> words;
    for (int i = 0; i < 64; ++i) {
        std::vector<ck::Generator> w;
        for (int k = 0; k < 8; ++k) {
            switch (kind(rng)) {
                case 0: w.push_back(ck::Generator::p(vtx(rng))); break;
                case 1: w.push_back(ck::Generator::s(edg(rng))); break;
                default: w.push_back(ck::Generator::s_adj(edg(rng))); break;
            }
        }
        words.push_back(std::move(w));
    }
    for (auto _ : state) {
        for (const auto& w : words) {
            auto nf = ck::normal_form(*g, w);
            benchmark::DoNotOptimize(nf.support_size());
        }
    }
}
BENCHMARK(bm_normal_form);

void bm_full_ck_dilation(benchmark::State& state) {
    auto g = two_cycle_with_stem();
    auto fam = ck::build_fock(g, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto d = ck::full_ck_dilation(fam, 3, 2);
        benchmark::DoNotOptimize(d.family.dimension);
    }
}
BENCHMARK(bm_full_ck_dilation)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();

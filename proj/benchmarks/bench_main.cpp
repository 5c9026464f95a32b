#include <benchmark/benchmark.h>

#include "ponconf/celestial.hpp"
#include "ponconf/exact/oracle.hpp"
#include "ponconf/incircle.hpp"
#include "ponconf/scene_io.hpp"
#ifdef PONCONF_HAVE_SERVICE
#include "ponconf/service.hpp"
#endif

using namespace ponconf;

namespace {

PolygonSetup setup(int winding = 1) {
    PolygonSetup s;
    s.family = ConfocalFamily::from_semi_axes(2, 1);
    s.winding = winding;
    s.t0 = 0.37;
    return s;
}

void BM_SolveCaustic(benchmark::State& st) {
    auto fam = ConfocalFamily::from_semi_axes(2, 1);
    const int m = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_caustic(fam, m, 1));
}
BENCHMARK(BM_SolveCaustic)->Arg(7)->Arg(13)->Arg(29)->Unit(benchmark::kMillisecond);

void BM_ConstructGrunbaumRigby(benchmark::State& st) {
    auto sym = parse_symbol("7#(3,1;2,3;1,2)");
    auto p = poncelet_polygon(ConfocalFamily::from_semi_axes(2, 1), 7, 1, 0.37);
    for (auto _ : st) benchmark::DoNotOptimize(construct(sym, p));
}
BENCHMARK(BM_ConstructGrunbaumRigby)->Unit(benchmark::kMicrosecond);

void BM_ConstructThirteen(benchmark::State& st) {
    auto sym = parse_symbol("13#(5,2;4,5;2,4)");
    auto p = poncelet_polygon(ConfocalFamily::from_semi_axes(2, 1), 13, 1, 0.37);
    for (auto _ : st) benchmark::DoNotOptimize(construct(sym, p));
}
BENCHMARK(BM_ConstructThirteen)->Unit(benchmark::kMicrosecond);

void BM_Grid(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    auto edges = v_op(poncelet_polygon(ConfocalFamily::from_semi_axes(2, 1), m, 1, 0.37), 1);
    for (auto _ : st) benchmark::DoNotOptimize(build_grid(edges));
}
BENCHMARK(BM_Grid)->Arg(7)->Arg(13)->Arg(29)->Unit(benchmark::kMicrosecond);

void BM_Nested(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(build_nested(12, {1, 2, 3, 4, 5}));
}
BENCHMARK(BM_Nested)->Unit(benchmark::kMillisecond);

void BM_IncircleCentres(benchmark::State& st) {
    auto edges = v_op(poncelet_polygon(ConfocalFamily::from_semi_axes(2, 1), 13, 1, 0.3), 1);
    for (auto _ : st) benchmark::DoNotOptimize(centers_scene(edges, 2, 4, 5));
}
BENCHMARK(BM_IncircleCentres)->Unit(benchmark::kMicrosecond);

void BM_Lemma1Exact(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(exact::lemma1_sweep(static_cast<std::size_t>(st.range(0)), 42));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Lemma1Exact)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_PolynomialIdentity(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(exact::certify_identity_polynomial());
}
BENCHMARK(BM_PolynomialIdentity)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_SceneJsonRoundTrip(benchmark::State& st) {
    Scene s = symbol_scene(parse_symbol("7#(3,1;2,3;1,2)"), setup());
    for (auto _ : st) benchmark::DoNotOptimize(json_to_scene(scene_to_json(s)));
}
BENCHMARK(BM_SceneJsonRoundTrip)->Unit(benchmark::kMicrosecond);

#ifdef PONCONF_HAVE_SERVICE
// request latency with a warm caustic cache (the service's steady state)
void BM_ServiceSceneWarm(benchmark::State& st) {
    service::LambdaCache cache;
    const std::string body = R"j({"symbol":"13#(5,2;4,5;2,4)","axes":[2,1],"t0":0.37})j";
    service::handle_scene(body, cache);
    for (auto _ : st) benchmark::DoNotOptimize(service::handle_scene(body, cache));
}
BENCHMARK(BM_ServiceSceneWarm)->Unit(benchmark::kMillisecond);

void BM_ServiceSceneCold(benchmark::State& st) {
    const std::string body = R"j({"symbol":"13#(5,2;4,5;2,4)","axes":[2,1],"t0":0.37})j";
    for (auto _ : st) {
        service::LambdaCache cache;
        benchmark::DoNotOptimize(service::handle_scene(body, cache));
    }
}
BENCHMARK(BM_ServiceSceneCold)->Unit(benchmark::kMillisecond);
#endif

}  // namespace

BENCHMARK_MAIN();

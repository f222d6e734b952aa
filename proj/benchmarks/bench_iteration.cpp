#include <benchmark/benchmark.h>

#include "gfb/gfb.hpp"
#include "gfb/problems.hpp"

namespace {

gfb::RestorationSpec composite_tv(std::size_t n) {
    gfb::RestorationSpec s;
    s.size = n;
    s.op = gfb::DegradationKind::blur_mask;
    s.mu = 5e-4;
    s.nu = 5e-3;
    s.S = 4;
    return s;
}

// One generalized forward-backward step on the composite + TV problem.
void BM_GfbIteration(benchmark::State& state) {
    const gfb::RestorationProblem p = gfb::build_restoration(composite_tv(static_cast<std::size_t>(state.range(0))));
    const gfb::GfbProblem gp = gfb::to_gfb_problem(p.forms.forward.problem);
    gfb::SolverConfig c = gfb::SolverConfig::defaults(gp.beta());
    c.n = gp.A.size();
    c.workers = static_cast<std::size_t>(state.range(1));
    const gfb::CheckedConfig cfg = gfb::validate_config(c, gp.beta());
    gfb::GfbState s = gfb::GfbState::zeros(gp.shape, cfg.weights());
    for (auto _ : state) {
        s = gfb::gfb_step(std::move(s), gp, cfg);
        s.t = 0;
    }
    state.counters["terms"] = static_cast<double>(gp.A.size());
}
BENCHMARK(BM_GfbIteration)->Args({64, 1})->Args({64, 4})->Unit(benchmark::kMillisecond);

}  // namespace

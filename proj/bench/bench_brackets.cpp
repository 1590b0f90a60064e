// Compares the parallel bracket kernels against the serial reference
// implementations on representative workloads. Thread count comes from
// OMP_NUM_THREADS.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "psalg/brackets.hpp"
#include "psalg/models.hpp"
#include "psalg/random_expr.hpp"

using namespace psalg;

namespace {

double timeIt(const std::function<PhaseExpr()>& fn, PhaseExpr& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void row(const char* name, const std::function<PhaseExpr()>& optimized,
         const std::function<PhaseExpr()>& reference) {
    PhaseExpr a = optimized();  // warm caches once
    double tOpt = timeIt(optimized, a);
    PhaseExpr b = a;
    double tRef = timeIt(reference, b);
    std::printf("%-34s %10.1f ms %12.1f ms %8.2fx  %s\n", name, tOpt, tRef,
                tOpt > 0 ? tRef / tOpt : 0.0, a.equals(b) ? "match" : "MISMATCH");
    std::fflush(stdout);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %13s %15s %9s\n", "kernel", "parallel", "serial ref", "speedup");

    Context ctx2(2);
    auto model2 = sphereModel(2);
    PhaseExpr lx = -model2->momenta[1];
    PhaseExpr ly = model2->momenta[0];
    PhaseExpr lz = model2->angular[0].value;

    RandomExprPolicy policy;
    policy.seed = 2024;
    ExprGenerator gen(ctx2, policy);
    PhaseExpr f = gen.polynomial(), g = gen.polynomial();

    row("star deg<=3 (N=2)",
        [&] { return star(f, g); },
        [&] { return ref::starDirect(f, g); });

    PhaseExpr k2 = gen.polynomial();
    std::vector<PhaseExpr> qnb4Args{k2, lx, ly, lz};
    row("qnb arity 4 (S^2 law)",
        [&] { return qnb(qnb4Args); },
        [&] { return ref::qnbDirect(qnb4Args); });

    Context ctx3(3);
    auto model3 = sphereModel(3);
    std::vector<PhaseExpr> entries{model3->momenta[0],
                                   PhaseExpr::x(ctx3, 1) * PhaseExpr::p(ctx3, 2) -
                                       PhaseExpr::x(ctx3, 2) * PhaseExpr::p(ctx3, 1),
                                   model3->momenta[1],
                                   PhaseExpr::x(ctx3, 2) * PhaseExpr::p(ctx3, 3) -
                                       PhaseExpr::x(ctx3, 3) * PhaseExpr::p(ctx3, 2),
                                   model3->momenta[2]};
    std::vector<PhaseExpr> qnb6Args{PhaseExpr::x(ctx3, 1)};
    for (const auto& e : entries) qnb6Args.push_back(e);
    row("qnb arity 6 (S^3 law, k = x1)",
        [&] { return qnb(qnb6Args); },
        [&] { return ref::qnbDirect(qnb6Args); });

    // Jacobians over the actual workload shape: invariant entries carrying s
    // (so every derivative row brings u-power denominators) plus a random k.
    RandomExprPolicy p3;
    p3.seed = 4096;
    p3.maxDegX = 2;
    p3.maxDegP = 2;
    p3.allowS = true;
    ExprGenerator gen3(ctx3, p3);
    std::vector<PhaseExpr> det6{gen3.polynomial()};
    for (const auto& e : entries) det6.push_back(e);
    row("cnb 6x6 Jacobian (S^3 entries)",
        [&] { return cnb(det6); },
        [&] { return ref::jacobianDirect(det6); });

    Context ctx4(4);
    auto model4 = sphereModel(4);
    RandomExprPolicy p4;
    p4.seed = 8192;
    p4.maxDegX = 2;
    p4.maxDegP = 1;
    p4.allowS = true;
    ExprGenerator gen4(ctx4, p4);
    std::vector<PhaseExpr> det8{gen4.polynomial()};
    det8.push_back(model4->momenta[0]);
    for (int a = 1; a < 4; ++a) {
        det8.push_back(PhaseExpr::x(ctx4, a) * PhaseExpr::p(ctx4, a + 1) -
                       PhaseExpr::x(ctx4, a + 1) * PhaseExpr::p(ctx4, a));
        det8.push_back(model4->momenta[static_cast<std::size_t>(a)]);
    }
    row("cnb 8x8 Jacobian (S^4 entries)",
        [&] { return cnb(det8); },
        [&] { return ref::jacobianDirect(det8); });

    return 0;
}

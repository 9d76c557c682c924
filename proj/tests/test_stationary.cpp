#include "tumorlin/stationary.hpp"

#include <cmath>

#include "check.hpp"
#include "tumorlin/bessel.hpp"
#include "tumorlin/errors.hpp"

using namespace tumorlin;

namespace {

KineticParams bench() {
    KineticParams p;
    p.n = 3;
    p.lambda_nutrient = 1.0;
    p.k_B = 3.0;
    p.k_D = 2.0;
    p.k_P = 2.0;
    p.k_Q = 1.0;
    p.gamma = 1.0;
    return p;
}

} // namespace

int main() {
    testkit::section("nutrient closed form, n=3 sinh oracle");
    {
        KineticParams prm = bench();
        RadialGrid g(1.0, 4096);
        std::vector<double> c, dc;
        solve_c(prm, 1.0, g, c, dc);
        CHECK_CLOSE(c[0], 1.0 / std::sinh(1.0), 1e-12);    // (R/r) sinh(sl r)/sinh(sl R) at r->0
        CHECK_CLOSE(c[0], 0.8509181282, 1e-9);
        CHECK_CLOSE(c[g.N], 1.0, 1e-14);
        for (int i = 1; i < g.N; i += 37) {
            const double r = g.r(i);
            CHECK_CLOSE(c[i], (1.0 / r) * std::sinh(r) / std::sinh(1.0), 1e-13);
            const double dref = (std::cosh(r) / r - std::sinh(r) / (r * r)) / std::sinh(1.0);
            CHECK_CLOSE(dc[i], dref, 1e-12);
        }
        // central-difference residual: truncation O(h^2) plus the eps/h^2
        // noise floor; 1e-7 is the tight achievable bound at this grid
        double worst = 0.0;
        for (int i = 1; i < g.N; ++i) {
            const double r = g.r(i);
            const double lap = (c[i + 1] - 2 * c[i] + c[i - 1]) / (g.h() * g.h()) +
                               (prm.n - 1) / r * (c[i + 1] - c[i - 1]) / (2 * g.h());
            worst = std::max(worst, std::abs(lap - prm.lambda_nutrient * c[i]));
        }
        CHECK_MSG(worst <= 1e-7 * prm.lambda_nutrient, "central-difference residual of the c equation");

        // stronger oracle: march the radial equation with RK4 from a series
        // seed at the center and compare values pointwise
        {
            const int M = 4096;
            const double hh = 1.0 / M;
            // y = (u, z): u' = z, z' = lam*u - (n-1)/r z, u(0)=1, z(0)=0
            std::vector<double> u(M + 1);
            u[0] = 1.0;
            double ur = 1.0 + prm.lambda_nutrient * hh * hh / 6.0; // series through O(r^2), n=3
            double zr = prm.lambda_nutrient * hh / 3.0;
            u[1] = ur;
            auto f2 = [&](double r, double uu, double zz) {
                return prm.lambda_nutrient * uu - (prm.n - 1) / r * zz;
            };
            for (int i = 1; i < M; ++i) {
                const double r = i * hh;
                const double k1u = zr, k1z = f2(r, ur, zr);
                const double k2u = zr + 0.5 * hh * k1z, k2z = f2(r + 0.5 * hh, ur + 0.5 * hh * k1u, zr + 0.5 * hh * k1z);
                const double k3u = zr + 0.5 * hh * k2z, k3z = f2(r + 0.5 * hh, ur + 0.5 * hh * k2u, zr + 0.5 * hh * k2z);
                const double k4u = zr + hh * k3z, k4z = f2(r + hh, ur + hh * k3u, zr + hh * k3z);
                ur += hh / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
                zr += hh / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
                u[i + 1] = ur;
            }
            for (int i = 0; i <= M; i += 17) CHECK_CLOSE(c[i], u[i] / u[M], 1e-10);
        }
    }

    testkit::section("nutrient flat limit and overflow guard");
    {
        KineticParams prm = bench();
        prm.lambda_nutrient = 1e-4;
        RadialGrid g(1.0, 256);
        std::vector<double> c, dc;
        solve_c(prm, 1.0, g, c, dc);
        CHECK_CLOSE(c[0], 1.0, 1e-4);

        // sqrt(lambda)*R = 800 would overflow e^x; the log-domain series must not
        prm.lambda_nutrient = 1.0;
        const double cval = bessel_q_ratio(0.5, 792.0, 800.0) ; // = (800/792) sinh(792)/sinh(800) / (800/792)...
        // Q_{1/2}(x) = sinh(x)/x * sqrt(2/pi)/ ... ratios: Q(x)/Q(X) = (X/x) sinh x / sinh X
        const double ref = (800.0 / 792.0) * std::exp(-8.0); // sinh ratio collapses to e^{-8}
        CHECK_CLOSE(cval / ref, 1.0, 1e-12);
    }

    testkit::section("n=2 and n=4 nutrient profiles are regular");
    for (int n : {2, 4}) {
        KineticParams prm = bench();
        prm.n = n;
        RadialGrid g(2.0, 512);
        std::vector<double> c, dc;
        solve_c(prm, 2.0, g, c, dc);
        CHECK(c[0] > 0.0 && c[0] < 1.0);
        CHECK_CLOSE(dc[0], 0.0, 1e-14);
        for (int i = 1; i <= g.N; ++i) CHECK_MSG(dc[i] > 0.0, "c' > 0");
    }

    testkit::section("stationary solve, benchmark parameters");
    StationarySolution sol;
    {
        SolverOptions opts;
        opts.grid_n = 1024;
        sol = solve_stationary(bench(), opts);
        std::printf("   R_s(N=1024) = %.12f  theta = %.3f  c_s(0) = %.6f  g*(0) = %.6f\n", sol.R_s,
                    sol.series.theta, sol.series.c_center, sol.g_star[0]);
        CHECK(sol.R_s > 0.0);
        // regression baseline, recorded from the first verified run
        CHECK_CLOSE(sol.R_s, 14.69385073370122, 1e-9);
        CHECK(sol.shoot_residual <= 1e-8 * sol.R_s);
        CHECK_CLOSE(sol.p[0], alpha_root(sol.params, sol.c[0]), 1e-12);
        CHECK_MSG(sol.g_star[0] < 0.0, "g*(0) < 0 at the solution");
        CHECK_MSG(sol.series.theta > 2.0, "theta > 2 under the parameter conditions");

        const ValidationReport rep = validate_stationary(sol);
        for (const auto& it : rep.items)
            if (!it.pass)
                std::printf("   validation item failed: %s (node %d, value %.3e)\n", it.name.c_str(),
                            it.worst_node, it.worst_value);
        CHECK_MSG(rep.all_pass, "all stationary validation items pass");
        CHECK(rep.c2_fit > 0.0);
        CHECK(rep.c1_fit >= rep.c2_fit);

        // v'(0) consistency: v(r)/r -> g*(0)/n
        const double r1 = sol.grid.r(1);
        CHECK_CLOSE(sol.v[1] / r1, sol.g_star[0] / sol.params.n, 5e-6);
        // and the stored derivative matches the expansion
        CHECK_CLOSE(sol.dv[0], sol.series.v1, 1e-14);
    }

    testkit::section("forced failure path in validation");
    {
        StationarySolution bad = sol;
        for (auto& x : bad.p) x = -x;
        const ValidationReport rep = validate_stationary(bad);
        bool found = false;
        for (const auto& it : rep.items)
            if (it.name.find("cell fraction inside (0,1)") != std::string::npos) {
                CHECK_MSG(!it.pass, "negated p must fail the range check");
                CHECK(it.worst_node >= 0);
                found = true;
            }
        CHECK(found);
        CHECK(!rep.all_pass);
    }

    testkit::section("grid refinement: R_s Cauchy at second order or better");
    {
        SolverOptions o1, o2, o3;
        o1.grid_n = 512;
        o2.grid_n = 1024;
        o3.grid_n = 2048;
        const double R1 = solve_stationary(bench(), o1).R_s;
        const double R2 = solve_stationary(bench(), o2).R_s;
        const double R3 = solve_stationary(bench(), o3).R_s;
        const double d12 = std::abs(R2 - R1), d23 = std::abs(R3 - R2);
        std::printf("   R_s: %.12f %.12f %.12f  |d12|=%.3e |d23|=%.3e\n", R1, R2, R3, d12, d23);
        CHECK_MSG(d23 * 3.0 <= d12 + 1e-13, "refinement ratio >= 3 (order >= ~2)");
    }

    testkit::section("sigma profile");
    {
        const std::vector<double> s = sol.sigma();
        CHECK_CLOSE(s.back(), sol.params.gamma / sol.R_s, 1e-14);
        for (int i = 1; i <= sol.grid.N; ++i) CHECK_MSG(s[i] >= s[i - 1], "sigma nondecreasing");
    }

    testkit::section("solver error paths");
    {
        KineticParams bad = bench();
        bad.k_D = 3.0; // violates k_B > k_D
        bool threw = false;
        try {
            solve_stationary(bad);
        } catch (const ConditionViolated&) {
            threw = true;
        }
        CHECK(threw);

        SolverOptions narrow;
        narrow.grid_n = 256;
        narrow.bracket_lo = 0.1;
        narrow.bracket_hi = 0.12; // no sign change in this sliver
        narrow.bracket_points = 8;
        threw = false;
        try {
            solve_stationary(bench(), narrow);
        } catch (const NoBracket&) {
            threw = true;
        }
        CHECK(threw);
    }

    return testkit::done();
}

#include "tumorlin/modes.hpp"

#include <cmath>
#include <random>

#include "check.hpp"
#include "tumorlin/errors.hpp"
#include "tumorlin/harmonics.hpp"
#include "tumorlin/quadrature.hpp"

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
    return p;
}

StationarySolution solve_bench(int N) {
    SolverOptions o;
    o.grid_n = N;
    return solve_stationary(bench(), o);
}

std::vector<double> chebyshev_profile(const StationarySolution& sol, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 8> a;
    for (auto& x : a) x = u(rng);
    std::vector<double> out(sol.nodes());
    double sup = 0.0;
    for (int i = 0; i < sol.nodes(); ++i) {
        const double x = 2.0 * sol.grid.r(i) / sol.R_s - 1.0;
        double t0 = 1.0, t1 = x, v = a[0] + a[1] * x;
        for (int j = 2; j < 8; ++j) {
            const double t2 = 2.0 * x * t1 - t0;
            v += a[j] * t2;
            t0 = t1;
            t1 = t2;
        }
        out[i] = v;
        sup = std::max(sup, std::abs(v));
    }
    for (auto& x : out) x /= sup;
    return out;
}

double supdiff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

double supabs(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

} // namespace

int main() {
    const StationarySolution sol = solve_bench(2048);
    const int N = sol.grid.N;
    const double R = sol.R_s;
    const double h = sol.h();

    testkit::section("u_k closed form, envelopes, monotonicity");
    {
        // k=0 coincides with the nutrient profile when n=3
        const std::vector<double> u0 = solve_uk(sol, 0);
        CHECK(supdiff(u0, sol.c) <= 1e-14);

        // u_1 = R c'(r) / (r c'(R))
        const std::vector<double> u1 = solve_uk(sol, 1);
        double worst = 0.0;
        for (int i = 1; i <= N; ++i)
            worst = std::max(worst, std::abs(u1[i] * sol.grid.r(i) * sol.dc[N] - R * sol.dc[i]));
        CHECK_MSG(worst <= 1e-12, "u_1 identity");

        // bounds and k-monotonicity for k = 0..12, C = lambda * R_s
        const double C = sol.params.lambda_nutrient * R;
        std::vector<double> prev;
        for (int k = 0; k <= 12; ++k) {
            const std::vector<double> uk = solve_uk(sol, k);
            CHECK_CLOSE(uk[N], 1.0, 0.0);
            const ModeData md = assemble_mode(sol, k, 1.0);
            for (int i = 0; i <= N; ++i) {
                const double r = sol.grid.r(i);
                CHECK_MSG(uk[i] > 0.0 && uk[i] <= 1.0 + 1e-15, "0 < u_k <= 1");
                CHECK_MSG(uk[i] >= 1.0 - C * (R - r) / (sol.params.n + 2 * k) - 1e-12, "lower envelope bound");
                CHECK_MSG(md.du_k[i] >= -1e-15 && md.du_k[i] <= C * r / (sol.params.n + 2 * k) + 1e-12,
                          "derivative envelope bound");
                if (k > 0) CHECK_MSG(uk[i] >= prev[i] - 1e-13, "monotone in k");
            }
            prev = uk;
        }

        // u_0 sits strictly above r c'(r)/(R c'(R)) in the interior
        for (int i = 1; i < N; ++i)
            CHECK_MSG(u0[i] > sol.grid.r(i) * sol.dc[i] / (R * sol.dc[N]), "u_0 comparison");

        // equation residual under central differences (eps/h^2 noise floor applies)
        const std::vector<double> u3 = solve_uk(sol, 3);
        double res = 0.0;
        for (int i = 1; i < N; ++i) {
            const double r = sol.grid.r(i);
            const double lap = (u3[i + 1] - 2 * u3[i] + u3[i - 1]) / (h * h) +
                               (sol.params.n + 2 * 3 - 1) / r * (u3[i + 1] - u3[i - 1]) / (2 * h);
            res = std::max(res, std::abs(lap - sol.params.lambda_nutrient * u3[i]));
        }
        CHECK_MSG(res <= 1e-4, "u_3 equation residual"); // O(h^2) truncation at this grid
    }

    testkit::section("green_apply analytic case and linearity");
    {
        std::vector<double> ones(N + 1, 1.0);
        const std::vector<double> w = green_apply(sol, 0, ones);
        double worst = 0.0;
        for (int i = 0; i <= N; ++i) {
            const double r = sol.grid.r(i);
            worst = std::max(worst, std::abs(w[i] - (r * r - R * R) / 6.0));
        }
        CHECK_MSG(worst <= 1e-4 * R * R, "k=0 unit source");

        std::vector<double> zeros(N + 1, 0.0);
        CHECK(supabs(green_apply(sol, 3, zeros)) == 0.0);
    }

    testkit::section("green_apply inverse check, k in {0,1,2,5}");
    {
        std::mt19937_64 rng(42);
        for (int k : {0, 1, 2, 5}) {
            const std::vector<double> f = chebyshev_profile(sol, rng);
            const std::vector<double> w = green_apply(sol, k, f);
            const double lk = static_cast<double>(eigenvalue_lambda(sol.params.n, k));
            double worst = 0.0;
            for (int i = N / 10; i <= 9 * N / 10; ++i) {
                const double r = sol.grid.r(i);
                const double lap = (w[i + 1] - 2 * w[i] + w[i - 1]) / (h * h) +
                                   (sol.params.n - 1) / r * (w[i + 1] - w[i - 1]) / (2 * h) -
                                   lk / (r * r) * w[i];
                worst = std::max(worst, std::abs(lap - f[i]));
            }
            CHECK_MSG(worst <= 2e-3, "discrete radial operator reproduces f");
        }
    }

    testkit::section("assemble_mode: translation-mode exactness");
    {
        for (double g : {5.0, 50.0, 500.0}) {
            const ModeData m1 = assemble_mode(sol, 1, g);
            const ModeData m2 = assemble_mode(sol, 2, g);
            CHECK_MSG(std::abs(m1.alpha_tilde_k) <= 1e-7, "alpha_tilde_1 = 0");
            CHECK_MSG(supabs(m1.c_k) <= 1e-5 * supabs(m2.c_k), "c_1 = 0");
        }
        const ModeData a = assemble_mode(sol, 0, 5.0);
        const ModeData b = assemble_mode(sol, 0, 500.0);
        CHECK_CLOSE(a.alpha_tilde_k, b.alpha_tilde_k, 1e-14);
        CHECK_CLOSE(a.alpha_k, b.alpha_k, 1e-14);
    }

    testkit::section("assemble_mode: a_k limits, v_k bounds, alpha routes");
    {
        // k-uniform bound for v_k at u == 1
        std::vector<double> cap(N + 1);
        for (int i = 0; i <= N; ++i)
            cap[i] = sol.gp_star[i] * sol.dp[i] +
                     sol.dc[N] / R * sol.gc_star[i] * sol.grid.r(i);
        for (int k = 0; k <= 12; ++k) {
            const ModeData md = assemble_mode(sol, k, 7.0);
            CHECK_CLOSE(md.a_kR, sol.fp_star[N], 1e-10);
            for (int i = 0; i <= N; ++i) {
                CHECK_MSG(md.v_k[i] >= -1e-12, "v_k >= 0");
                CHECK_MSG(md.v_k[i] <= cap[i] + 1e-12, "v_k <= k-uniform envelope");
            }
            CHECK_MSG(md.mu_k < 0.0, "mu_k < 0");
            CHECK_MSG(md.mu_k <= std::max((1.0 + static_cast<double>(k) / sol.params.n) * sol.g_star[0],
                                          sol.fp_star[N]) + 1e-9,
                      "mu_k chain bound");

            // alpha_tilde = alpha - J_k(s_k) with Simpson on the same nodes
            std::vector<double> integ(N + 1);
            for (int i = 0; i <= N; ++i)
                integ[i] = std::exp((sol.params.n + k - 1) *
                                    (i == 0 ? -745.0 : std::log(sol.grid.r(i) / R))) *
                           sol.gp_star[i] * md.s_k[i];
            if (sol.params.n + k - 1 == 0) integ[0] = sol.gp_star[0] * md.s_k[0];
            else integ[0] = 0.0;
            const double Js = simpson(integ, h);
            CHECK_CLOSE(md.alpha_tilde_k, md.alpha_k - Js, 2e-7 * std::max(1.0, std::abs(md.alpha_k)));
        }
        // a_0(0) = (n-2) v1 + f_p*(0)
        const ModeData m0 = assemble_mode(sol, 0, 7.0);
        CHECK_CLOSE(m0.a_k0, (sol.params.n - 2) * sol.series.v1 + sol.fp_star[0], 1e-10);
    }

    testkit::section("operator identities");
    {
        std::mt19937_64 rng(7);
        ApplyScratch scratch;
        for (int k : {0, 1, 2, 5, 9}) {
            const ModeData md = assemble_mode(sol, k, 11.0);
            const std::vector<double> phi = chebyshev_profile(sol, rng);
            const std::vector<double> lt = apply_operator(sol, md, OperatorTag::Ltilde_k, phi);
            const std::vector<double> l0 = apply_operator(sol, md, OperatorTag::L0, phi);
            const std::vector<double> kk = apply_operator(sol, md, OperatorTag::K_k, phi);
            double scale = supabs(lt) + supabs(l0);
            for (int i = 0; i <= N; ++i)
                CHECK_MSG(std::abs(lt[i] - l0[i] - kk[i]) <= 1e-12 * scale, "Ltilde = L0 + K");

            const std::vector<double> lh = apply_operator(sol, md, OperatorTag::Lhat_k, phi);
            const std::vector<double> lhp = apply_operator(sol, md, OperatorTag::Lhat_plus_k, phi);
            const double J = functional_J(sol, phi);
            scale = supabs(lh) + supabs(lhp);
            for (int i = 0; i <= N; ++i)
                CHECK_MSG(std::abs(lh[i] - (lhp[i] - J * md.e_k[i])) <= 1e-12 * scale,
                          "Lhat = Lhat_plus - J e_k");
        }
    }

    testkit::section("conjugation identity (tilde vs hat flows)");
    {
        // psi supported away from both singular ends
        for (int k : {0, 1, 2, 5}) {
            const ModeData md = assemble_mode(sol, k, 11.0);
            std::vector<double> psi(N + 1, 0.0), phi(N + 1, 0.0);
            for (int i = 0; i <= N; ++i) {
                const double x = sol.grid.r(i) / R;
                if (x > 0.2 && x < 0.8) {
                    const double t = (x - 0.2) / 0.6;
                    psi[i] = std::pow(std::sin(M_PI * t), 4) * std::cos(3.0 * t);
                }
                const double w = (sol.grid.r(i) == 0.0)
                                     ? 0.0
                                     : std::exp(-(sol.params.n + k - 1) * std::log(sol.grid.r(i) / R)) *
                                           sol.dp[i];
                phi[i] = w * psi[i];
            }
            const std::vector<double> lhs = apply_operator(sol, md, OperatorTag::Ltilde_k, phi,
                                                           DerivScheme::Central);
            const std::vector<double> rhs = apply_operator(sol, md, OperatorTag::Lhat_k, psi,
                                                           DerivScheme::Central);
            double worst = 0.0, scale = 0.0;
            for (int i = N / 5 + 2; i <= 4 * N / 5 - 2; ++i) {
                const double w = std::exp(-(sol.params.n + k - 1) * std::log(sol.grid.r(i) / R)) *
                                 sol.dp[i];
                worst = std::max(worst, std::abs(lhs[i] - w * rhs[i]));
                scale = std::max(scale, std::abs(lhs[i]));
            }
            CHECK_MSG(worst <= 1e-3 * std::max(scale, 1e-6), "conjugation holds on interior nodes");
        }
    }

    testkit::section("c_k route identity: c_k = b_k + alpha_k s_k - Ltilde_k s_k");
    {
        for (int k : {0, 2, 3, 6}) {
            const ModeData md = assemble_mode(sol, k, 11.0);
            const std::vector<double> Ls = apply_operator(sol, md, OperatorTag::Ltilde_k, md.s_k,
                                                          DerivScheme::Central);
            double worst = 0.0, scale = supabs(md.c_k) + supabs(md.b_k) + 1e-12;
            for (int i = 2; i <= N - 2; ++i)
                worst = std::max(worst, std::abs(md.c_k[i] - (md.b_k[i] + md.alpha_k * md.s_k[i] - Ls[i])));
            std::printf("   k=%d c_k-route residual %.3e (scale %.3e)\n", k, worst, scale);
            CHECK_MSG(worst <= 2e-2 * scale, "two routes to c_k agree");
        }
    }

    testkit::section("cubic-in-k surface damping for large gamma");
    {
        // alpha_tilde_k(gamma) <= -c k^3 gamma with one c > 0 across k and
        // gamma, valid once gamma clears the threshold regime (~230 here);
        // checked at gamma in {500, 1000} over k = 2..20
        double c_fit = 1e300;
        for (double g : {500.0, 1000.0}) {
            for (int k = 2; k <= 20; ++k) {
                const ModeData md = assemble_mode(sol, k, g);
                const double ratio = md.alpha_tilde_k / (static_cast<double>(k) * k * k * g);
                c_fit = std::min(c_fit, -ratio);
            }
        }
        std::printf("   fitted c in alpha_tilde <= -c k^3 gamma: %.3e\n", c_fit);
        CHECK_MSG(c_fit > 0.0, "single positive constant works for all surveyed cells");
    }

    testkit::section("J functionals");
    {
        std::mt19937_64 rng(19);
        const std::vector<double> phi = chebyshev_profile(sol, rng);
        const std::vector<double> chi = chebyshev_profile(sol, rng);
        std::vector<double> zero(N + 1, 0.0), comb(N + 1);
        CHECK(functional_J(sol, zero) == 0.0);
        for (int i = 0; i <= N; ++i) comb[i] = 2.0 * phi[i] - 3.0 * chi[i];
        for (int k : {0, 1, 4}) {
            const double lhsv = functional_Jk(sol, k, comb);
            const double rhs = 2.0 * functional_Jk(sol, k, phi) - 3.0 * functional_Jk(sol, k, chi);
            CHECK_CLOSE(lhsv, rhs, 1e-12 * (std::abs(lhsv) + 1.0));
        }
        std::vector<double> pos(N + 1, 0.3);
        CHECK(functional_J(sol, pos) >= 0.0);
        CHECK(functional_Jk(sol, 2, pos) >= 0.0);
    }

    testkit::section("translation mode residual");
    {
        const TranslationResidual tr = translation_mode_residual(sol, 50.0);
        std::printf("   res_c1=%.3e res_alpha1=%.3e res_stationary=%.3e\n", tr.res_c1,
                    tr.res_alpha1, tr.res_stationary);
        CHECK(tr.res_alpha1 <= 1e-7);
        // grid-limited at O(h^2); 1e-5 is the benchmark-grid (N=4096) figure
        const double gridfac = (4096.0 / N) * (4096.0 / N);
        CHECK(tr.res_stationary <= 1e-5 * gridfac);
        const ModeData m1 = assemble_mode(sol, 1, 50.0);
        CHECK_CLOSE(tr.res_alpha1, std::abs(m1.alpha_tilde_k), 0.0);
    }

    testkit::section("unsupported edges");
    {
        bool threw = false;
        try {
            assemble_mode(sol, 200, 1.0);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        CHECK(threw);
    }

    return testkit::done();
}

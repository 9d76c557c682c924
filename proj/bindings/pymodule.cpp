#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tumorlin/evolution.hpp"
#include "tumorlin/harmonics.hpp"
#include "tumorlin/kinetics.hpp"
#include "tumorlin/modes.hpp"
#include "tumorlin/stability.hpp"
#include "tumorlin/stationary.hpp"

namespace py = pybind11;
using namespace tumorlin;

PYBIND11_MODULE(_tumorlin, m) {
    m.doc() = "two-species tumor model: radial stationary state and linearized mode dynamics";

    py::class_<KineticParams>(m, "KineticParams")
        .def(py::init([](int n, double lam, double kB, double kD, double kP, double kQ,
                         double gamma) {
                 KineticParams p;
                 p.n = n;
                 p.lambda_nutrient = lam;
                 p.k_B = kB;
                 p.k_D = kD;
                 p.k_P = kP;
                 p.k_Q = kQ;
                 p.gamma = gamma;
                 return p;
             }),
             py::arg("n") = 3, py::arg("lam") = 1.0, py::arg("k_B") = 3.0, py::arg("k_D") = 2.0,
             py::arg("k_P") = 2.0, py::arg("k_Q") = 1.0, py::arg("gamma") = 50.0)
        .def_readwrite("n", &KineticParams::n)
        .def_readwrite("lam", &KineticParams::lambda_nutrient)
        .def_readwrite("k_B", &KineticParams::k_B)
        .def_readwrite("k_D", &KineticParams::k_D)
        .def_readwrite("k_P", &KineticParams::k_P)
        .def_readwrite("k_Q", &KineticParams::k_Q)
        .def_readwrite("gamma", &KineticParams::gamma);

    py::class_<RateBundle>(m, "RateBundle")
        .def_readonly("F", &RateBundle::F)
        .def_readonly("K_B", &RateBundle::K_B)
        .def_readonly("K_D", &RateBundle::K_D)
        .def_readonly("K_P", &RateBundle::K_P)
        .def_readonly("K_Q", &RateBundle::K_Q)
        .def_readonly("K_M", &RateBundle::K_M)
        .def_readonly("K_N", &RateBundle::K_N);

    py::class_<FGBundle>(m, "FGBundle")
        .def_readonly("f", &FGBundle::f)
        .def_readonly("g", &FGBundle::g)
        .def_readonly("f_c", &FGBundle::f_c)
        .def_readonly("f_p", &FGBundle::f_p)
        .def_readonly("g_c", &FGBundle::g_c)
        .def_readonly("g_p", &FGBundle::g_p);

    m.def("eval_rates", &eval_rates, py::arg("params"), py::arg("c"));
    m.def("eval_fg", &eval_fg, py::arg("params"), py::arg("c"), py::arg("p"));
    m.def("alpha_root", &alpha_root, py::arg("params"), py::arg("c"));
    m.def("check_conditions", [](const KineticParams& p) {
        const ConditionReport rep = check_conditions(p);
        py::dict out;
        out["satisfies_1_25"] = rep.satisfies_1_25;
        py::list checks;
        for (const auto& c : rep.checks) {
            py::dict d;
            d["inequality"] = c.inequality;
            d["pass"] = c.pass;
            checks.append(d);
        }
        out["checks"] = checks;
        return out;
    });

    py::class_<SolverOptions>(m, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("grid_n", &SolverOptions::grid_n)
        .def_readwrite("shoot_tol", &SolverOptions::shoot_tol)
        .def_readwrite("require_conditions", &SolverOptions::require_conditions);

    py::class_<LocalExpansion>(m, "LocalExpansion")
        .def_readonly("c_center", &LocalExpansion::c_center)
        .def_readonly("p0", &LocalExpansion::p0)
        .def_readonly("v1", &LocalExpansion::v1)
        .def_readonly("c0_coeff", &LocalExpansion::c0_coeff)
        .def_readonly("theta", &LocalExpansion::theta);

    py::class_<StationarySolution>(m, "StationarySolution")
        .def_readonly("R_s", &StationarySolution::R_s)
        .def_readonly("c", &StationarySolution::c)
        .def_readonly("dc", &StationarySolution::dc)
        .def_readonly("p", &StationarySolution::p)
        .def_readonly("dp", &StationarySolution::dp)
        .def_readonly("v", &StationarySolution::v)
        .def_readonly("dv", &StationarySolution::dv)
        .def_readonly("f_star", &StationarySolution::f_star)
        .def_readonly("g_star", &StationarySolution::g_star)
        .def_readonly("fp_star", &StationarySolution::fp_star)
        .def_readonly("gp_star", &StationarySolution::gp_star)
        .def_readonly("series", &StationarySolution::series)
        .def_readonly("shoot_residual", &StationarySolution::shoot_residual)
        .def_property_readonly("r", [](const StationarySolution& s) { return s.grid.node_values(); })
        .def("sigma", &StationarySolution::sigma);

    m.def("solve_stationary", &solve_stationary, py::arg("params"),
          py::arg("options") = SolverOptions{});
    m.def("validate_stationary", [](const StationarySolution& sol) {
        const ValidationReport rep = validate_stationary(sol);
        py::list items;
        for (const auto& it : rep.items) {
            py::dict d;
            d["name"] = it.name;
            d["pass"] = it.pass;
            d["worst_node"] = it.worst_node;
            d["worst_value"] = it.worst_value;
            items.append(d);
        }
        py::dict out;
        out["items"] = items;
        out["all_pass"] = rep.all_pass;
        out["c1_fit"] = rep.c1_fit;
        out["c2_fit"] = rep.c2_fit;
        return out;
    });

    py::enum_<OperatorTag>(m, "OperatorTag")
        .value("L0", OperatorTag::L0)
        .value("L_k", OperatorTag::L_k)
        .value("Ltilde_k", OperatorTag::Ltilde_k)
        .value("K_k", OperatorTag::K_k)
        .value("Lhat_plus_k", OperatorTag::Lhat_plus_k)
        .value("Lhat_k", OperatorTag::Lhat_k);

    py::class_<ModeData>(m, "ModeData")
        .def_readonly("k", &ModeData::k)
        .def_readonly("gamma", &ModeData::gamma)
        .def_readonly("theta_k", &ModeData::theta_k)
        .def_readonly("lambda_k", &ModeData::lambda_k)
        .def_readonly("u_k", &ModeData::u_k)
        .def_readonly("v_k", &ModeData::v_k)
        .def_readonly("c_k", &ModeData::c_k)
        .def_readonly("b_k", &ModeData::b_k)
        .def_readonly("a_k", &ModeData::a_k)
        .def_readonly("e_k", &ModeData::e_k)
        .def_readonly("s_k", &ModeData::s_k)
        .def_readonly("alpha_k", &ModeData::alpha_k)
        .def_readonly("alpha_tilde_k", &ModeData::alpha_tilde_k)
        .def_readonly("mu_k", &ModeData::mu_k);

    m.def("solve_uk", &solve_uk, py::arg("sol"), py::arg("k"));
    m.def("green_apply",
          [](const StationarySolution& sol, int k, const std::vector<double>& f) {
              return green_apply(sol, k, f);
          },
          py::arg("sol"), py::arg("k"), py::arg("f"));
    m.def("assemble_mode", &assemble_mode, py::arg("sol"), py::arg("k"), py::arg("gamma"));
    m.def("apply_operator",
          [](const StationarySolution& sol, const ModeData& md, OperatorTag tag,
             const std::vector<double>& phi) { return apply_operator(sol, md, tag, phi); },
          py::arg("sol"), py::arg("mode"), py::arg("tag"), py::arg("phi"));
    m.def("functional_J",
          [](const StationarySolution& sol, const std::vector<double>& phi) {
              return functional_J(sol, phi);
          });
    m.def("functional_Jk",
          [](const StationarySolution& sol, int k, const std::vector<double>& phi) {
              return functional_Jk(sol, k, phi);
          });
    m.def("translation_mode_residual", [](const StationarySolution& sol, double gamma) {
        const TranslationResidual tr = translation_mode_residual(sol, gamma);
        py::dict d;
        d["res_c1"] = tr.res_c1;
        d["res_alpha1"] = tr.res_alpha1;
        d["res_stationary"] = tr.res_stationary;
        return d;
    });

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("t", &TrajectorySample::t)
        .def_readonly("sup", &TrajectorySample::sup)
        .def_readonly("l1", &TrajectorySample::l1)
        .def_readonly("l2", &TrajectorySample::l2)
        .def_readonly("eta", &TrajectorySample::eta)
        .def_readonly("Jk", &TrajectorySample::Jk);

    py::class_<ModeTrajectory>(m, "ModeTrajectory")
        .def_readonly("k", &ModeTrajectory::k)
        .def_readonly("gamma", &ModeTrajectory::gamma)
        .def_readonly("dt", &ModeTrajectory::dt)
        .def_readonly("samples", &ModeTrajectory::samples);

    py::enum_<CoupledFrame>(m, "CoupledFrame")
        .value("Tilde", CoupledFrame::Tilde)
        .value("Plain", CoupledFrame::Plain);

    py::enum_<NormChoice>(m, "NormChoice")
        .value("Sup", NormChoice::Sup)
        .value("L1", NormChoice::L1)
        .value("L2", NormChoice::L2)
        .value("Eta", NormChoice::Eta)
        .value("Jk", NormChoice::Jk);

    m.def("cfl_dt", &cfl_dt, py::arg("sol"), py::arg("cfl") = 0.5);
    m.def("resolvent_L0",
          [](const StationarySolution& sol, const std::vector<double>& a, double lambda,
             const std::vector<double>& h) { return resolvent_L0(sol, a, lambda, h); });
    m.def("evolve_semigroup",
          [](const StationarySolution& sol, const ModeData& md, OperatorTag tag,
             const std::vector<double>& phi0, double T, double dt) {
              return evolve_semigroup(sol, md, tag, phi0, T, dt);
          },
          py::arg("sol"), py::arg("mode"), py::arg("tag"), py::arg("phi0"), py::arg("T"),
          py::arg("dt"));
    m.def("evolve_coupled",
          [](const StationarySolution& sol, const ModeData& md, double gamma,
             const std::vector<double>& phi0, double eta0, double T, double dt,
             CoupledFrame frame) {
              return evolve_coupled(sol, md, gamma, phi0, eta0, T, dt, frame);
          },
          py::arg("sol"), py::arg("mode"), py::arg("gamma"), py::arg("phi0"), py::arg("eta0"),
          py::arg("T"), py::arg("dt"), py::arg("frame") = CoupledFrame::Tilde);
    m.def("fit_decay", &fit_decay, py::arg("traj"), py::arg("norm"), py::arg("t_lo"),
          py::arg("t_hi"));

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("rate", &DecayFit::rate)
        .def_readonly("r2", &DecayFit::r2)
        .def_readonly("ok", &DecayFit::ok);

    py::class_<SpectralConstants>(m, "SpectralConstants")
        .def_readonly("nu0", &SpectralConstants::nu0)
        .def_readonly("mu0_star", &SpectralConstants::mu0_star)
        .def_readonly("kappa0", &SpectralConstants::kappa0)
        .def_readonly("mu_star", &SpectralConstants::mu_star)
        .def_readonly("lambda2", &SpectralConstants::lambda2)
        .def_readonly("mu_k", &SpectralConstants::mu_k);
    m.def("spectral_constants", &spectral_constants, py::arg("sol"), py::arg("k_max"));

    py::class_<GammaStarEstimate>(m, "GammaStarEstimate")
        .def_readonly("gamma_hat", &GammaStarEstimate::gamma_hat)
        .def_readonly("margin", &GammaStarEstimate::margin)
        .def_readonly("lambda_target", &GammaStarEstimate::lambda_target)
        .def_readonly("binding_k", &GammaStarEstimate::binding_k)
        .def_readonly("alpha_tilde_all_negative", &GammaStarEstimate::alpha_tilde_all_negative);
    m.def("find_gamma_star",
          [](const StationarySolution& sol, const std::vector<int>& ks, double lambda_target,
             double gamma_lo, double gamma_hi, double T, double dt, int threads) {
              return find_gamma_star(sol, ks, lambda_target, {gamma_lo, gamma_hi}, T, dt, threads);
          },
          py::arg("sol"), py::arg("ks"), py::arg("lambda_target"), py::arg("gamma_lo"),
          py::arg("gamma_hi"), py::arg("T"), py::arg("dt"), py::arg("threads") = 1);

    py::class_<Theorem81Report>(m, "Theorem81Report")
        .def_readonly("global_rate", &Theorem81Report::global_rate)
        .def_readonly("r2", &Theorem81Report::r2)
        .def_readonly("C_estimate", &Theorem81Report::C_estimate)
        .def_readonly("dev_total_0", &Theorem81Report::dev_total_0)
        .def_readonly("dev_total_T", &Theorem81Report::dev_total_T)
        .def_readonly("dev_X22_0", &Theorem81Report::dev_X22_0)
        .def_readonly("dev_X22_T", &Theorem81Report::dev_X22_T)
        .def_readonly("c_l", &Theorem81Report::c_l);
    m.def("theorem81_report", &theorem81_report, py::arg("sol"), py::arg("gamma"), py::arg("alpha"),
          py::arg("beta"), py::arg("k_max"), py::arg("T"), py::arg("dt"), py::arg("seed"),
          py::arg("threads") = 1);

    m.def("eigenvalue_lambda", &eigenvalue_lambda, py::arg("n"), py::arg("k"));
    m.def("dimension_d", &dimension_d, py::arg("n"), py::arg("k"));
    m.def("sphere_area", &sphere_area, py::arg("n"));
    m.def("real_harmonic",
          [](int n, int k, int l, const std::vector<double>& omega) {
              return real_harmonic(n, k, l, omega);
          },
          py::arg("n"), py::arg("k"), py::arg("l"), py::arg("omega"));
}

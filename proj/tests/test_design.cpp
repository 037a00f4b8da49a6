#include <cmath>
#include <random>

#include <doctest.h>

#include "qfel/design.hpp"

using namespace qfel;
using constants::pi;

namespace {

bool rel_within(double value, double target, double tol) {
  return std::abs(value - target) <= tol * std::abs(target);
}

DesignInputs table_inputs() { return DesignInputs{}; }

}  // namespace

TEST_CASE("recoil parameter closure at the reference point") {
  const double w = recoil_parameter(51.8, 1.064e-6, 1.14e-3);
  CHECK(rel_within(w, 2.0 * pi, 0.02));
  CHECK(recoil_parameter(51.8, 1.064e-6, 2.28e-3) ==
        doctest::Approx(2.0 * w).epsilon(1e-14));
  CHECK(recoil_parameter(0.0, 1.064e-6, 1.14e-3) == 0.0);
}

TEST_CASE("space-charge budget closure") {
  const double kpL = plasma_kpL(6.39e22, 51.8, 1.14e-3);
  CHECK(rel_within(kpL, 0.1455, 0.005));
  CHECK(plasma_kpL(4.0 * 6.39e22, 51.8, 1.14e-3) ==
        doctest::Approx(2.0 * kpL).epsilon(1e-14));
}

TEST_CASE("budget identity fixes both budgets near 0.145") {
  const DesignInputs in = table_inputs();
  const double rhs = in.budget_identity_rhs();
  CHECK(rhs == doctest::Approx((2.0 * constants::alpha_fine / 3.0) * 0.1 *
                               2.0 * pi)
                   .epsilon(1e-14));
  const double equal_budget = std::cbrt(rhs);
  CHECK(rel_within(equal_budget, 0.145, 0.01));
}

TEST_CASE("spontaneous-emission budget closure") {
  const double RspL = spontaneous_RspL(0.0944, 1.064e-6, 1.14e-3);
  CHECK(rel_within(RspL, 0.145, 0.02));
  CHECK(spontaneous_RspL(0.0, 1.064e-6, 1.14e-3) == 0.0);
  // Consistency against the identity with the other reference entries.
  const double kpL = plasma_kpL(6.39e22, 51.8, 1.14e-3);
  const double wrT = recoil_parameter(51.8, 1.064e-6, 1.14e-3);
  const double rhs = (2.0 * constants::alpha_fine / 3.0) * 0.1 * wrT;
  CHECK(rel_within(kpL * kpL * RspL, rhs, 0.02));
}

TEST_CASE("backscattered resonance wavelength") {
  CHECK(rel_within(resonance_wavelength(51.8, 0.0944, 1.064e-6), 1.0e-10,
                   0.005));
  CHECK(resonance_wavelength(51.8, 0.0, 1.064e-6) ==
        doctest::Approx(1.064e-6 / (4.0 * 51.8 * 51.8)).epsilon(1e-14));
  // gamma0^2 vartheta^2 = 1 + a0^2 doubles the wavelength.
  const double a0 = 0.0944, g = 51.8;
  const double vartheta = std::sqrt(1.0 + a0 * a0) / g;
  CHECK(resonance_wavelength(g, a0, 1.064e-6, pi, vartheta) ==
        doctest::Approx(2.0 * resonance_wavelength(g, a0, 1.064e-6))
            .epsilon(1e-12));
}

TEST_CASE("gain bandwidth") {
  const double G = gain_bandwidth(1.064e-6, 1.14e-3);
  CHECK(rel_within(G, 7.45e-5, 0.005));
  CHECK(gain_bandwidth(1.064e-6, 2.28e-3) == doctest::Approx(G / 2.0).epsilon(1e-14));
}

TEST_CASE("design chain reproduces the reference fundamentals") {
  const DesignReport rep = solve_design_chain(table_inputs());
  CHECK(rel_within(rep.gamma0, 51.8, 0.01));
  CHECK(rel_within(rep.L, 1.14e-3, 0.02));
  CHECK(rel_within(rep.a0, 0.0944, 0.02));
  CHECK(rel_within(rep.n_e, 6.39e22, 0.04));
  CHECK(rel_within(rep.Gamma, 7.45e-5, 0.02));
  // Definitional coupling scale.
  CHECK(rep.g_sqrtN ==
        doctest::Approx(std::sqrt(0.1) * constants::c_light / rep.L)
            .epsilon(1e-14));
  CHECK(rep.iterations >= 2);
}

TEST_CASE("the fixed point depends weakly on the undulator strength") {
  // One resonance inversion from a0 = 0 already lands within 0.5%.
  const DesignInputs in = table_inputs();
  const DesignReport rep = solve_design_chain(in);
  const double gamma_first =
      std::sqrt(in.lambda_W / (2.0 * (1.0 - std::cos(in.phi)) * in.lambda_L));
  CHECK(rel_within(gamma_first, rep.gamma0, 0.005));
}

TEST_CASE("solved budgets satisfy the identity exactly") {
  const DesignReport rep = solve_design_chain(table_inputs());
  const DesignInputs in = table_inputs();
  const double lhs = rep.kpL * rep.kpL * rep.RspL;
  CHECK(lhs == doctest::Approx(in.budget_identity_rhs()).epsilon(1e-12));
  // And the projection preserved the requested budget ratio (here 1).
  CHECK(rep.kpL == doctest::Approx(rep.RspL).epsilon(1e-12));
}

TEST_CASE("identity holds on randomized valid inputs") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int draw = 0; draw < 100; ++draw) {
    DesignInputs in;
    in.lambda_L = 0.5e-10 * std::pow(4.0, u(rng));
    in.lambda_W = 0.5e-6 * std::pow(4.0, u(rng));
    in.gain_G1 = 0.05 + 0.25 * u(rng);
    in.recoil_wrT = pi * (1.0 + 3.0 * u(rng));
    const double balanced = std::cbrt(in.budget_identity_rhs());
    in.kpL_target = balanced * (1.0 + 0.003 * (2.0 * u(rng) - 1.0));
    in.RspL_target = balanced * (1.0 + 0.003 * (2.0 * u(rng) - 1.0));
    const DesignReport rep = solve_design_chain(in);
    // Identity recomputed from the derived quantities themselves.
    const double kpL = plasma_kpL(rep.n_e, rep.gamma0, rep.L);
    const double RspL = spontaneous_RspL(rep.a0, in.lambda_W, rep.L);
    CHECK(kpL * kpL * RspL ==
          doctest::Approx(in.budget_identity_rhs()).epsilon(1e-6));
    // The solved wavelength and recoil reproduce the inputs.
    CHECK(resonance_wavelength(rep.gamma0, rep.a0, in.lambda_W, in.phi,
                               in.vartheta) ==
          doctest::Approx(in.lambda_L).epsilon(1e-9));
    CHECK(recoil_parameter(rep.gamma0, in.lambda_W, rep.L, rep.a0) ==
          doctest::Approx(in.recoil_wrT).epsilon(1e-9));
  }
}

TEST_CASE("input validation gates") {
  DesignInputs in = table_inputs();
  in.delta = 1.0;
  CHECK_THROWS_AS(in.validate(), ConfigError);
  in = table_inputs();
  in.kpL_target = 0.2;  // violates the 1% identity gate
  CHECK_THROWS_AS(in.validate(), ConfigError);
  in = table_inputs();
  in.phi = 0.0;  // no backscattering geometry
  CHECK_THROWS_AS(in.validate(), ConfigError);
  in = table_inputs();
  in.lambda_W = -1.0;
  CHECK_THROWS_AS(in.validate(), ConfigError);
}

TEST_CASE("operating point reproduces the reference table") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  REQUIRE(rep.operating_point_done);

  CHECK(rel_within(rep.sigma_e, 0.68e-6, 0.03));
  CHECK(rel_within(rep.eps_n, 0.0082e-3 * 1e-3, 0.02));  // 0.0082 mm mrad
  CHECK(rel_within(rep.w0, 38.6e-6, 0.03));
  CHECK(rel_within(rep.z_R, 4.4e-3, 0.03));
  CHECK(rel_within(rep.tau0, 7.6e-12, 0.01));
  CHECK(rel_within(rep.I0, 21.7e19, 0.05));  // 21.7 PW/cm^2 in W/m^2
  CHECK(rel_within(rep.P0, 0.5e12, 0.06));
  CHECK(rel_within(rep.Ip, 8.9, 0.03));
  CHECK(rel_within(rep.Qb, 11e-12, 0.04));
  CHECK(std::abs(rep.tolerances.dI0_rel - 0.017) <= 0.001);
  CHECK(std::abs(rep.tolerances.dlambdaW_rel - 0.15e-3) <= 0.01e-3);
  CHECK(std::abs(rep.tolerances.dgamma0_rel - 0.075e-3) <= 0.005e-3);
  CHECK(rep.L_cav ==
        doctest::Approx(constants::c_light / (2.0 * in.f_rep)).epsilon(1e-14));
  CHECK(rel_within(rep.L_cav, 15.0, 0.01));
  CHECK(rep.R_mirror == doctest::Approx(0.9505).epsilon(1e-12));
  CHECK(rel_within(rep.n_out, 1e6, 0.10));

  REQUIRE(rep.verdicts.size() == 12);
  for (const ConstraintVerdict& v : rep.verdicts) {
    INFO(v.name);
    CHECK(v.pass);
  }
}

TEST_CASE("divergence length sits between half the undulator and the Rayleigh length") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  CHECK(rep.L / 2.0 < rep.beta_star);
  CHECK(rep.beta_star < rep.z_R);
}

TEST_CASE("feasibility constraints pass at the derived operating point") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  const auto verdicts = feasibility_verdicts_at(rep, in, rep.sigma_e, rep.eps_n);
  CHECK(verdicts.size() == FeasibilityGrid::kConstraintCount);
  for (const ConstraintVerdict& v : verdicts) CHECK(v.pass);
}

TEST_CASE("emittance above the coherence window fails for every beam radius") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  const double eps_cap = 10.0 * rep.gamma0 * in.lambda_L / (2.0 * pi);
  for (double sigma : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
    const auto verdicts =
        feasibility_verdicts_at(rep, in, sigma, 2.0 * eps_cap);
    bool window_high_pass = true;
    for (const ConstraintVerdict& v : verdicts)
      if (v.name == "window_high") window_high_pass = v.pass;
    CHECK(!window_high_pass);
  }
}

TEST_CASE("feasible region is nonempty at micrometer beams") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  const GridAxis sigma{1e-8, 1e-5, 31, true}, eps{1e-10, 1e-7, 31, true};
  const FeasibilityGrid grid = feasibility_scan(rep, in, sigma, eps, 4);
  long count = 0;
  bool micro = false;
  for (int is = 0; is < sigma.count; ++is) {
    for (int ie = 0; ie < eps.count; ++ie) {
      if (!grid.feasible[size_t(is) * eps.count + ie]) continue;
      ++count;
      const double s = sigma.value(is), e = eps.value(ie);
      // sigma of order micrometers, eps_n of order 1e-2 mm mrad = 1e-8 m rad.
      if (s > 1e-7 && s < 1e-5 && e > 1e-9 && e < 1e-7) micro = true;
    }
  }
  CHECK(count > 0);
  CHECK(micro);
}

TEST_CASE("shrinking the gain bandwidth shrinks the feasible region") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  DesignReport narrower = rep;
  narrower.Gamma = rep.Gamma / 2.0;
  const GridAxis sigma{1e-8, 1e-5, 25, true}, eps{1e-10, 1e-7, 25, true};
  const FeasibilityGrid wide = feasibility_scan(rep, in, sigma, eps, 4);
  const FeasibilityGrid narrow = feasibility_scan(narrower, in, sigma, eps, 4);
  long lost = 0;
  for (size_t i = 0; i < wide.feasible.size(); ++i) {
    // Subset property: every cell feasible at half bandwidth is feasible at
    // the full one.
    if (narrow.feasible[i]) CHECK(wide.feasible[i]);
    if (wide.feasible[i] && !narrow.feasible[i]) ++lost;
  }
  CHECK(lost > 0);
}

TEST_CASE("feasibility scan is thread-count invariant") {
  const DesignInputs in = table_inputs();
  DesignReport rep = solve_design_chain(in);
  derive_operating_point(rep, in);
  const GridAxis sigma{1e-8, 1e-5, 13, true}, eps{1e-10, 1e-7, 13, true};
  const FeasibilityGrid a = feasibility_scan(rep, in, sigma, eps, 1);
  const FeasibilityGrid b = feasibility_scan(rep, in, sigma, eps, 8);
  REQUIRE(a.masks.size() == b.masks.size());
  for (size_t i = 0; i < a.masks.size(); ++i) CHECK(a.masks[i] == b.masks[i]);
}

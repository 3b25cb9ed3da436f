#include <catch2/catch_amalgamated.hpp>

#include "fronttrack/junction.hpp"
#include "oracles.hpp"

using namespace fronttrack;
using Catch::Approx;

namespace {

double bernoulli(const PressureLaw& law, const GasState& u) {
  const double v = u.velocity();
  if (law.gamma() == 1.0) return 0.5 * v * v + law.k() * std::log(u.rho);
  return 0.5 * v * v +
         law.k() * law.gamma() / (law.gamma() - 1.0) * std::pow(u.rho, law.gamma() - 1.0);
}

}  // namespace

TEST_CASE("stationary integration basics") {
  const auto iso = PressureLaw::isothermal(1.0);

  // constant section: nothing moves
  const auto flat = integrate_in_section(iso, 1.0, 1.0, {1.2, 0.4});
  CHECK(flat.u.rho == Approx(1.2));
  CHECK(flat.u.q == Approx(0.4));

  // fluid at rest: density constant, pressure integral exact
  const auto rest = integrate_in_section(iso, 1.0, 1.3, {0.9, 0.0});
  CHECK(rest.u.rho == Approx(0.9));
  CHECK(rest.u.q == Approx(0.0));
  CHECK(rest.pressure_integral == Approx(iso.pressure(0.9) * 0.3));
}

TEST_CASE("stationary path keeps its first integrals") {
  for (const auto& law : {PressureLaw::isothermal(1.0), PressureLaw::gamma_law(1.0, 1.4)}) {
    SectionOfX sec{{-1.0, 1.0}, {1.0, 1.15}};
    const GasState u0{1.0, 0.45};
    const auto path = stationary_integrate(law, sec, -1.5, 1.5, u0);
    const double b0 = bernoulli(law, u0);
    for (const auto& [x, u] : path) {
      CHECK(std::abs(sec.value(x) * u.q - sec.value(-1.5) * u0.q) < 1e-14);  // exact flux
      CHECK(std::abs(bernoulli(law, u) - b0) < 1e-8);
    }
  }
}

TEST_CASE("sonic transition is detected") {
  const auto iso = PressureLaw::isothermal(1.0);
  // near-sonic flow accelerating through a contraction
  CHECK_THROWS_AS(integrate_in_section(iso, 1.0, 0.5, {1.0, 0.9}), SonicError);
}

TEST_CASE("sigma map") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto claw = CouplingLaw::smooth_section();

  const auto zero = sigma_map(claw, iso, 1.1, 1.1, {1.0, 0.3});
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);

  const auto rest = sigma_map(claw, iso, 1.0, 1.2, {0.8, 0.0});
  CHECK(rest[0] == 0.0);
  CHECK(rest[1] == Approx(iso.pressure(0.8) * 0.2));

  // derivative of the defect in the outgoing section equals the pressure
  const GasState u{1.1, 0.4};
  const double h = 1e-5;
  const double d = (sigma_map(claw, iso, 1.0, 1.0 + h, u)[1] -
                    sigma_map(claw, iso, 1.0, 1.0 - h, u)[1]) /
                   (2.0 * h);
  CHECK(std::abs(d - iso.pressure(u.rho)) / iso.pressure(u.rho) < 1e-4);
}

TEST_CASE("transfer map identity and expansion order") {
  const auto claw = CouplingLaw::smooth_section();
  oracles::StateSampler sampler(41, 0.7);
  for (const auto& law : {PressureLaw::isothermal(1.0), PressureLaw::gamma_law(1.0, 1.4)}) {
    const GasState u0 = sampler.subsonic(law);
    const GasState same = t_map(claw, law, 1.0, 1.0, u0);
    CHECK(same.rho == u0.rho);
    CHECK(same.q == u0.q);

    for (int k = 0; k < 8; ++k) {
      const GasState u = sampler.subsonic(law);
      const double dsig = claw.dsigma_da(law, 1.0, u);
      std::vector<double> err_rho, err_q;
      for (double da : {1e-2, 5e-3, 2.5e-3}) {
        const GasState exact = t_map(claw, law, 1.0, 1.0 + da, u);
        const GasState lin = tt_expansion(law, 1.0, u, da, dsig);
        err_rho.push_back(std::abs(exact.rho - lin.rho));
        err_q.push_back(std::abs(exact.q - lin.q));
      }
      for (double s : oracles::richardson_slopes(err_rho)) CHECK(s >= 1.9);
      for (double s : oracles::richardson_slopes(err_q)) CHECK(s >= 1.9);
    }
  }
}

TEST_CASE("custom coupling law agrees with the stationary endpoint") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto smooth = CouplingLaw::smooth_section();
  const auto custom = CouplingLaw::custom(
      [&](double am, double ap, const GasState& um) { return smooth.sigma(iso, am, ap, um); },
      [&](double, const GasState& um) { return iso.pressure(um.rho); });

  oracles::StateSampler sampler(43, 0.6);
  for (int k = 0; k < 20; ++k) {
    const GasState u = sampler.subsonic(iso);
    const double ap = 1.0 + sampler.uniform(-0.15, 0.15);
    const GasState a = t_map(smooth, iso, 1.0, ap, u);
    const GasState b = t_map(custom, iso, 1.0, ap, u);
    CHECK(std::abs(a.rho - b.rho) < 1e-10);
    CHECK(std::abs(a.q - b.q) < 1e-10);
  }
}

TEST_CASE("psi residual") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto claw = CouplingLaw::smooth_section();

  const GasState u{1.05, 0.35};
  const GasState up = t_map(claw, iso, 1.0, 1.1, u);
  const auto r = psi_residual(claw, iso, 1.0, u, 1.1, up);
  CHECK(std::abs(r[0]) < 1e-12);
  CHECK(std::abs(r[1]) < 1e-12);

  const auto r0 = psi_residual(claw, iso, 1.0, u, 1.0, u);
  CHECK(r0[0] == 0.0);
  CHECK(r0[1] == 0.0);

  const auto r1 = psi_residual(claw, iso, 1.0, {1.0, 0.0}, 1.0, {1.0, 1.0});
  CHECK(r1[0] == Approx(1.0));
  CHECK(r1[1] == Approx(1.0));
}

TEST_CASE("junction solver reduces to the plain solver at equal sections") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto claw = CouplingLaw::smooth_section();
  oracles::StateSampler sampler(47, 0.5);
  for (int k = 0; k < 200; ++k) {
    const GasState ul = sampler.subsonic(iso);
    GasState ur = sampler.subsonic(iso);
    ur.rho = ul.rho + 0.2 * (ur.rho - ul.rho);
    ur.q = ul.q + 0.2 * (ur.q - ul.q);
    const RiemannFan rf = solve_riemann(iso, ul, ur);
    const JunctionFan jf = solve_junction_riemann(claw, iso, 1.0, ul, 1.0, ur);
    CHECK(std::abs(rf.sigma1 - jf.sigma1) < 1e-10);
    CHECK(std::abs(rf.sigma2 - jf.sigma2) < 1e-10);
  }
}

TEST_CASE("junction transmission keeps the wave character and scales with da") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto claw = CouplingLaw::smooth_section();
  const GasState ubar{1.0, 0.4};

  for (double s2 : {-1e-3, 1e-3}) {
    for (double da : {0.02, -0.02, 0.05}) {
      const GasState ahead = t_map(claw, iso, 1.0, 1.0 + da, ubar);
      const GasState behind = lax_curve_from_right(iso, WaveFamily::Two, ubar, s2);
      const JunctionFan fan = solve_junction_riemann(claw, iso, 1.0, behind, 1.0 + da, ahead);
      CHECK(fan.sigma2 * s2 > 0.0);  // both shocks or both rarefactions
      // traces satisfy the coupling condition
      const auto r = psi_residual(claw, iso, 1.0, fan.trace_minus, 1.0 + da, fan.trace_plus);
      CHECK(std::abs(r[0]) < 1e-10);
      CHECK(std::abs(r[1]) < 1e-10);
      // speed signs by family
      for (const Wave& w : fan.left_waves) CHECK(w.speed_hi < 0.0);
      for (const Wave& w : fan.right_waves) CHECK(w.speed_lo > 0.0);
    }
  }

  // reflected size is linear in da and in the incoming size, with a bounded constant
  std::vector<double> refl;
  for (double da : {4e-3, 2e-3, 1e-3}) {
    const GasState ahead = t_map(claw, iso, 1.0, 1.0 + da, ubar);
    const GasState behind = lax_curve_from_right(iso, WaveFamily::Two, ubar, -1e-5);
    const JunctionFan fan = solve_junction_riemann(claw, iso, 1.0, behind, 1.0 + da, ahead);
    refl.push_back(std::abs(fan.sigma1) / (da * 1e-5));
  }
  CHECK(std::abs(refl[0] - refl[2]) / refl[2] < 0.05);  // clean O(da sigma) scaling
}

TEST_CASE("nondegeneracy of the trace equations") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto claw = CouplingLaw::smooth_section();
  oracles::StateSampler sampler(53, 0.8);
  for (int k = 0; k < 20; ++k) {
    const GasState u = sampler.subsonic(iso);
    auto [l1, l2] = eigenvalues(iso, u);
    const double a = 1.0 + sampler.uniform(-0.2, 0.2);
    const double h = 1e-6;
    // determinant of d(Psi)/d(u+) at coincident data
    auto psi = [&](const GasState& up) { return psi_residual(claw, iso, a, u, a, up); };
    const auto pr = psi({u.rho + h, u.q});
    const auto pm = psi({u.rho - h, u.q});
    const auto qr = psi({u.rho, u.q + h});
    const auto qm = psi({u.rho, u.q - h});
    const double j00 = (pr[0] - pm[0]) / (2 * h), j01 = (qr[0] - qm[0]) / (2 * h);
    const double j10 = (pr[1] - pm[1]) / (2 * h), j11 = (qr[1] - qm[1]) / (2 * h);
    const double det = j00 * j11 - j01 * j10;
    CHECK(det == Approx(a * a * l1 * l2).epsilon(1e-5));
    CHECK(std::abs(det) > 1e-3);
  }
}

TEST_CASE("first-order coefficients") {
  const auto iso = PressureLaw::isothermal(1.0);

  // fluid at rest with the stationary coupling: H = 0, K1 = K2 = 1/(2a)
  for (double a : {1.0, 2.0}) {
    const GasState rest{1.3, 0.0};
    const auto k = first_order_coeffs(iso, a, rest, iso.pressure(1.3));
    CHECK(k.H == Approx(0.0).margin(1e-15));
    CHECK(k.K1 == Approx(1.0 / (2.0 * a)));
    CHECK(k.K2 == Approx(1.0 / (2.0 * a)));
  }

  // isothermal reduction: c' = 0 collapses the generic expressions
  for (double xi : {0.2, 0.5, 0.8}) {
    const GasState u{1.0, xi};
    const auto k = first_order_coeffs(iso, 1.0, u, iso.pressure(1.0));
    const double eta = 1.0 / (1.0 - xi * xi);
    CHECK(k.K1 == Approx(eta / 2.0));
    CHECK(k.K2 == Approx(eta * std::abs(1.0 - 2.0 * xi * xi) / 2.0));
    CHECK(k.H == Approx(xi * xi * eta));
  }

  // pole toward the sonic line
  const auto near = first_order_coeffs(iso, 1.0, {1.0, 0.999}, iso.pressure(1.0));
  CHECK(near.K1 > 100.0);
  CHECK_THROWS_AS(first_order_coeffs(iso, 1.0, {1.0, 1.0}, iso.pressure(1.0)), DomainError);
}

TEST_CASE("k3 estimate is a sane Lipschitz coefficient") {
  const auto iso = PressureLaw::isothermal(1.0);
  const auto claw = CouplingLaw::smooth_section();
  const double k3 = k3_estimate(claw, iso, 1.0, {1.0, 0.4});
  CHECK(k3 > 0.1);
  CHECK(k3 < 20.0);
}

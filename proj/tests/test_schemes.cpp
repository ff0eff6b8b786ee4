#include "support.hpp"

#include "biotdd/schemes.hpp"

#include <gtest/gtest.h>

using namespace biot;
using namespace testing_support;

namespace {

SchemeOptions options(Scheme s, double dt, int steps) {
  SchemeOptions o;
  o.scheme = s;
  o.dt = dt;
  o.steps = steps;
  o.tol = 1e-12;
  return o;
}

double worst_against_reference(int px, int py, double perturb, int steps, MultiplierScaling scaling,
                               bool precompute = true) {
  Case S = make_setup(4, px, py, perturb, example1_material());
  const ManufacturedCase mc;
  SchemeOptions o = options(Scheme::monolithic, 1e-3, steps);
  o.scaling = scaling;
  o.precompute = precompute;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), o);
  GlobalReference ref(S.mesh, S.dec.bc, S.mat, mc.data(), o.dt);
  GlobalState g = ref.initial();
  State st = solver.initialize();
  // z^0 is not part of the undecomposed backward Euler start
  GlobalState d0 = ref.gather(solver.subdomains(), st);
  d0.z = g.z = Vec::Ones(g.z.size());
  double worst = max_rel(d0, g);
  for (int n = 1; n <= steps; ++n) {
    solver.step(st);
    g = ref.step(g, n * o.dt);
    worst = std::max(worst, max_rel(ref.gather(solver.subdomains(), st), g));
  }
  return worst;
}

}  // namespace

TEST(Monolithic, SingleSubdomainEqualsDirectSolve) {
  EXPECT_LT(worst_against_reference(1, 1, 0.0, 3, MultiplierScaling::balanced), 1e-10);
}

TEST(Monolithic, TwoByTwoEqualsDirectSolve) {
  EXPECT_LT(worst_against_reference(2, 2, 0.0, 3, MultiplierScaling::balanced), 1e-8);
}

TEST(Monolithic, PerturbedGridEqualsDirectSolve) {
  EXPECT_LT(worst_against_reference(2, 2, 0.25, 3, MultiplierScaling::balanced), 1e-8);
}

TEST(Monolithic, ScalingDoesNotChangeTheSolution) {
  EXPECT_LT(worst_against_reference(2, 2, 0.0, 2, MultiplierScaling::rate), 1e-8);
  EXPECT_LT(worst_against_reference(2, 2, 0.0, 2, MultiplierScaling::increment), 1e-8);
}

TEST(Monolithic, MatrixFreeEqualsDirectSolve) {
  EXPECT_LT(worst_against_reference(2, 2, 0.0, 2, MultiplierScaling::balanced, false), 1e-8);
}

TEST(Monolithic, MixedBoundaryConditions) {
  BcMap bc;
  bc[0] = {MechBc::traction, FlowBc::noflux};
  bc[3] = {MechBc::traction, FlowBc::pressure};
  Case S = make_setup(4, 2, 2, 0.0, example1_material(), bc);
  const ManufacturedCase mc;
  ProblemData data = mc.data();
  data.flux = [&mc](const Vec2& x, double t) {
    return mc.z(x, t).dot(Vec2(0.0, -1.0));
  };
  const SchemeOptions o = options(Scheme::monolithic, 1e-2, 2);
  Solver solver(S.mesh, S.dec, S.mat, data, o);
  GlobalReference ref(S.mesh, bc, S.mat, data, o.dt);
  GlobalState g = ref.initial();
  State st = solver.initialize();
  for (int n = 1; n <= 2; ++n) {
    solver.step(st);
    g = ref.step(g, n * o.dt);
    EXPECT_LT(max_rel(ref.gather(solver.subdomains(), st), g), 1e-8) << "step " << n;
  }
}

TEST(Monolithic, ZeroDataStaysZero) {
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  Solver solver(S.mesh, S.dec, S.mat, ProblemData{}, options(Scheme::monolithic, 1e-2, 3));
  const RunSummary r = solver.run([](const State& st) {
    for (const Fields& f : st.fields) {
      EXPECT_EQ(f.sigma.norm(), 0.0);
      EXPECT_EQ(f.p.norm(), 0.0);
      EXPECT_EQ(f.z.norm(), 0.0);
      EXPECT_EQ(f.u.norm(), 0.0);
    }
  });
  EXPECT_EQ(r.steps.size(), 3u);
  EXPECT_EQ(r.avg_gmres, 0.0);
}

TEST(Monolithic, DisplacementIsAccumulatedFromRates) {
  // u^n - u^{n-1} must equal the discrete solution of the direct solve increment
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::monolithic, 1e-2, 2));
  State st = solver.initialize();
  const State s0 = st;
  solver.step(st);
  const State s1 = st;
  solver.step(st);
  GlobalReference ref(S.mesh, S.dec.bc, S.mat, mc.data(), 1e-2);
  GlobalState g0 = ref.initial(), g1 = ref.step(g0, 1e-2), g2 = ref.step(g1, 2e-2);
  const GlobalState d1 = ref.gather(solver.subdomains(), s1), d2 = ref.gather(solver.subdomains(), st);
  EXPECT_LT(rel_diff(d2.u - d1.u, g2.u - g1.u), 1e-7);
  EXPECT_EQ(st.n, 2);
  EXPECT_DOUBLE_EQ(st.t, 2e-2);
  (void)s0;
}

TEST(SplitSchemes, DrainedSplitSingleSubdomainMatchesDirectSplit) {
  // one step of the split by hand: elasticity with p^n, then flow with the stress increment
  Case S1 = make_setup(4, 1, 1, 0.0, example1_material());
  Case S2 = make_setup(4, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  const SchemeOptions o = options(Scheme::drained_split, 1e-2, 2);
  Solver a(S1.mesh, S1.dec, S1.mat, mc.data(), o), b(S2.mesh, S2.dec, S2.mat, mc.data(), o);
  State sa = a.initialize(), sb = b.initialize();
  GlobalReference ref(S1.mesh, S1.dec.bc, S1.mat, mc.data(), o.dt);
  for (int n = 1; n <= 2; ++n) {
    a.step(sa);
    b.step(sb);
    EXPECT_LT(max_rel(ref.gather(b.subdomains(), sb), ref.gather(a.subdomains(), sa)), 1e-8) << "step " << n;
  }
}

TEST(SplitSchemes, FixedStressDecomposedMatchesSingleSubdomain) {
  Case S1 = make_setup(4, 1, 1, 0.25, example1_material());
  Case S2 = make_setup(4, 2, 2, 0.25, example1_material());
  const ManufacturedCase mc;
  const SchemeOptions o = options(Scheme::fixed_stress, 1e-2, 2);
  Solver a(S1.mesh, S1.dec, S1.mat, mc.data(), o), b(S2.mesh, S2.dec, S2.mat, mc.data(), o);
  State sa = a.initialize(), sb = b.initialize();
  GlobalReference ref(S1.mesh, S1.dec.bc, S1.mat, mc.data(), o.dt);
  for (int n = 1; n <= 2; ++n) {
    a.step(sa);
    b.step(sb);
    EXPECT_LT(max_rel(ref.gather(b.subdomains(), sb), ref.gather(a.subdomains(), sa)), 1e-8) << "step " << n;
  }
}

TEST(SplitSchemes, DrainedSplitOracle) {
  // elasticity with p^n followed by flow with the stress increment, assembled globally
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  const double dt = 1e-2;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::drained_split, dt, 1));
  State st = solver.initialize();
  GlobalReference ref(S.mesh, S.dec.bc, S.mat, mc.data(), dt);
  const GlobalState g0 = ref.gather(solver.subdomains(), st);
  solver.step(st);
  const GlobalState g1 = ref.gather(solver.subdomains(), st);

  const SubdomainDofs& d = ref.dofs();
  Decomposition whole = partition(S.mesh, 1, 1);
  const Blocks B = assemble_blocks(S.mesh, d, S.mat);
  const int nz = d.n_z(), nc = d.n_cells();
  const ProblemData data = mc.data();
  // mechanics residual: A sigma + B_u' u + B_g' gamma = G_u - A_sp p^n
  Vec r1 = B.A_ss * g1.sigma + B.B_u.transpose() * g1.u + B.B_g.transpose() * g1.gamma + B.A_sp * g0.p -
           dirichlet_displacement_functional(S.mesh, whole, d, data.g_u, dt, 3);
  Vec r2 = B.B_u * g1.sigma + cell_integrals(S.mesh, d, data.f, dt, 3);
  Vec r3 = B.B_g * g1.sigma;
  // flow: M_z z - B_p' p = -G_p;  (M_p + S_pp)(p - p^n) + A_sp'(sigma - sigma^n) + dt B_p z = dt G
  Vec r4 = B.M_z * g1.z - B.B_p.transpose() * g1.p + dirichlet_pressure_functional(S.mesh, whole, d, data.g_p, dt, 3);
  Vec r5 = (B.M_p + B.S_pp).cwiseProduct(g1.p - g0.p) + B.A_sp.transpose() * (g1.sigma - g0.sigma) +
           dt * (B.B_p * g1.z) - dt * cell_integrals(S.mesh, d, data.g, dt, 3);
  const double scale = g1.sigma.norm() + g1.p.norm();
  EXPECT_LT(r1.norm() / scale, 1e-9);
  EXPECT_LT(r2.norm() / scale, 1e-9);
  EXPECT_LT(r3.norm() / scale, 1e-9);
  EXPECT_LT(r4.norm() / scale, 1e-9);
  EXPECT_LT(r5.norm() / scale, 1e-9);
  (void)nz;
  (void)nc;
}

TEST(SplitSchemes, FixedStressFirstStepHasNoStressCoupling) {
  // sigma^{-1} = sigma^0, so the first flow solve sees no stress increment:
  // with the same p^0 the FS pressure after one step solves the flow problem alone
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  const double dt = 1e-2;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::fixed_stress, dt, 1));
  State st = solver.initialize();
  GlobalReference ref(S.mesh, S.dec.bc, S.mat, mc.data(), dt);
  const GlobalState g0 = ref.gather(solver.subdomains(), st);
  solver.step(st);
  const GlobalState g1 = ref.gather(solver.subdomains(), st);
  const SubdomainDofs& d = ref.dofs();
  const Blocks B = assemble_blocks(S.mesh, d, S.mat);
  const Vec r5 = (B.M_p + B.S_pp).cwiseProduct(g1.p - g0.p) + dt * (B.B_p * g1.z) -
                 dt * cell_integrals(S.mesh, d, mc.data().g, dt, 3);
  EXPECT_LT(r5.norm() / g1.p.norm(), 1e-9);
}

TEST(SplitSchemes, AgreeWithMonolithicToFirstOrderInTime) {
  Case S = make_setup(8, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  const double dt = 1e-3;
  const int steps = 10;
  std::vector<State> finals;
  for (Scheme s : {Scheme::monolithic, Scheme::drained_split, Scheme::fixed_stress}) {
    Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(s, dt, steps));
    State st = solver.initialize();
    for (int n = 0; n < steps; ++n) solver.step(st);
    finals.push_back(st);
  }
  Solver probe(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::monolithic, dt, steps));
  for (int k = 1; k < 3; ++k) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t s = 0; s < finals[0].fields.size(); ++s) {
      const Vec& area = probe.subdomains()[s].blocks().area;
      diff += (finals[k].fields[s].p - finals[0].fields[s].p).cwiseAbs2().dot(area);
      ref += finals[0].fields[s].p.cwiseAbs2().dot(area);
    }
    EXPECT_LE(std::sqrt(diff), 10.0 * dt * std::sqrt(ref)) << "scheme " << k;
  }
}

TEST(Initialization, PressureIsCellAverage) {
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  ProblemData data;
  data.p0 = [](const Vec2& x, double) { return 1.0 - x.x(); };
  data.g_p = data.p0;
  Solver solver(S.mesh, S.dec, S.mat, data, options(Scheme::monolithic, 1e-2, 1));
  const State st = solver.initialize();
  for (std::size_t s = 0; s < st.fields.size(); ++s) {
    const SubdomainDofs& d = solver.subdomains()[s].dofs();
    for (int lc = 0; lc < d.n_cells(); ++lc) {
      const auto v = S.mesh.cell_vertices(d.cells[static_cast<std::size_t>(lc)]);
      const double xc = 0.25 * (v[0].x() + v[1].x() + v[2].x() + v[3].x());
      EXPECT_NEAR(st.fields[s].p(lc), 1.0 - xc, 1e-13);
    }
  }
}

TEST(Initialization, StressMatchesUndecomposedElasticity) {
  Case S = make_setup(4, 2, 2, 0.25, example1_material());
  const ManufacturedCase mc;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::monolithic, 1e-3, 1));
  const State st = solver.initialize();
  GlobalReference ref(S.mesh, S.dec.bc, S.mat, mc.data(), 1e-3);
  const GlobalState g = ref.initial(), d = ref.gather(solver.subdomains(), st);
  EXPECT_LT(rel_diff(d.sigma, g.sigma), 1e-10);
  EXPECT_LT(rel_diff(d.u, g.u), 1e-10);
  EXPECT_LT(rel_diff(d.p, g.p), 1e-14);
}

TEST(Initialization, ZeroDataGivesZeroState) {
  Case S = make_setup(4, 2, 2);
  Solver solver(S.mesh, S.dec, S.mat, ProblemData{}, options(Scheme::drained_split, 1e-2, 1));
  const State st = solver.initialize();
  for (const Fields& f : st.fields) {
    EXPECT_EQ(f.sigma.norm() + f.u.norm() + f.gamma.norm() + f.z.norm() + f.p.norm(), 0.0);
  }
}

TEST(Run, StepsAndAveragesExcludeInitialization) {
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::drained_split, 1e-2, 3));
  int seen = 0;
  const RunSummary r = solver.run([&](const State& st) { EXPECT_EQ(st.n, seen++); });
  EXPECT_EQ(seen, 4);
  ASSERT_EQ(r.steps.size(), 3u);
  double sum = 0.0;
  for (const StepReport& s : r.steps) sum += s.cg_elasticity;
  EXPECT_DOUBLE_EQ(r.avg_cg_elasticity, sum / 3.0);
  EXPECT_TRUE(r.monitor.finite());
  EXPECT_GT(r.monitor.ratio_ds(), 0.0);
}

TEST(Run, RepeatedRunsAreBitIdentical) {
  Case S = make_setup(4, 2, 2, 0.25, example1_material());
  const ManufacturedCase mc;
  for (Scheme sc : {Scheme::monolithic, Scheme::fixed_stress}) {
    std::vector<Vec> first;
    for (int rep = 0; rep < 2; ++rep) {
      Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(sc, 1e-2, 2));
      State st = solver.initialize();
      solver.step(st);
      solver.step(st);
      for (std::size_t s = 0; s < st.fields.size(); ++s) {
        if (rep == 0) first.push_back(st.fields[s].sigma);
        else EXPECT_EQ((st.fields[s].sigma - first[s]).cwiseAbs().maxCoeff(), 0.0);
      }
    }
  }
}

TEST(Run, InterfaceTracesAreContinuousAfterConvergence) {
  Case S = make_setup(4, 2, 2, 0.0, example1_material());
  const ManufacturedCase mc;
  Solver solver(S.mesh, S.dec, S.mat, mc.data(), options(Scheme::monolithic, 1e-2, 1));
  State st = solver.initialize();
  solver.step(st);
  const InterfaceOperator& I = solver.op(Variant::biot);
  Vec jump = Vec::Zero(I.size());
  for (std::size_t s = 0; s < st.fields.size(); ++s) {
    const Subdomain& sub = solver.subdomains()[s];
    const SubdomainDofs& d = sub.dofs();
    Vec sol(d.n_total());
    sol << st.fields[s].sigma, st.fields[s].u, st.fields[s].gamma, st.fields[s].z, st.fields[s].p;
    I.add_local(static_cast<int>(s), sub.traces(Variant::biot, sol), jump);
  }
  double scale = 0.0;
  for (const Fields& f : st.fields) scale = std::max(scale, f.sigma.norm() + f.z.norm());
  EXPECT_LT(jump.norm(), 1e-8 * scale);
}

TEST(Options, InvalidOptionsThrow) {
  Case S = make_setup(4, 2, 2);
  SchemeOptions o = options(Scheme::monolithic, -1.0, 1);
  EXPECT_THROW(Solver(S.mesh, S.dec, S.mat, ProblemData{}, o), std::invalid_argument);
  o = options(Scheme::monolithic, 1e-2, 1);
  o.tol = 2.0;
  EXPECT_THROW(Solver(S.mesh, S.dec, S.mat, ProblemData{}, o), std::invalid_argument);
}

TEST(Options, SchemeNames) {
  EXPECT_EQ(scheme_from_string("ds"), Scheme::drained_split);
  EXPECT_EQ(scheme_from_string("fs"), Scheme::fixed_stress);
  EXPECT_EQ(scheme_from_string("monolithic"), Scheme::monolithic);
  EXPECT_THROW(scheme_from_string("undrained"), std::invalid_argument);
  EXPECT_STREQ(to_string(Scheme::drained_split), "ds");
}

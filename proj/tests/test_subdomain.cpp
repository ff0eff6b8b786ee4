#include "support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

using namespace biot;
using namespace testing_support;
using Eigen::MatrixXd;

namespace {

std::vector<Subdomain> subdomains(const Case& S, double dt) {
  std::vector<Subdomain> out;
  for (SubdomainDofs& d : build_dofmap(S.mesh, S.dec)) out.emplace_back(S.mesh, S.dec, d, S.mat);
  for (Subdomain& s : out) {
    s.factorize(Variant::biot, dt);
    s.factorize(Variant::elasticity, 0.0);
    s.factorize(Variant::darcy, dt);
  }
  return out;
}

MatrixXd dense(const SpMat& m) { return MatrixXd(m); }

}  // namespace

TEST(SubdomainOperator, SingleCellDarcyZeroRhs) {
  const Case S = make_setup(1, 1, 1);
  auto subs = subdomains(S, 0.1);
  const SubdomainOperator& K = subs[0].op(Variant::darcy);
  EXPECT_EQ(K.size(), 9);
  EXPECT_EQ(K.solve(Vec::Zero(9)).norm(), 0.0);
  EXPECT_THROW(K.solve(Vec::Zero(8)), std::invalid_argument);
}

TEST(SubdomainOperator, BiotMatrixMatchesBlockLayout) {
  BcMap bc;
  bc[static_cast<int>(Side::left)] = {MechBc::traction, FlowBc::noflux};
  const Case S = make_setup(4, 2, 2, 0.2, example1_material(), bc);
  const double dt = 0.05;
  auto subs = subdomains(S, dt);
  const Subdomain& s = subs[0];
  const Blocks& b = s.blocks();
  const SubdomainDofs& d = s.dofs();
  const int nz = d.n_z(), nc = d.n_cells();
  const int o[5] = {0, 2 * nz, 2 * nz + 2 * nc, 2 * nz + 3 * nc, 3 * nz + 3 * nc};
  MatrixXd M = MatrixXd::Zero(d.n_total(), d.n_total());
  M.block(o[0], o[0], 2 * nz, 2 * nz) = dense(b.A_ss);
  M.block(o[0], o[1], 2 * nz, 2 * nc) = dt * dense(b.B_u).transpose();
  M.block(o[0], o[2], 2 * nz, nc) = dt * dense(b.B_g).transpose();
  M.block(o[0], o[4], 2 * nz, nc) = dense(b.A_sp);
  M.block(o[1], o[0], 2 * nc, 2 * nz) = dense(b.B_u);
  M.block(o[2], o[0], nc, 2 * nz) = dense(b.B_g);
  M.block(o[3], o[3], nz, nz) = dense(b.M_z);
  M.block(o[3], o[4], nz, nc) = -dense(b.B_p).transpose();
  M.block(o[4], o[0], nc, 2 * nz) = dense(b.A_sp).transpose();
  M.block(o[4], o[3], nc, nz) = dt * dense(b.B_p);
  M.block(o[4], o[4], nc, nc) = (b.M_p + b.S_pp).asDiagonal();
  for (int zd : d.traction_zdofs)
    for (int r = 0; r < 2; ++r) {
      M.row(d.sigma(r, zd)).setZero();
      M(d.sigma(r, zd), d.sigma(r, zd)) = 1.0;
    }
  for (int zd : d.noflux_zdofs) {
    M.row(d.z(zd)).setZero();
    M(d.z(zd), d.z(zd)) = 1.0;
  }
  ASSERT_FALSE(d.traction_zdofs.empty());
  EXPECT_LT((M - dense(s.op(Variant::biot).matrix())).norm(), 1e-12 * M.norm());
}

TEST(SubdomainOperator, RandomRhsResidualAndReuse) {
  const Case S = make_setup(4, 2, 2, 0.25, example1_material(1e-3));
  auto subs = subdomains(S, 1e-3);
  for (Variant v : {Variant::biot, Variant::elasticity, Variant::darcy}) {
    const SubdomainOperator& K = subs[3].op(v);
    const Vec r = random_vec(K.size(), 5);
    const Vec x = K.solve(r);
    EXPECT_LT((K.matrix() * x - r).norm(), 1e-9 * r.norm()) << to_string(v);
    const Vec y = K.solve(r);
    EXPECT_EQ(x, y);
    MatrixXd R(K.size(), 2);
    R << r, 2.0 * r;
    const MatrixXd X = K.solve_many(R);
    EXPECT_LT((X.col(1) - 2.0 * x).norm(), 1e-12 * x.norm());
  }
}

TEST(SubdomainOperator, FloatingSubdomainIsNonsingular) {
  // the centre block of a 3x3 split touches no outer boundary
  const Case S = make_setup(6, 3, 3);
  auto subs = subdomains(S, 1e-2);
  const Subdomain& s = subs[4];
  EXPECT_EQ(s.n_interface_edges(), 8);
  for (Variant v : {Variant::biot, Variant::elasticity, Variant::darcy}) {
    const SubdomainOperator& K = s.op(v);
    const Vec x = K.solve(Vec::Ones(K.size()));
    EXPECT_TRUE(x.allFinite());
    EXPECT_LT((K.matrix() * x - Vec::Ones(K.size())).norm(), 1e-9 * std::sqrt(K.size()));
  }
}

TEST(Subdomain, UnfactorizedVariantThrows) {
  const Case S = make_setup(2, 1, 1);
  const auto d = build_dofmap(S.mesh, S.dec);
  Subdomain s(S.mesh, S.dec, d[0], S.mat);
  EXPECT_FALSE(s.factorized(Variant::biot));
  EXPECT_THROW(s.op(Variant::biot), std::logic_error);
  EXPECT_THROW(s.factorize(Variant::biot, 0.0), std::invalid_argument);
  s.factorize(Variant::elasticity, 0.0);
  EXPECT_TRUE(s.factorized(Variant::elasticity));
}

TEST(Subdomain, ZeroAlphaDecouples) {
  CellMaterial m = example1_material();
  m.alpha = 0.0;
  const Case S = make_setup(4, 2, 2, 0.2, m);
  const double dt = 0.2;
  auto subs = subdomains(S, dt);
  const Subdomain& s = subs[2];
  const int ni = s.n_interface_edges();
  const Vec lam = random_vec(6 * ni, 17);
  Vec le(4 * ni), ld(2 * ni);
  for (int k = 0; k < ni; ++k) {
    le.segment(4 * k, 4) = lam.segment(6 * k, 4);
    ld.segment(2 * k, 2) = lam.segment(6 * k + 4, 2);
  }
  const Fields fb = s.unpack(Variant::biot, s.op(Variant::biot).solve(s.interface_rhs(Variant::biot, lam)));
  const Fields fe = s.unpack(Variant::elasticity, s.op(Variant::elasticity).solve(s.interface_rhs(Variant::elasticity, le)));
  const Fields fd = s.unpack(Variant::darcy, s.op(Variant::darcy).solve(s.interface_rhs(Variant::darcy, ld)));
  EXPECT_LT(rel_diff(fb.sigma, fe.sigma), 1e-10);
  EXPECT_LT(rel_diff(dt * fb.u, fe.u), 1e-10);
  EXPECT_LT(rel_diff(dt * fb.gamma, fe.gamma), 1e-10);
  EXPECT_LT(rel_diff(fb.z, fd.z), 1e-10);
  EXPECT_LT(rel_diff(fb.p, fd.p), 1e-10);
}

TEST(Subdomain, MomentumAndWeakSymmetryResiduals) {
  const Case S = make_setup(4, 2, 2, 0.25, example1_material());
  auto subs = subdomains(S, 1e-2);
  const Subdomain& s = subs[1];
  ProblemData data;
  data.f = [](const Vec2& x, double t) { return Vec2(1.0 + x.x() * t, std::sin(x.y())); };
  data.g = [](const Vec2& x, double) { return x.x() * x.y(); };
  const Fields prev = Fields::zeros(s.dofs());
  const Vec rhs = s.biot_data_rhs(data, 0.0, 0.5, prev);
  const Fields f = s.unpack(Variant::biot, s.op(Variant::biot).solve(rhs));
  const Vec F = cell_integrals(S.mesh, s.dofs(), data.f, 0.5, s.quad().cell_points);
  EXPECT_LT((s.blocks().B_u * f.sigma + F).norm(), 1e-10 * F.norm());
  EXPECT_LT((s.blocks().B_g * f.sigma).norm(), 1e-10 * f.sigma.norm());
}

TEST(Subdomain, PreviousStateRhs) {
  const Case S = make_setup(4, 2, 2, 0.2, example1_material());
  auto subs = subdomains(S, 1e-2);
  const Subdomain& s = subs[0];
  const SubdomainDofs& d = s.dofs();
  Fields prev = Fields::zeros(d);
  prev.sigma = random_vec(d.n_sigma(), 1);
  prev.p = random_vec(d.n_p(), 2);
  prev.u = random_vec(d.n_u(), 3);
  prev.z = random_vec(d.n_z(), 4);
  const Vec rhs = s.biot_data_rhs(ProblemData{}, 0.0, 0.01, prev);
  // only stress and pressure of the previous step enter, through the time-derivative terms
  const Blocks& b = s.blocks();
  const MatrixXd Ass = dense(b.A_ss), Asp = dense(b.A_sp);
  Vec expect = Vec::Zero(d.n_total());
  expect.head(d.n_sigma()) = Ass * prev.sigma + Asp * prev.p;
  for (int c = 0; c < d.n_cells(); ++c)
    expect(d.p(c)) = Asp.col(c).dot(prev.sigma) + (b.M_p(c) + b.S_pp(c)) * prev.p(c);
  EXPECT_LT((rhs - expect).norm(), 1e-12 * expect.norm());
}

TEST(Subdomain, TracesInvertInterfaceScaling) {
  const Case S = make_setup(4, 2, 2, 0.25);
  auto subs = subdomains(S, 1e-2);
  const Subdomain& s = subs[3];
  const Vec lam = random_vec(s.n_interface_dofs(Variant::biot), 8);
  const Vec r = s.interface_rhs(Variant::biot, lam, 2.0);
  // trace of the load vector itself: |e|^-1 scaling of the moment basis on both sides
  const Vec t = s.traces(Variant::biot, r);
  for (int k = 0; k < s.n_interface_edges(); ++k) {
    const double len = S.mesh.edges[s.dofs().edges[s.dofs().interface_edges[k]]].length;
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(t(6 * k + j), (j < 4 ? 2.0 : 1.0) * lam(6 * k + j) / len, 1e-12);
  }
  const MatrixXd R = s.response(Variant::biot, 1.0);
  EXPECT_LT(rel_diff(R * lam, s.traces(Variant::biot, s.op(Variant::biot).solve(s.interface_rhs(Variant::biot, lam)))),
            1e-12);
}

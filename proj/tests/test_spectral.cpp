#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minimax/solvers.hpp"
#include "minimax/spectral.hpp"

#include <cmath>
#include <random>

using namespace minimax;

namespace {

// Profile with ample headroom for the certificate (L_H = L2^2 = 100).
SpectralProfile base_profile() {
  SpectralProfile prof;
  prof.L2 = 10.0;
  return prof;
}

Matrix sym_rand(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix M(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) M(i, j) = unif(rng);
  }
  return 0.5 * (M + M.transpose());
}

Matrix rand_mat(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix M(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) M(i, j) = unif(rng);
  }
  return M;
}

// Full-rank draw: resample until sigma_min >= 0.1.
Matrix rand_full_rank(Index n, std::mt19937_64& rng) {
  for (;;) {
    Matrix C = rand_mat(n, rng);
    if (sigma_min(C) >= 0.1) return C;
  }
}

}  // namespace

TEST_CASE("pl parameters per regime") {
  SpectralProfile prof = base_profile();

  const PlCertificate scsc = pl_parameter(prof, ScscRegime{1.0});
  CHECK(scsc.alpha == doctest::Approx(1.0));
  CHECK(scsc.regime == PlRegime::Scsc);
  CHECK(scsc.contraction == doctest::Approx(1.0 - 1.0 / 100.0));

  prof.gamma = 2.0;
  prof.Gamma = 2.0;
  prof.L = 1.0;
  const PlCertificate lin = pl_parameter(prof, NonconvexLinearRegime{});
  CHECK(lin.alpha == doctest::Approx(16.0 / 9.0));

  SpectralProfile sb = base_profile();
  sb.gamma = 3.0;
  sb.Gamma = 3.0;
  sb.L = 1.0;
  const PlCertificate cert = pl_parameter(sb, SufficientlyBilinearRegime{});
  CHECK(cert.alpha == doctest::Approx(2.5));  // (81 - 36) / 18
  CHECK(cert.condition_margin.has_value());
  CHECK(*cert.condition_margin == doctest::Approx(45.0));

  // hypotheses that fail are refused with the margin attached
  SpectralProfile weak = base_profile();
  weak.gamma = 1.0;
  weak.Gamma = 1.0;
  weak.L = 1.0;  // margin = 1 - 4 < 0
  CHECK_THROWS_AS(pl_parameter(weak, SufficientlyBilinearRegime{}),
                  CertificationError);
  CHECK_THROWS_AS(pl_parameter(base_profile(), NonconvexLinearRegime{}),
                  CertificationError);

  // alpha above the smoothness constant is inconsistent
  SpectralProfile tight;
  tight.L2 = 1.0;  // L_H = 1
  CHECK_THROWS_AS(pl_parameter(tight, ScscRegime{5.0}), CertificationError);
  CHECK_THROWS_AS(pl_parameter(tight, EmpiricalRegime{-1.0}),
                  CertificationError);
}

TEST_CASE("sufficiently bilinear bookkeeping") {
  // strongly coupled instance: gamma = Gamma = 3, L = 1
  SpectralProfile strong = base_profile();
  strong.gamma = 3.0;
  strong.Gamma = 3.0;
  strong.L = 1.0;
  const BilinearityCheck ok = check_sufficiently_bilinear(strong);
  CHECK(ok.holds);
  CHECK(ok.margin == 45.0);

  // the nonconvex showcase: gamma = Gamma = 4, L = 3; the literal reading
  // fails while the diagnostic variant clears
  SpectralProfile showcase = base_profile();
  showcase.gamma = 4.0;
  showcase.Gamma = 4.0;
  showcase.L = 3.0;
  const BilinearityCheck pair = check_sufficiently_bilinear(showcase);
  CHECK_FALSE(pair.holds);
  CHECK(pair.margin == -320.0);
  CHECK(pair.alt_margin == 64.0);

  // no coupling: cannot hold
  SpectralProfile none = base_profile();
  none.gamma = 0.0;
  none.Gamma = 2.0;
  none.L = 1.0;
  const BilinearityCheck degenerate = check_sufficiently_bilinear(none);
  CHECK_FALSE(degenerate.holds);
  CHECK(degenerate.margin == -16.0);
}

TEST_CASE("definite block bound") {
  const Matrix I2 = Matrix::Identity(2, 2);
  CHECK(eig_bound_definite(2.0 * I2, -2.0 * I2, Matrix::Zero(2, 2), 1.9) ==
        doctest::Approx(3.61));
  const Matrix H = signed_block_matrix(2.0 * I2, Matrix::Zero(2, 2), -2.0 * I2);
  CHECK(lambda_min_sym(H * H.transpose()) == doctest::Approx(4.0));

  // limit case eps = 0: certifies nonsingularity
  CHECK(eig_bound_definite(2.0 * I2, -2.0 * I2, Matrix::Zero(2, 2), 0.0) ==
        0.0);

  // violated hypotheses are refused, naming the failing block
  CHECK_THROWS_WITH_AS(
      eig_bound_definite(0.5 * I2, -2.0 * I2, Matrix::Zero(2, 2), 1.0),
      doctest::Contains("M1"), CertificationError);
  CHECK_THROWS_WITH_AS(
      eig_bound_definite(2.0 * I2, -0.5 * I2, Matrix::Zero(2, 2), 1.0),
      doctest::Contains("M2"), CertificationError);

  // random cross blocks never push an eigenvalue below eps^2
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2;
    const double eps = 1.9;
    Matrix B = rand_mat(n, rng);
    const Matrix M1 = 2.0 * Matrix::Identity(n, n);
    const Matrix M2 = -2.0 * Matrix::Identity(n, n);
    const double bound = eig_bound_definite(M1, M2, B, eps);
    const Matrix Hb = signed_block_matrix(M1, B, M2);
    CHECK(lambda_min_sym(Hb * Hb.transpose()) > bound);
  }
}

TEST_CASE("convex block bound") {
  const Matrix I1 = Matrix::Identity(1, 1);
  CHECK(eig_bound_convex(Matrix::Zero(1, 1), I1) == doctest::Approx(0.5));
  {
    const Matrix H = signed_block_matrix(Matrix::Zero(1, 1), I1,
                                         Matrix::Zero(1, 1));
    CHECK(lambda_min_sym(H * H.transpose()) == doctest::Approx(1.0));
  }

  CHECK(eig_bound_convex(I1, I1) == doctest::Approx(1.0 / 3.0));
  {
    const Matrix H = signed_block_matrix(I1, I1, Matrix::Zero(1, 1));
    const double truth = lambda_min_sym(H * H.transpose());
    CHECK(truth == doctest::Approx(0.5 * (3.0 - std::sqrt(5.0))));
    CHECK(truth >= 1.0 / 3.0);
  }

  // homogeneity: scaling A and C by t scales the bound by t^2
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = sym_rand(3, rng);
    const Matrix C = rand_full_rank(3, rng);
    const double t = 2.5;
    CHECK(eig_bound_convex(t * A, t * C) ==
          doctest::Approx(t * t * eig_bound_convex(A, C)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(eig_bound_convex(Matrix::Zero(2, 2), Matrix::Zero(2, 2)),
                  CertificationError);
}

TEST_CASE("general block bound") {
  const Matrix Z2 = Matrix::Zero(2, 2);
  const Matrix C = 2.0 * Matrix::Identity(2, 2);
  CHECK(eig_bound_general(Z2, Z2, C) == doctest::Approx(2.0));
  const Matrix H = signed_block_matrix(Z2, C, Z2);
  CHECK(lambda_min_sym(H * H.transpose()) == doctest::Approx(4.0));

  // with A = B = 0 the two bound formulas coincide exactly
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 4;
    const Matrix Cn = rand_full_rank(n, rng);
    const Matrix Zn = Matrix::Zero(n, n);
    CHECK(eig_bound_general(Zn, Zn, Cn) == eig_bound_convex(Zn, Cn));
  }

  // refused when the hypothesis quantity is nonpositive: rank-deficient
  // diagonal blocks with large norm against a small cross block
  Matrix lopsided = Matrix::Zero(2, 2);
  lopsided(0, 0) = 10.0;
  CHECK_THROWS_AS(
      eig_bound_general(lopsided, lopsided, 0.2 * Matrix::Identity(2, 2)),
      CertificationError);

  // small diagonal blocks keep the bound valid
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix A = sym_rand(2, rng);
    Matrix B = sym_rand(2, rng);
    A *= 0.1 / std::max(1.0, spectral_norm(A));
    B *= 0.1 / std::max(1.0, spectral_norm(B));
    const Matrix In = Matrix::Identity(2, 2);
    const double bound = eig_bound_general(A, B, In);
    CHECK(bound > 0.0);
    const Matrix Hr = signed_block_matrix(A, In, B);
    CHECK(lambda_min_sym(Hr * Hr.transpose()) >= bound - 1e-10);
  }
}

TEST_CASE("square-root gap inequality") {
  // x - sqrt(x^2 - c) > c / (2x) strictly for 0 < c < x^2 < 1
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int n = 0; n < 10000; ++n) {
    double x = unif(rng);
    if (x <= 1e-6) x = 1e-6;
    double c = x * x * unif(rng);
    if (c <= 0.0) c = 0.5 * x * x;
    CHECK(x - std::sqrt(x * x - c) > c / (2.0 * x));
  }
}

TEST_CASE("grid floor of lambda_min(JJ')") {
  Objective bil(BilinearFamily{Matrix::Identity(1, 1)}, 1);
  const GridCertificate gb = min_eig_jjt(bil, Box::cube(2, -5.0, 5.0), 11);
  CHECK(gb.alpha_hat == doctest::Approx(1.0).epsilon(1e-12));

  Objective quad(QuadraticSaddleFamily{1.0}, 1);
  const GridCertificate gq = min_eig_jjt(quad, Box::cube(2, -5.0, 5.0), 11);
  CHECK(gq.alpha_hat == doctest::Approx(2.0).epsilon(1e-12));
  // the analytic certificate never exceeds the grid floor
  const PlCertificate scsc = pl_parameter(
      [] {
        SpectralProfile p;
        p.L2 = std::sqrt(2.0);
        return p;
      }(),
      ScscRegime{1.0});
  CHECK(scsc.alpha <= gq.alpha_hat);

  // regression baseline, frozen from the first run of this grid
  Objective pwc(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1);
  const GridCertificate gp = min_eig_jjt(pwc, Box::cube(2, -6.0, 6.0), 121);
  CHECK(gp.alpha_hat > 0.0);
  CHECK(gp.alpha_hat == doctest::Approx(4.5098593801768156).epsilon(1e-9));

  CHECK_THROWS_AS(min_eig_jjt(bil, Box::cube(2, -5.0, 5.0), 1), InputError);
}

TEST_CASE("PL chain inequality at the certified grid points") {
  Objective pwc(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1);
  const Box region = Box::cube(2, -6.0, 6.0);
  const int res = 31;
  const GridCertificate grid = min_eig_jjt(pwc, region, res);
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      Vector z(2);
      z[0] = region.lo[0] + (region.hi[0] - region.lo[0]) * i / (res - 1);
      z[1] = region.lo[1] + (region.hi[1] - region.lo[1]) * j / (res - 1);
      const Point p = Point::from_stacked(z);
      const double lhs = 0.5 * grad_hamiltonian(pwc, p).squaredNorm();
      const double rhs = grid.alpha_hat * hamiltonian(pwc, p);
      CHECK(lhs - rhs >= -1e-9 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("smoothness constant of H") {
  CHECK(smoothness_lh(1.0, 2.0, 0.0) == 4.0);
  CHECK(smoothness_lh(0.0, 3.0, 7.0) == 9.0);
  // quadratic saddle with c = 1: constant J of norm sqrt(2)
  CHECK(smoothness_lh(123.0, std::sqrt(2.0), 0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(smoothness_lh(-1.0, 1.0, 1.0), InputError);
}

TEST_CASE("rate prediction") {
  PlCertificate cert;
  cert.alpha = 1.0;
  const RatePrediction r = predict_rate(cert, 2.0);
  CHECK(r.h_factor == doctest::Approx(0.5));
  CHECK(r.xi_factor == doctest::Approx(std::sqrt(0.5)));

  cert.alpha = 2.0;
  const RatePrediction exact = predict_rate(cert, 2.0);
  CHECK(exact.h_factor == 0.0);
  CHECK(exact.xi_factor == 0.0);

  // and the one-step prediction is observed: grad H = 2x for this family
  Objective quad(QuadraticSaddleFamily{1.0}, 1);
  SolverConfig cfg;
  cfg.method = Method::Hgd;
  cfg.eta = 0.5;
  cfg.eps_stop = 0.0;
  cfg.max_iters = 1;
  const Trajectory t = run(quad, cfg, Point(3.0, -1.0));
  CHECK(t.iterates.back().stacked().norm() == 0.0);

  cert.alpha = 3.0;
  CHECK_THROWS_AS(predict_rate(cert, 2.0), CertificationError);
}

TEST_CASE("consensus parameter selection") {
  const CoParameters a = co_parameters(1.0, 1.0, 1.0);
  CHECK(a.eta == doctest::Approx(0.25));
  CHECK(a.co_gamma == doctest::Approx(4.0));
  CHECK(a.rate == doctest::Approx(0.75));

  const CoParameters b = co_parameters(2.0, 2.0, 1.0);
  CHECK(b.eta == doctest::Approx(0.25));
  CHECK(b.co_gamma == doctest::Approx(2.0));
  CHECK(b.rate == doctest::Approx(0.75));

  // rate stays inside (0, 1) whenever alpha <= L_H
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.1, 10.0);
  for (int n = 0; n < 100; ++n) {
    const double l_h = unif(rng);
    const double alpha = l_h * 0.999 * (0.01 + 0.99 * (n / 100.0));
    const CoParameters c = co_parameters(alpha, l_h, unif(rng));
    CHECK(c.rate > 0.0);
    CHECK(c.rate < 1.0);
  }

  CHECK_THROWS_AS(co_parameters(0.0, 1.0, 1.0), InputError);
  CHECK_THROWS_AS(co_parameters(1.0, 1.0, -2.0), InputError);
}

TEST_CASE("fixed point of the strongly coupled stationarity map") {
  const auto pwc_grad = [](const Vector& z) {
    Vector out(z.size());
    for (Index i = 0; i < z.size(); ++i) out[i] = piecewise_cosine(z[i], 1);
    return out;
  };

  // the nonconvex showcase: c = 4 > L = 3, unique critical point at (0, 0)
  Vector start(1);
  start[0] = 5.0;
  const FixedPointResult fp =
      contraction_fixed_point(pwc_grad, pwc_grad, 4.0, 3.0, start, 1e-10);
  CHECK(fp.point.stacked().norm() <= 1e-8);
  CHECK(fp.iterations < 100000);

  // the reconstructed point is critical for the matching objective
  Objective obj(CoupledScalarFamily{ScalarFn::PiecewiseCosine, 4.0}, 1);
  CHECK(obj.xi(fp.point).norm() <= 10.0 * 1e-10);

  // linear maps: odd symmetry pins the fixed point at zero
  const auto identity = [](const Vector& z) { return z; };
  Vector one(1);
  one[0] = 1.0;
  const FixedPointResult lin =
      contraction_fixed_point(identity, identity, 2.0, 1.0, one, 1e-12);
  CHECK(lin.point.stacked().norm() <= 1e-11);

  // refuse when the coupling cannot certify a contraction
  CHECK_THROWS_AS(
      contraction_fixed_point(pwc_grad, pwc_grad, 2.0, 3.0, start, 1e-10),
      CertificationError);
}

TEST_CASE("fixed point matches an independent bisection root") {
  // f = softplus, h = quadratic, c = 3: x2 solves z + (1/3) sigmoid(z/3) = 0
  const auto grad_f = [](const Vector& z) {
    Vector out(z.size());
    for (Index i = 0; i < z.size(); ++i) out[i] = softplus(z[i], 1);
    return out;
  };
  const auto grad_h = [](const Vector& z) { return z; };

  double lo = -1.0, hi = 0.0;
  const auto g = [](double z) { return z + softplus(z / 3.0, 1) / 3.0; };
  REQUIRE(g(lo) < 0.0);
  REQUIRE(g(hi) > 0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);

  Vector start(1);
  start[0] = 0.7;
  const FixedPointResult fp =
      contraction_fixed_point(grad_f, grad_h, 3.0, 1.0, start, 1e-12);
  CHECK(std::abs(fp.point.x2[0] - root) <= 1e-10);
  // x1 recovered through the stationarity system
  CHECK(fp.point.x1[0] == doctest::Approx(root / 3.0).epsilon(1e-9));
}

TEST_CASE("closed-form profiles for the polynomial families") {
  const Box region = Box::cube(2, -5.0, 5.0);
  Objective quad(QuadraticSaddleFamily{1.0}, 1);
  const SpectralProfile pq = analytic_profile(quad, region);
  CHECK(pq.L2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(pq.L3 == 0.0);
  CHECK(pq.smoothness_h() == doctest::Approx(2.0));
  CHECK(pq.gamma == 1.0);
  CHECK(pq.rho2 == doctest::Approx(1.0));
  CHECK(*pq.L_g == doctest::Approx(std::sqrt(2.0)));
  CHECK_NOTHROW(pq.validate());

  Matrix C(1, 1);
  C << 2.0;
  Objective bil(BilinearFamily{C}, 1);
  const SpectralProfile pb = analytic_profile(bil, region);
  CHECK(pb.L == 0.0);
  CHECK(pb.gamma == 2.0);
  CHECK(pb.Gamma == 2.0);
  CHECK(pb.L2 == doctest::Approx(2.0));
  CHECK(pb.smoothness_h() == doctest::Approx(4.0));

  Objective soft(CoupledScalarFamily{ScalarFn::Softplus, 3.0}, 1);
  CHECK_THROWS_AS(analytic_profile(soft, region), InputError);
}

TEST_CASE("sufficiently bilinear certificate holds on a live trajectory") {
  // f(x1) + 3L x1 x2 - h(x2) with smooth convex f = h = softplus (L = 1/4):
  // neither strongly convex nor linear in either player, yet the strong
  // cross-coupling certifies a linear rate, and the certified contraction
  // bounds the observed gradient norms along the whole run.
  Objective obj(
      RegularizedBilinearFamily{ScalarFn::Softplus, ScalarFn::Softplus, 0.75},
      1);
  const Box region = Box::cube(2, -6.0, 6.0);
  const SpectralProfile prof = estimate_profile(obj, region, 8192, 5);

  const BilinearityCheck cond = check_sufficiently_bilinear(prof);
  REQUIRE(cond.holds);
  const PlCertificate cert =
      pl_parameter(prof, SufficientlyBilinearRegime{});
  const double l_h = prof.smoothness_h();
  CHECK(cert.alpha > 0.1);
  CHECK(cert.alpha < l_h);

  SolverConfig cfg;
  cfg.method = Method::Hgd;
  cfg.eta = 1.0 / l_h;
  cfg.max_iters = 300;
  cfg.eps_stop = 0.0;
  const Trajectory t = run(obj, cfg, Point(5.0, 5.0));
  const double xi0 = t.grad_norm.front();
  const double factor = std::sqrt(1.0 - cert.alpha / l_h);
  for (size_t k = 0; k < t.grad_norm.size(); ++k) {
    const double bound = std::pow(factor, static_cast<double>(k)) * xi0;
    CHECK(bound - t.grad_norm[k] >= -1e-12);
  }
  CHECK(t.grad_norm.back() <= 1e-10);
}

TEST_CASE("sampled profiles for the transcendental families") {
  Objective soft(CoupledScalarFamily{ScalarFn::Softplus, 3.0}, 1);
  const Box region = Box::cube(2, -6.0, 6.0);
  const SpectralProfile prof = estimate_profile(soft, region, 4096, 17);
  CHECK_NOTHROW(prof.validate());

  // the cross block is exactly 3I everywhere
  CHECK(prof.gamma == doctest::Approx(3.0));
  CHECK(prof.Gamma == doctest::Approx(3.0));
  // softplus curvature peaks at 1/4
  CHECK(prof.L <= 0.25 + 1e-9);
  CHECK(prof.L >= 0.2);
  // |J| <= 3 + max phi'' = 3.25; the 10% inflation keeps this a true bound
  CHECK(prof.L2 >= 3.0);
  CHECK(prof.L2 <= 1.1 * 3.25 + 1e-9);
  // third-derivative bound of softplus is ~0.0962
  CHECK(prof.L3 <= 0.11);

  // deterministic given the seed
  const SpectralProfile again = estimate_profile(soft, region, 4096, 17);
  CHECK(again.L1 == prof.L1);
  CHECK(again.L3 == prof.L3);
}

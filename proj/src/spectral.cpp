#include "minimax/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace minimax {

namespace {

void require_symmetric(const Matrix& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw InputError(std::string(name) + " must be square");
  }
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InputError(std::string(name) + " must be symmetric");
  }
}

}  // namespace

void SpectralProfile::validate() const {
  const bool finite = std::isfinite(L) && std::isfinite(gamma) &&
                      std::isfinite(Gamma) && std::isfinite(rho2) &&
                      std::isfinite(mu2) && std::isfinite(L1) &&
                      std::isfinite(L2) && std::isfinite(L3) &&
                      (!L_g || std::isfinite(*L_g));
  if (!finite) throw InputError("SpectralProfile: constants must be finite");
  if (L < 0 || L1 < 0 || L2 < 0 || L3 < 0) {
    throw InputError("SpectralProfile: Lipschitz constants must be >= 0");
  }
  if (!(0 <= gamma && gamma <= Gamma)) {
    throw InputError("SpectralProfile: requires 0 <= gamma <= Gamma");
  }
  if (rho2 < 0 || mu2 < 0) {
    throw InputError("SpectralProfile: rho2, mu2 must be >= 0");
  }
  // |J| and the joint Hessian norm bound the same operator.
  if (L_g && L2 > *L_g * (1.0 + 1e-9)) {
    throw InputError("SpectralProfile: L2 exceeds the joint smoothness L_g");
  }
}

const char* regime_name(PlRegime regime) {
  switch (regime) {
    case PlRegime::Scsc: return "scsc";
    case PlRegime::NonconvexLinear: return "nonconvex_linear";
    case PlRegime::SufficientlyBilinear: return "sufficiently_bilinear";
    case PlRegime::Empirical: return "empirical";
  }
  return "?";
}

BilinearityCheck check_sufficiently_bilinear(const SpectralProfile& profile) {
  profile.validate();
  const double g2 = profile.gamma * profile.gamma;
  const double G2 = profile.Gamma * profile.Gamma;
  BilinearityCheck out;
  out.margin = (g2 + profile.rho2) * (profile.mu2 + g2) -
               4.0 * profile.L * profile.L * G2;
  out.alt_margin = (g2 + profile.rho2) * (profile.mu2 + g2) - 4.0 * profile.L * G2;
  out.holds = out.margin > 0.0;
  return out;
}

PlCertificate pl_parameter(const SpectralProfile& profile,
                           const Regime& regime) {
  profile.validate();
  PlCertificate cert;

  if (const auto* scsc = std::get_if<ScscRegime>(&regime)) {
    if (!(scsc->c > 0)) {
      throw CertificationError("pl_parameter: scsc regime needs c > 0",
                               scsc->c);
    }
    cert.alpha = scsc->c * scsc->c;
    cert.regime = PlRegime::Scsc;
  } else if (std::holds_alternative<NonconvexLinearRegime>(regime)) {
    if (!(profile.gamma > 0)) {
      throw CertificationError(
          "pl_parameter: nonconvex-linear regime needs gamma > 0",
          profile.gamma);
    }
    const double g2 = profile.gamma * profile.gamma;
    cert.alpha = g2 * g2 / (2.0 * g2 + profile.L * profile.L);
    cert.regime = PlRegime::NonconvexLinear;
  } else if (std::holds_alternative<SufficientlyBilinearRegime>(regime)) {
    const BilinearityCheck check = check_sufficiently_bilinear(profile);
    if (!check.holds) {
      throw CertificationError(
          "pl_parameter: sufficiently-bilinear condition fails (margin " +
              std::to_string(check.margin) + ")",
          check.margin);
    }
    const double g2 = profile.gamma * profile.gamma;
    cert.alpha = check.margin / (2.0 * g2 + profile.rho2 + profile.mu2);
    cert.regime = PlRegime::SufficientlyBilinear;
    cert.condition_margin = check.margin;
  } else {
    const auto& emp = std::get<EmpiricalRegime>(regime);
    if (!(emp.alpha_hat > 0)) {
      throw CertificationError("pl_parameter: empirical alpha must be > 0",
                               emp.alpha_hat);
    }
    cert.alpha = emp.alpha_hat;
    cert.regime = PlRegime::Empirical;
  }

  const double l_h = profile.smoothness_h();
  if (cert.alpha > l_h) {
    throw CertificationError(
        "pl_parameter: alpha exceeds the smoothness constant of H "
        "(inconsistent profile)",
        l_h - cert.alpha);
  }
  cert.contraction = 1.0 - cert.alpha / l_h;
  return cert;
}

Matrix signed_block_matrix(const Matrix& A, const Matrix& C, const Matrix& B) {
  const Index d = C.rows();
  if (C.cols() != d || A.rows() != d || A.cols() != d || B.rows() != d ||
      B.cols() != d) {
    throw InputError("signed_block_matrix: blocks must all be d x d");
  }
  Matrix H(2 * d, 2 * d);
  H.topLeftCorner(d, d) = A;
  H.topRightCorner(d, d) = C;
  H.bottomLeftCorner(d, d) = -C.transpose();
  H.bottomRightCorner(d, d) = -B;
  return H;
}

double lambda_min_sym(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double lambda_max_sym(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double lambda_min_squared_sym(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs2().minCoeff();
}

double spectral_norm(const Matrix& M) {
  return Eigen::JacobiSVD<Matrix>(M).singularValues().maxCoeff();
}

double sigma_min(const Matrix& M) {
  return Eigen::JacobiSVD<Matrix>(M).singularValues().minCoeff();
}

double eig_bound_definite(const Matrix& M1, const Matrix& M2, const Matrix& B,
                          double eps) {
  require_symmetric(M1, "eig_bound_definite: M1");
  require_symmetric(M2, "eig_bound_definite: M2");
  if (!(eps >= 0)) throw InputError("eig_bound_definite: eps must be >= 0");
  const double lo1 = lambda_min_sym(M1);
  if (!(lo1 > eps)) {
    throw CertificationError(
        "eig_bound_definite: M1 block fails lambda_min > eps", lo1 - eps);
  }
  const double hi2 = lambda_max_sym(M2);
  if (!(hi2 < -eps)) {
    throw CertificationError(
        "eig_bound_definite: M2 block fails lambda_max < -eps", -eps - hi2);
  }
  return eps * eps;
}

double eig_bound_convex(const Matrix& A, const Matrix& C) {
  require_symmetric(A, "eig_bound_convex: A");
  if (C.rows() != C.cols() || C.rows() != A.rows()) {
    throw InputError("eig_bound_convex: C must be square, same size as A");
  }
  const double smin = sigma_min(C);
  if (!(smin > 0)) {
    throw CertificationError("eig_bound_convex: C is singular", smin);
  }
  const double s2 = smin * smin;
  const double a = spectral_norm(A);
  return s2 * s2 / (2.0 * s2 + a * a);
}

double eig_bound_general(const Matrix& A, const Matrix& B, const Matrix& C) {
  require_symmetric(A, "eig_bound_general: A");
  require_symmetric(B, "eig_bound_general: B");
  if (C.rows() != C.cols() || C.rows() != A.rows() || B.rows() != A.rows()) {
    throw InputError("eig_bound_general: blocks must be square and same size");
  }
  Eigen::JacobiSVD<Matrix> svd(C);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0)) {
    throw CertificationError("eig_bound_general: C is singular", smin);
  }
  const double s2 = smin * smin;
  const double la = lambda_min_squared_sym(A);
  const double lb = lambda_min_squared_sym(B);
  const double na = spectral_norm(A);
  const double nb = spectral_norm(B);
  const double c = (s2 + la) * (lb + s2) - smax * smax * (na + nb) * (na + nb);
  if (!(c > 0)) {
    throw CertificationError("eig_bound_general: hypothesis c > 0 fails", c);
  }
  const double b = 2.0 * s2 + la + lb;
  return c / b;
}

GridCertificate min_eig_jjt(const Objective& obj, const Box& region,
                            int resolution) {
  const Index n = 2 * obj.dim();
  if (region.dim() != n) {
    throw InputError("min_eig_jjt: region must live in R^{2d}");
  }
  if (resolution < 2) throw InputError("min_eig_jjt: resolution must be >= 2");

  GridCertificate out{std::numeric_limits<double>::infinity(),
                      Point(Vector::Zero(obj.dim()), Vector::Zero(obj.dim())),
                      region, resolution};

  Vector z(n);
  std::vector<int> idx(static_cast<size_t>(n), 0);
  const auto coord = [&](Index axis, int i) {
    return region.lo[axis] + (region.hi[axis] - region.lo[axis]) *
                                 static_cast<double>(i) /
                                 static_cast<double>(resolution - 1);
  };
  bool done = false;
  while (!done) {
    for (Index a = 0; a < n; ++a) z[a] = coord(a, idx[static_cast<size_t>(a)]);
    const Point p = Point::from_stacked(z);
    const Matrix J = obj.jacobian(p);
    const double lo = lambda_min_sym(J * J.transpose());
    if (lo < out.alpha_hat) {
      out.alpha_hat = lo;
      out.argmin = p;
    }
    // mixed-radix increment
    Index a = 0;
    for (; a < n; ++a) {
      if (++idx[static_cast<size_t>(a)] < resolution) break;
      idx[static_cast<size_t>(a)] = 0;
    }
    done = (a == n);
  }
  return out;
}

double smoothness_lh(double l1, double l2, double l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) {
    throw InputError("smoothness_lh: constants must be >= 0");
  }
  return l1 * l3 + l2 * l2;
}

RatePrediction predict_rate(const PlCertificate& cert, double l_h) {
  if (!(cert.alpha > 0)) throw InputError("predict_rate: alpha must be > 0");
  if (cert.alpha > l_h) {
    throw CertificationError(
        "predict_rate: alpha > L_H (inconsistent certificate)",
        l_h - cert.alpha);
  }
  const double h_factor = 1.0 - cert.alpha / l_h;
  return {h_factor, std::sqrt(h_factor)};
}

CoParameters co_parameters(double alpha, double l_h, double l_g) {
  if (!(alpha > 0) || !(l_h > 0) || !(l_g > 0)) {
    throw InputError("co_parameters: all inputs must be > 0");
  }
  CoParameters out;
  out.eta = alpha / (4.0 * l_h * l_g);
  out.co_gamma = 4.0 * l_g / alpha;
  out.rate = 1.0 - alpha / (4.0 * l_h);
  return out;
}

FixedPointResult contraction_fixed_point(const VectorField& grad_f,
                                         const VectorField& grad_h, double c,
                                         double lipschitz_bound,
                                         const Vector& start, double tol) {
  if (!(c > lipschitz_bound)) {
    throw CertificationError(
        "contraction_fixed_point: needs coupling c > smoothness L",
        c - lipschitz_bound);
  }
  if (!(tol > 0)) throw InputError("contraction_fixed_point: tol must be > 0");

  constexpr int kMaxIters = 100000;
  Vector z = start;
  for (int it = 1; it <= kMaxIters; ++it) {
    const Vector znext = -(1.0 / c) * grad_f((1.0 / c) * grad_h(z));
    const double delta = (znext - z).norm();
    z = znext;
    if (delta <= tol) {
      const Vector x1 = (1.0 / c) * grad_h(z);
      return {Point(x1, z), it};
    }
  }
  throw std::runtime_error(
      "contraction_fixed_point: no convergence within 1e5 iterations");
}

SpectralProfile analytic_profile(const Objective& obj, const Box& region) {
  if (region.dim() != 2 * obj.dim()) {
    throw InputError("analytic_profile: region must live in R^{2d}");
  }
  SpectralProfile prof;
  if (const auto* bil = std::get_if<BilinearFamily>(&obj.family())) {
    Eigen::JacobiSVD<Matrix> svd(bil->C);
    const double smax = svd.singularValues().maxCoeff();
    prof.L = 0.0;
    prof.gamma = svd.singularValues().minCoeff();
    prof.Gamma = smax;
    prof.rho2 = 0.0;
    prof.mu2 = 0.0;
    prof.L1 = smax * region.radius();  // |xi| = |(C x2, -C'x1)| <= smax |x|
    prof.L2 = smax;                    // J'J = diag(C C', C'C)
    prof.L3 = 0.0;
    prof.L_g = smax;
    return prof;
  }
  if (const auto* quad = std::get_if<QuadraticSaddleFamily>(&obj.family())) {
    const double c = quad->c;
    const double norm_j = std::sqrt(c * c + 1.0);  // J'J = (c^2+1) I
    prof.L = c;
    prof.gamma = 1.0;
    prof.Gamma = 1.0;
    prof.rho2 = c * c;
    prof.mu2 = c * c;
    prof.L1 = norm_j * region.radius();
    prof.L2 = norm_j;
    prof.L3 = 0.0;
    prof.L_g = norm_j;  // the symmetric Hessian also squares to (c^2+1) I
    return prof;
  }
  throw InputError(
      "analytic_profile: only bilinear and quadratic families have "
      "closed-form constants; use estimate_profile");
}

SpectralProfile estimate_profile(const Objective& obj, const Box& region,
                                 int samples, std::uint64_t seed) {
  if (region.dim() != 2 * obj.dim()) {
    throw InputError("estimate_profile: region must live in R^{2d}");
  }
  if (samples < 2) throw InputError("estimate_profile: need >= 2 samples");

  const Index d = obj.dim();
  const Index n = 2 * d;
  std::mt19937_64 rng(seed);
  const auto draw = [&]() {
    Vector z(n);
    for (Index i = 0; i < n; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      z[i] = region.lo[i] + u * (region.hi[i] - region.lo[i]);
    }
    return z;
  };

  SpectralProfile prof;
  prof.gamma = std::numeric_limits<double>::infinity();
  prof.rho2 = std::numeric_limits<double>::infinity();
  prof.mu2 = std::numeric_limits<double>::infinity();
  double l_g = 0.0;
  const double probe = 1e-4 * (region.hi - region.lo).norm();

  Vector prev;
  Matrix prev_j;
  for (int s = 0; s < samples; ++s) {
    const Vector z = draw();
    const Point p = Point::from_stacked(z);
    const Matrix J = obj.jacobian(p);
    const Matrix h11 = J.topLeftCorner(d, d);
    const Matrix h12 = J.topRightCorner(d, d);
    const Matrix h22 = -J.bottomRightCorner(d, d);

    prof.L1 = std::max(prof.L1, obj.xi(p).norm());
    prof.L2 = std::max(prof.L2, spectral_norm(J));
    prof.L = std::max({prof.L, spectral_norm(h11), spectral_norm(h22)});
    Eigen::JacobiSVD<Matrix> svd(h12);
    prof.gamma = std::min(prof.gamma, svd.singularValues().minCoeff());
    prof.Gamma = std::max(prof.Gamma, svd.singularValues().maxCoeff());
    prof.rho2 = std::min(prof.rho2, lambda_min_squared_sym(h11));
    prof.mu2 = std::min(prof.mu2, lambda_min_squared_sym(h22));

    Matrix hess(n, n);
    hess.topLeftCorner(d, d) = h11;
    hess.topRightCorner(d, d) = h12;
    hess.bottomLeftCorner(d, d) = h12.transpose();
    hess.bottomRightCorner(d, d) = h22;
    l_g = std::max(l_g, spectral_norm(hess));

    // long-range quotient against the previous sample plus a short-range
    // probe; the short one picks up localized spikes in the J variation
    if (s > 0) {
      const double dist = (z - prev).norm();
      if (dist > 1e-12) {
        prof.L3 = std::max(prof.L3, spectral_norm(J - prev_j) / dist);
      }
    }
    {
      Vector dir(n);
      for (Index i = 0; i < n; ++i) {
        dir[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
      }
      if (dir.norm() > 1e-12 && probe > 0) {
        dir *= probe / dir.norm();
        const Matrix J2 = obj.jacobian(Point::from_stacked(z + dir));
        prof.L3 = std::max(prof.L3, spectral_norm(J2 - J) / probe);
      }
    }
    prev = z;
    prev_j = J;
  }

  // Sampled suprema undershoot the true constants; inflate the Lipschitz
  // bounds by 10%.
  prof.L1 *= 1.1;
  prof.L2 *= 1.1;
  prof.L3 *= 1.1;
  prof.L_g = l_g * 1.1;
  return prof;
}

}  // namespace minimax

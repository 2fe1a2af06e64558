// Certification engine: Polyak-Lojasiewicz constants for H in three regimes,
// the sufficiently-bilinear condition, eigenvalue floors for signed block
// matrices, smoothness constants, rate prediction, consensus parameter
// selection, and fixed-point uniqueness for strongly coupled objectives.
#pragma once

#include "minimax/calculus.hpp"
#include "minimax/objectives.hpp"

#include <optional>
#include <variant>

namespace minimax {

// Constants governing the convergence rates.
//
//   L       per-player smoothness (operator-norm bound on the diagonal
//           Hessian blocks)
//   gamma   lower bound on the singular values of the cross block d2g/dx1dx2
//   Gamma   upper bound on the same singular values
//   rho2    floor of lambda_min((d2g/dx1dx1)^2) over the region
//   mu2     floor of lambda_min((d2g/dx2dx2)^2) over the region
//   L1,L2,L3  bounds on |xi|, |J|, and the Lipschitz constant of J
//   L_g     joint smoothness of g (optional)
//
// The smoothness constant of H is L1*L3 + L2^2; it is always recomputed
// from the stored constants rather than cached.
struct SpectralProfile {
  double L = 0.0;
  double gamma = 0.0;
  double Gamma = 0.0;
  double rho2 = 0.0;
  double mu2 = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double L3 = 0.0;
  std::optional<double> L_g;

  double smoothness_h() const { return L1 * L3 + L2 * L2; }
  void validate() const;
};

enum class PlRegime { Scsc, NonconvexLinear, SufficientlyBilinear, Empirical };

const char* regime_name(PlRegime regime);

// Regime selectors for pl_parameter. Scsc carries the strong
// convexity/concavity modulus; Empirical carries a grid-certified floor.
struct ScscRegime {
  double c;
};
struct NonconvexLinearRegime {};
struct SufficientlyBilinearRegime {};
struct EmpiricalRegime {
  double alpha_hat;
};
using Regime = std::variant<ScscRegime, NonconvexLinearRegime,
                            SufficientlyBilinearRegime, EmpiricalRegime>;

struct PlCertificate {
  double alpha = 0.0;     // PL constant, > 0
  PlRegime regime = PlRegime::Empirical;
  double contraction = 0.0;  // 1 - alpha / L_H, in [0, 1)
  std::optional<double> condition_margin;  // SufficientlyBilinear only
};

// alpha by regime:
//   Scsc                  c^2
//   NonconvexLinear       gamma^4 / (2 gamma^2 + L^2)
//   SufficientlyBilinear  ((gamma^2+rho2)(gamma^2+mu2) - 4 L^2 Gamma^2)
//                           / (2 gamma^2 + rho2 + mu2)
// Refuses (CertificationError) when the regime hypothesis fails or when
// alpha > L_H would make the contraction negative.
PlCertificate pl_parameter(const SpectralProfile& profile, const Regime& regime);

struct BilinearityCheck {
  bool holds = false;
  // (gamma^2 + rho2)(mu2 + gamma^2) - 4 L^2 Gamma^2; the condition holds
  // iff this is positive.
  double margin = 0.0;
  // Diagnostic variant with 4 L Gamma^2 in place of 4 L^2 Gamma^2.
  double alt_margin = 0.0;
};

BilinearityCheck check_sufficiently_bilinear(const SpectralProfile& profile);

// Assembles [[A, C], [-C', -B]] -- the Jacobian shape of a signed gradient
// field whose Hessian blocks are A (x1x1), C (x1x2), and B (x2x2).
Matrix signed_block_matrix(const Matrix& A, const Matrix& C, const Matrix& B);

// Eigenvalue floors for HH' with H = [[M1, B], [-B', -M2]].
//
// Requires lambda_min(M1) > eps and lambda_max(M2) < -eps; then every
// eigenvalue of HH' exceeds eps^2, and eps^2 is returned.
double eig_bound_definite(const Matrix& M1, const Matrix& M2, const Matrix& B,
                          double eps);

// H = [[A, C], [-C', 0]] with C square and full rank:
// lambda_min(HH') >= sigma_min(C)^4 / (2 sigma_min(C)^2 + |A|^2).
double eig_bound_convex(const Matrix& A, const Matrix& C);

// H = [[A, C], [-C', -B]] with C square and full rank. With
//   c = (sigma_min(C)^2 + lambda_min(A^2)) (lambda_min(B^2) + sigma_min(C)^2)
//       - sigma_max(C)^2 (|A| + |B|)^2          (must be > 0)
//   b = 2 sigma_min(C)^2 + lambda_min(A^2) + lambda_min(B^2)
// returns c / b, a lower bound on lambda_min(HH').
double eig_bound_general(const Matrix& A, const Matrix& B, const Matrix& C);

// Dense symmetric helpers. Norms follow the operator-norm convention
// (spectral norm via SVD).
double lambda_min_sym(const Matrix& M);
double lambda_max_sym(const Matrix& M);
double lambda_min_squared_sym(const Matrix& M);  // min over eigenvalues of M^2
double spectral_norm(const Matrix& M);
double sigma_min(const Matrix& M);

// min over the grid of lambda_min(J J'): an empirical PL floor certified at
// the grid points only (the region and resolution are part of the result).
struct GridCertificate {
  double alpha_hat = 0.0;
  Point argmin;
  Box region;
  int resolution = 0;
};
GridCertificate min_eig_jjt(const Objective& obj, const Box& region,
                            int resolution);

// L1*L3 + L2^2; inputs must be >= 0.
double smoothness_lh(double l1, double l2, double l3);

struct RatePrediction {
  double h_factor;   // per-step factor on H
  double xi_factor;  // per-step factor on |xi| (sqrt of the above)
};
RatePrediction predict_rate(const PlCertificate& cert, double l_h);

struct CoParameters {
  double eta;       // alpha / (4 L_H L_g)
  double co_gamma;  // 4 L_g / alpha
  double rate;      // per-step factor on |xi|: 1 - alpha / (4 L_H)
};
CoParameters co_parameters(double alpha, double l_h, double l_g);

// For g = f(x1) + c x1'x2 - h(x2) with f, h L-smooth and c > L, the
// stationarity system has exactly one solution: x2 is the unique fixed
// point of z -> -(1/c) grad_f((1/c) grad_h(z)) and x1 = (1/c) grad_h(x2).
// Iterates until the update moves less than tol; refuses when c <= L,
// errors out after 1e5 iterations.
struct FixedPointResult {
  Point point;
  int iterations = 0;
};
FixedPointResult contraction_fixed_point(const VectorField& grad_f,
                                         const VectorField& grad_h, double c,
                                         double lipschitz_bound,
                                         const Vector& start, double tol);

// Closed-form constants for the polynomial families (Bilinear,
// QuadraticSaddle); L1 is reported over the given box. Throws for families
// without closed-form constants.
SpectralProfile analytic_profile(const Objective& obj, const Box& region);

// Sampled constants over the region: difference quotients for L3, pointwise
// extrema for the rest. L1, L2, L3 are inflated by 10% to cover the gap
// between sampled and true suprema. Deterministic given the seed.
SpectralProfile estimate_profile(const Objective& obj, const Box& region,
                                 int samples, std::uint64_t seed);

}  // namespace minimax

#include "abspec/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace abspec {

namespace {

using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<Complex>;

// M-orthonormalizes the columns of V in place (columns may mix), dropping
// near-dependent ones. Throws if M is indefinite.
void m_orthonormalize(const Eigen::SparseMatrix<double>& M, MatX& V) {
  MatX G = V.adjoint() * (M * V);
  G = 0.5 * (G + G.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<MatX> es(G);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: Gram eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  const double gmax = ev.cwiseAbs().maxCoeff();
  if (gmax <= 0.0 || ev.minCoeff() < -1e-10 * gmax)
    throw std::runtime_error("eigensolve: mass matrix not positive definite");
  MatX T(V.cols(), V.cols());
  int kept = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > 1e-12 * gmax) T.col(kept++) = es.eigenvectors().col(i) / std::sqrt(ev[i]);
  V = (V * T.leftCols(kept)).eval();
}

// Deterministic standard-normal block (explicit Box-Muller; the stdlib
// distribution sequence is implementation-defined).
MatX random_block(int n, int cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&]() { return (rng() >> 11) * 0x1.0p-53 + 0x1.0p-54; };
  MatX X(n, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n; ++i) {
      const double u1 = uni(), u2 = uni();
      const double r = std::sqrt(-2.0 * std::log(u1));
      X(i, j) = Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
  return X;
}

// Preconditioner chain: exact sparse Cholesky of K when it factors (cheap
// at desk scale and makes the block iteration converge in a few dozen
// steps), else incomplete Cholesky, else the diagonal.
struct Preconditioner {
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  Eigen::IncompleteCholesky<Complex, Eigen::Lower, Eigen::AMDOrdering<int>> ic;
  Eigen::VectorXd inv_diag;
  enum class Kind { kExact, kIncomplete, kDiagonal } kind = Kind::kDiagonal;

  void build(const SpMat& K) {
    if (K.rows() <= 200000) {
      llt.compute(K);
      if (llt.info() == Eigen::Success) {
        kind = Kind::kExact;
        return;
      }
    }
    ic.compute(K);
    if (ic.info() == Eigen::Success) {
      kind = Kind::kIncomplete;
      return;
    }
    inv_diag = K.diagonal().real().cwiseMax(1e-300).cwiseInverse();
  }
  MatX apply(const MatX& R) const {
    switch (kind) {
      case Kind::kExact:
        return llt.solve(R);
      case Kind::kIncomplete: {
        MatX out(R.rows(), R.cols());
        for (int j = 0; j < R.cols(); ++j) out.col(j) = ic.solve(R.col(j));
        return out;
      }
      default:
        return inv_diag.asDiagonal() * R;
    }
  }
};

SpectrumSlice finalize(const AssembledSystem& sys, const Eigen::VectorXd& lambda,
                       const MatX& X, int m) {
  SpectrumSlice slice;
  for (int i = 0; i < m; ++i) {
    EigenPair p;
    p.lambda = lambda[i];
    VecX x = X.col(i);
    const VecX Mx = sys.mass * x;
    x /= std::sqrt(std::real(x.dot(Mx)));
    p.vector = x;
    const VecX Mx2 = sys.mass * x;
    p.l2_norm = std::sqrt(std::real(x.dot(Mx2)));
    const VecX r = sys.stiffness * x - p.lambda * Mx2;
    p.residual = r.norm() / (std::max(std::abs(p.lambda), 1e-30) * Mx2.norm());
    slice.pairs.push_back(std::move(p));
  }
  return slice;
}

}  // namespace

SpectrumSlice solve_lowest(const AssembledSystem& sys, int m, double tol,
                           SolveStats* stats) {
  const int n = sys.dim();
  if (m < 1) throw std::invalid_argument("solve_lowest: m must be >= 1");
  if (n == 0) throw std::invalid_argument("solve_lowest: empty system");

  if (n <= 64) {
    // dense path for injected small systems
    if (m > n) throw std::invalid_argument("solve_lowest: m exceeds dimension");
    MatX K = MatX(sys.stiffness);
    MatX M = MatX(sys.mass.cast<Complex>());
    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(K, M);
    if (es.info() != Eigen::Success) throw std::runtime_error("solve_lowest: dense solve failed");
    return finalize(sys, es.eigenvalues().head(m), es.eigenvectors().leftCols(m), m);
  }

  if (m > n / 4) throw std::invalid_argument("solve_lowest: m must not exceed dim/4");

  const int nb = std::min(n / 3, m + std::max(2, m / 2));
  Preconditioner prec;
  prec.build(sys.stiffness);
  if (stats) stats->ic_preconditioner = prec.kind != Preconditioner::Kind::kDiagonal;

  MatX X = random_block(n, nb, 0x5eed5eedULL);
  {
    // start M-orthogonal to constants
    const VecX ones = VecX::Ones(n);
    const VecX Mones = sys.mass * ones;
    X -= ones * ((Mones.adjoint() * X) / ones.dot(Mones));
  }
  MatX P(n, 0);

  const int maxit = 600;
  std::vector<double> best_res(m, 1.0);
  for (int it = 0; it < maxit; ++it) {
    if (stats) stats->iterations = it + 1;
    m_orthonormalize(sys.mass, X);
    if (X.cols() < m) throw std::runtime_error("solve_lowest: block collapse");

    // Rayleigh-Ritz on the X block alone
    MatX KX = sys.stiffness * X;
    MatX H = X.adjoint() * KX;
    H = 0.5 * (H + H.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<MatX> es(H);
    X = (X * es.eigenvectors()).eval();
    Eigen::VectorXd lambda = es.eigenvalues();

    KX = sys.stiffness * X;
    MatX MX = sys.mass * X;
    const MatX R = KX - MX * lambda.asDiagonal();
    bool converged = true;
    for (int i = 0; i < m; ++i) {
      best_res[i] = R.col(i).norm() /
                    (std::max(std::abs(lambda[i]), 1e-30) * MX.col(i).norm());
      if (best_res[i] > tol) converged = false;
    }
    if (converged) return finalize(sys, lambda, X, m);

    // W, P orthogonalized against X (and each other) in the M-inner
    // product; repeating the projection keeps the joint basis orthonormal
    // to machine precision so the Rayleigh-Ritz below stays well posed
    // at small residuals.
    MatX W = prec.apply(R);
    for (int pass = 0; pass < 2; ++pass) W -= X * (MX.adjoint() * W);
    m_orthonormalize(sys.mass, W);
    if (P.cols() > 0) {
      const MatX MW = sys.mass * W;
      for (int pass = 0; pass < 2; ++pass) {
        P -= X * (MX.adjoint() * P);
        P -= W * (MW.adjoint() * P);
      }
      m_orthonormalize(sys.mass, P);
    }

    const int nx = static_cast<int>(X.cols());
    MatX V(n, nx + W.cols() + P.cols());
    V << X, W, P;
    MatX Hv = V.adjoint() * (sys.stiffness * V);
    Hv = 0.5 * (Hv + Hv.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<MatX> esv(Hv);
    const int keep = std::min<int>(nb, V.cols());
    const MatX C = esv.eigenvectors().leftCols(keep);

    X = V * C;
    MatX Cp = C;
    Cp.topRows(nx).setZero();
    P = V * Cp;
    if (P.cols() > nb) P = P.leftCols(nb).eval();
  }

  std::ostringstream msg;
  msg << "solve_lowest: no convergence after " << maxit << " iterations; residuals:";
  for (double r : best_res) msg << ' ' << r;
  throw std::runtime_error(msg.str());
}

bool check_simplicity(SpectrumSlice& slice, int n0, double rel_gap) {
  const int m = static_cast<int>(slice.pairs.size());
  if (n0 < 1 || n0 > m - 1)
    throw std::invalid_argument("check_simplicity: need 1 <= n0 <= m-1");
  const double ln = slice.pairs[n0 - 1].lambda;
  const double above = slice.pairs[n0].lambda - ln;
  const double below =
      n0 >= 2 ? ln - slice.pairs[n0 - 2].lambda : std::numeric_limits<double>::infinity();
  slice.target = n0;
  slice.gap_below_target = below;
  slice.gap_above_target = above;
  slice.simple = std::min(below, above) > rel_gap * ln;
  return slice.simple;
}

EigenPair align_phase(const EigenPair& pair, const AssembledSystem& sys,
                      const EigenPair& reference, const AssembledSystem& ref_sys) {
  if (ref_sys.cfg.pole.norm() > 0.0)
    throw std::invalid_argument("align_phase: reference must live at pole 0");
  const Mesh& mesh_a = *sys.mesh;
  const Eigen::VectorXcd nodal_a = sys.expand(pair.vector);
  const Eigen::VectorXcd nodal_0 = ref_sys.expand(reference.vector);
  PointLocator loc_a(mesh_a), loc_0(*ref_sys.mesh);
  FieldSampler fa(mesh_a, loc_a, nodal_a);
  FieldSampler f0(*ref_sys.mesh, loc_0, nodal_0);
  const PoleConfig& cfg = sys.cfg;

  const Complex I =
      integrate_mesh_with_cut(mesh_a, cfg.pole, 4, [&](const Vec2& x, int t, int side) {
        return gauge_phase_on_side(cfg, x, side) * fa.value_in(t, x) *
               std::conj(f0.value(x));
      });
  const double mag = std::abs(I);
  if (mag < 1e-10)
    throw std::runtime_error(
        "align_phase: overlap integral too small (ambiguous phase; wrong pairing?)");
  EigenPair out = pair;
  out.vector *= std::conj(I) / mag;
  out.phase_aligned_against = "pole0";
  return out;
}

}  // namespace abspec

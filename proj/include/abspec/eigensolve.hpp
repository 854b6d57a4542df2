#pragma once

#include <string>

#include "abspec/assembly.hpp"

namespace abspec {

struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXcd vector;  // free DOFs, M-normalized
  double l2_norm = 0.0;     // M-norm after normalization
  double residual = 0.0;    // ||K u - lambda M u|| / (lambda ||M u||)
  std::string phase_aligned_against;  // empty when not aligned
};

struct SpectrumSlice {
  std::vector<EigenPair> pairs;  // eigenvalues nondecreasing
  int target = 0;                // 1-based index set by check_simplicity
  double gap_below_target = 0.0;
  double gap_above_target = 0.0;
  bool simple = false;
};

struct SolveStats {
  int iterations = 0;
  bool ic_preconditioner = false;
};

/// Lowest m eigenpairs of K u = lambda M u by blocked Rayleigh-quotient
/// minimization (LOBPCG) with an incomplete-Cholesky (fallback diagonal)
/// preconditioner. Deterministic: the starting block comes from a fixed
/// seed. Throws on non-convergence (message carries the best residuals) and
/// if M is not positive definite. Systems of dimension <= 64 are solved
/// densely.
SpectrumSlice solve_lowest(const AssembledSystem& sys, int m, double tol = 1e-9,
                           SolveStats* stats = nullptr);

/// True iff min(lambda_{n0} - lambda_{n0-1}, lambda_{n0+1} - lambda_{n0})
/// exceeds rel_gap * lambda_{n0}. Records the gaps in the slice.
bool check_simplicity(SpectrumSlice& slice, int n0, double rel_gap);

/// Multiplies `pair` by the unit constant that makes
///   ∫_Ω e^{i alpha (theta_0^a - theta_a)} phi_a conj(phi_0) dx
/// a positive real number; reference must live at pole 0. Throws an
/// ambiguous-phase error when the integral magnitude is below 1e-10.
EigenPair align_phase(const EigenPair& pair, const AssembledSystem& sys,
                      const EigenPair& reference, const AssembledSystem& ref_sys);

}  // namespace abspec

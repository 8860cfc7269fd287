#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclat/lattice.hpp"
#include "fraclat/model.hpp"

namespace fraclat {

/// Reflection symmetry u(x) = parity * u(r - x) kept exactly by the solver.
/// A critical point of I restricted to the symmetric subspace is a critical point of I.
struct Reflection {
  Site center_sum;  ///< r; r = 0 reflects about the origin, r = e_1 about the bond (0, e_1)
  int parity = 1;   ///< +1 even, -1 odd
};

/// Projects u onto the symmetric subspace: (u + parity * u(r - .)) / 2.
Field symmetrize(const Field& u, const Reflection& sym);

struct SolverConfig {
  double tol_grad = 1e-8;         ///< stop when ||g||_2 / ||u||_2 <= tol_grad
  double tol_nehari = 1e-10;      ///< required |<I'(u), u>|
  int max_iter = 5000;
  double step0 = 1.0;             ///< first trial step
  double backtrack = 0.5;         ///< beta in (0, 1)
  double armijo = 1e-4;           ///< sufficient-decrease constant
  std::uint64_t seed = 0;
  double boundary_mass_tol = 1e-6;
  std::optional<Reflection> symmetry;

  void validate() const;
};

struct GroundStateResult {
  Field u{LatticeGeometry(1, 1)};
  double energy = 0.0;
  double grad_residual = 0.0;    ///< ||I'(u)||_2 / ||u||_2
  double nehari_residual = 0.0;  ///< <I'(u), u>
  int iterations = 0;
  std::vector<double> s_history;     ///< Nehari scale of the initial projection and of each accepted step
  std::vector<double> energy_trace;  ///< I(u_k) for k = 0..iterations, non-increasing
  double boundary_mass = 0.0;
  std::vector<std::string> warnings;
};

/// Thrown when max_iter is exhausted; carries the best iterate.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, GroundStateResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const GroundStateResult& best() const noexcept { return best_; }

 private:
  GroundStateResult best_;
};

/// Thrown when the line search underflows before convergence; carries the last iterate.
class StagnationError : public NonConvergenceError {
 public:
  using NonConvergenceError::NonConvergenceError;
};

enum class ScaleMethod { Auto, ClosedForm, RootSolve };

/// The unique s > 0 with <I'(s w), s w> = 0. Auto uses the closed form for power nonlinearities.
double nehari_scale(const Model& m, const Field& w, ScaleMethod method = ScaleMethod::Auto);

/// m(w) = s_{w^} w^ with w^ = w / ||w||_alpha.
Field project_m(const Model& m, const Field& w);

/// m^{-1}(u) = u / ||u||_alpha.
Field unproject_m(const Model& m, const Field& u);

/// Projected descent for Psi = I o m on the unit sphere: u <- m(u - eta g) with Armijo backtracking.
GroundStateResult minimize(const Model& m, const Field& w0, const SolverConfig& cfg = {});

struct OrbitMatch {
  double distance = 0.0;  ///< min ||u1 - sigma shift(u2, y)||_alpha / max(||u1||_alpha, ||u2||_alpha)
  Site shift;             ///< y* with u2 ~ sigma shift(u1, y*)
  int sign = 1;           ///< minimising sigma
};

/// Scans every shift y in the box (and sigma = +-1 when sign_aware).
OrbitMatch orbit_distance(const Model& m, const Field& u1, const Field& u2, bool sign_aware = true);

/// Seeds for multistart.
enum class SeedKind { SingleBump, TwoBump, OddPair, EvenPair };

struct InitialGuess {
  Field w;
  SeedKind kind;
  std::optional<Reflection> symmetry;
};

/// Deterministic initial field number `index` of a batch seeded by `seed`.
InitialGuess initial_guess(const LatticeGeometry& geom, std::uint64_t seed, std::size_t index);

/// Normalised Gaussian bump exp(-|x - c|^2 / width^2) (distances taken on the torus when periodic).
Field gaussian_bump(const LatticeGeometry& geom, std::span<const double> center, double width);

struct OrbitClass {
  Field representative{LatticeGeometry(1, 1)};
  double energy = 0.0;
  int multiplicity = 0;
  std::size_t first_start = 0;
};

struct StartReport {
  std::size_t index = 0;
  SeedKind kind = SeedKind::SingleBump;
  bool converged = false;
  double energy = 0.0;
  int iterations = 0;
  std::size_t orbit = 0;  ///< index into SolutionSet::orbits when converged
  std::string message;
};

struct SolutionSet {
  std::vector<OrbitClass> orbits;  ///< sorted by energy
  double dedupe_tol = 1e-4;
  std::vector<StartReport> starts;
  std::vector<Field> solutions;          ///< every converged field, in start order
  std::vector<double> solution_energies;

  /// Lowest energy found (estimate of the ground-state level c).
  double ground_energy() const;
};

struct MultistartConfig {
  int n_starts = 1;
  std::uint64_t seed = 0;
  double dedupe_tol = 1e-4;
  unsigned threads = 0;  ///< 0: FRACLAT_THREADS or hardware concurrency
};

SolutionSet multistart(const Model& m, const MultistartConfig& ms, const SolverConfig& cfg = {});

/// Batch-level certificates derived from the minimum energy c_batch of a set of solutions on M.
struct BatchCertificate {
  double c_batch = 0.0;
  double min_norm_ratio = 0.0;       ///< min ||u||_alpha / sqrt(2 c_batch); must be >= 1 - 1e-8
  double max_lipschitz_ratio = 0.0;  ///< max ||m^-1 u - m^-1 v||_alpha / (sqrt(2/c) ||u - v||_alpha); must be <= 1
  bool norm_bound_holds = false;
  bool lipschitz_holds = false;
};

BatchCertificate certify_batch(const Model& m, const std::vector<Field>& solutions);

}  // namespace fraclat

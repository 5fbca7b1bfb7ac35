#pragma once

#include "varlat/scalarized_solver.hpp"
#include "varlat/upper_set.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace varlat {

struct InfimizerOptions {
    SolveOptions solve;
    /// Store the image infimum in G (closed convex hull) or F (union).
    bool convexified = true;
};

struct SolveFailure {
    Vector zeta;
    std::string message;
};

/**
 * Candidate infimizer M = {y_zeta : zeta in base}: one solve per base
 * sample, plus the lattice infimum of the images J(y_zeta). Immutable once
 * built. Entries are in base order; samples whose solve threw are listed in
 * `failures` instead.
 */
struct InfimizerSet {
    Lagrangian L;
    Cone cone;
    Boundary boundary;
    DualBase base;
    std::vector<SolveReport> entries;
    std::vector<SolveFailure> failures;
    UpperSet image_inf;

    /// Entry whose zeta is a positive multiple of `zeta`, or nullptr.
    const SolveReport* find(const Vector& zeta) const;
    bool all_converged() const;
};

InfimizerSet build_infimizer(const Lagrangian& L, const Cone& cone, const Boundary& boundary, const DualBase& base,
                             const InfimizerOptions& options = {});

/// Assemble an infimizer from already solved entries (e.g. constrained solves).
InfimizerSet assemble_infimizer(const Lagrangian& L, const Cone& cone, const Boundary& boundary, DualBase base,
                                std::vector<SolveReport> entries, std::vector<SolveFailure> failures,
                                bool convexified = true);

/// phi_{zeta,M}(v) = min over entries of J_zeta(y + v).
double phi(const InfimizerSet& M, const Vector& zeta, const Perturbation& v);

struct DirectionalDerivative {
    double integral = 0.0;          // weak Euler-Lagrange pairing at y_zeta
    double finite_difference = 0.0; // central difference of s -> phi(M, zeta, s v) at 0
    const SolveReport* entry = nullptr;
};

/// Requires an entry for `zeta` (up to positive scaling).
DirectionalDerivative phi_directional_derivative(const InfimizerSet& M, const Vector& zeta, const Perturbation& v,
                                                 double step = 1e-5);

/// S_(phi'(0)(v), zeta): the half-space {z : zeta . z >= phi'(0)(v)}.
UpperSet set_derivative(const InfimizerSet& M, const Vector& zeta, const Perturbation& v);

/// The inf-translation y -> inf_{v in M} J(v + y) for zero-endpoint y, with
/// a cache of phi values at the origin.
class InfTranslation {
public:
    explicit InfTranslation(const InfimizerSet& M) : M_(M) {}

    const InfimizerSet& infimizer() const { return M_; }
    UpperSet value(const Perturbation& y) const;
    double phi(const Vector& zeta, const Perturbation& v) const { return varlat::phi(M_, zeta, v); }
    double phi_at_zero(const Vector& zeta) const;

private:
    const InfimizerSet& M_;
    mutable std::mutex mutex_;
    mutable std::map<std::vector<double>, double> cache_;
};

struct TrialResult {
    Vector J;
    bool member = false;
    Separation witness; // most violated direction when not a member
};

struct CertificationReport {
    std::vector<TrialResult> trials;
    int failures = 0;
    bool passed = false;
    std::string note;
};

/**
 * Checks J(y0) in image_inf for each trial arc, with tolerance
 * tol (1 + |J(y0)|_inf). Failing trials carry the separating zeta.
 */
CertificationReport certify_infimizer(const InfimizerSet& M, const std::vector<Arc>& trials, double tol = 1e-6);

/// Straight line plus random zero-endpoint sine bumps (modes 1..4).
std::vector<Arc> random_trial_arcs(const Boundary& boundary, int interior, int count, std::uint64_t seed,
                                   double amplitude = 0.5);

/// Zero-endpoint random perturbation built from sine modes, unit max-norm.
Perturbation random_perturbation(const Grid& grid, int state_dim, std::mt19937_64& rng, int modes = 6);

} // namespace varlat

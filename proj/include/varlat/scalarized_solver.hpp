#pragma once

#include "varlat/arc.hpp"
#include "varlat/cone.hpp"
#include "varlat/lagrangian.hpp"
#include "varlat/quasi_newton.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace varlat {

struct SolveOptions {
    int nodes = 200; // interior nodes N
    double gtol = 1e-8;
    double rtol = 1e-6; // on the weak Euler-Lagrange residual over the hat basis
    int max_iterations = 5000;
    int memory = 12;
    /// Pairs of points sampled to test convexity of L_zeta; 0 disables.
    int convexity_samples = 200;
    std::uint64_t seed = 0;
    /// Warm start; must live on the same grid. Straight line when absent.
    std::optional<Arc> initial;
};

struct SolveReport {
    Vector zeta;
    Arc arc;
    Vector J_value;
    double scalar_value = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    double max_weak_residual = 0.0;
    /// Converged and L_zeta passed the sampled convexity test.
    bool global = false;
    std::string status;
};

/**
 * Minimize the discrete J_zeta over arcs with the given boundary values.
 * A run that hits the iteration cap returns its best iterate with
 * `converged == false`. Non-finite objective values raise `Error`.
 */
SolveReport solve_zeta(const Lagrangian& L, const Vector& zeta, const Boundary& boundary,
                       const SolveOptions& options = {});

struct CoercivityOptions {
    double p_max = 64.0;
    int p_levels = 13;         // geometric levels 2^k, k = 0..p_levels-1 (plus |p| = 0)
    double y_box = 4.0;        // |y_i| <= y_box, re-tested at 2 y_box
    double exponent = 2.0;     // q
    std::uint64_t seed = 0;
};

struct CoercivityEntry {
    Vector zeta;
    double alpha = 0.0;
    double beta = 0.0;
    double q_fit = 0.0; // log2 growth of min L_zeta between the two largest levels (NaN if not positive)
    bool beta_bounded = false;
    bool coercive = false;
};

struct CoercivityReport {
    std::vector<CoercivityEntry> entries;
    /// min alpha over the base (0 if some zeta fails).
    double worst_margin = 0.0;
    bool all_coercive = false;
    std::string note;
};

/**
 * Empirical fit of L_zeta(t, y, p) >= alpha |p|^q - beta for each base
 * sample. alpha is the smallest ratio min L_zeta / |p|^q over the upper half
 * of the |p| levels (zero when the ratio still decays there); beta is the
 * largest deficit. beta must not grow when the y box is doubled.
 * Purely diagnostic.
 */
CoercivityReport check_coercivity(const Lagrangian& L, const DualBase& base, double a, double b,
                                  int sample_budget = 64, const CoercivityOptions& options = {});

struct ConvexityReport {
    int samples = 0;
    int violations = 0;
    double worst_distance = 0.0; // distance of the worst defect to the cone
    Vector worst_defect;
    /// Samples with distinct points but a zero defect vector.
    int nonstrict = 0;
    bool convex = true;
};

/**
 * Samples pairs (y, p), (y', p') and a weight s in (0, 1) and checks that
 * s L(x) + (1 - s) L(x') - L(s x + (1 - s) x') lies in the cone.
 */
ConvexityReport check_convexity(const Lagrangian& L, const Cone& cone, double a, double b, int sample_budget = 500,
                                std::uint64_t seed = 0, double box = 5.0);

} // namespace varlat

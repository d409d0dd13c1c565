#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace factaudit::sim {

// Finite discrete stand-in for the intractable continuous setting: an
// oracle distribution p over N knowledge points and a nonnegative
// limitation function f, so every expectation is exactly computable.
struct SyntheticSpace {
    std::size_t size = 0;
    std::vector<double> p; // sums to 1 within 1e-12, all >= 0
    std::vector<double> f; // all >= 0
    std::uint64_t seed = 0;

    static SyntheticSpace make(std::vector<double> p, std::vector<double> f,
                               std::uint64_t seed);
};

struct Proposal {
    std::vector<double> q; // sums to 1 within 1e-12

    static Proposal make(std::vector<double> q);
};

// Random space with p and f drawn from seeded uniforms.
SyntheticSpace random_space(std::size_t size, std::uint64_t seed);

// q with the same mass vector as p (round-0 proposal).
Proposal proposal_from_p(const SyntheticSpace& space);

// Zero-variance proposal q proportional to p*f. Requires p*f not
// identically zero.
Proposal optimal_proposal(const SyntheticSpace& space);

struct EstimateResult {
    double estimate = 0.0;
    double variance = 0.0; // unbiased sample variance of the per-draw values
    std::vector<std::pair<std::size_t, double>> observations; // (index, per-draw value)
};

// Brute-force oracle: sum of p[i]*f[i] over the whole space.
double exact_expectation(const SyntheticSpace& space);

// Plain Monte Carlo: draw from p, average f. samples >= 2.
EstimateResult mc_estimate(const SyntheticSpace& space, std::size_t samples);
EstimateResult mc_estimate(const SyntheticSpace& space, std::size_t samples,
                           std::mt19937_64& rng);

// Importance sampling: draw from q, average f*p/q. Throws
// AbsoluteContinuityViolation when q is zero on a support point of p*f.
EstimateResult is_estimate(const SyntheticSpace& space, const Proposal& proposal,
                           std::size_t samples);
EstimateResult is_estimate(const SyntheticSpace& space, const Proposal& proposal,
                           std::size_t samples, std::mt19937_64& rng);

// q' = normalize((1-lambda)*q + lambda * empirical weighted mass).
// Keeps the support of q, so absolute continuity is preserved for
// lambda < 1.
Proposal refine_proposal(const SyntheticSpace& space, const Proposal& proposal,
                         const std::vector<std::pair<std::size_t, double>>& observed,
                         double lambda = 0.5);

// Exact objective mass under a proposal: sum of q[i]*f[i]*p[i].
double objective_mass(const SyntheticSpace& space, const Proposal& proposal);

double proposal_entropy(const Proposal& proposal); // -sum q ln q

// Standard error of the unbiased sample-variance estimator, from the
// empirical fourth central moment of the per-draw values.
double variance_standard_error(const std::vector<std::pair<std::size_t, double>>& observations);

// Full-space check of the importance-weight bound E_q[f*p/q] <= E_q[f].
// premise_mass is the q-mass of the region where p <= q; the bound is
// guaranteed only when sampling stays in that region.
struct Eq3Check {
    double lhs = 0.0; // E_q[f*p/q] == exact expectation
    double rhs = 0.0; // E_q[f]
    bool holds = false;
    double premise_mass = 0.0;
};
Eq3Check eq3_check(const SyntheticSpace& space, const Proposal& proposal);

// One simulator experiment: round 0 uses q = p, later rounds refine the
// proposal from the previous round's observations.
struct SimulationRow {
    int round = 0;
    std::size_t samples = 0;
    double estimate = 0.0;
    double exact = 0.0;
    double abs_error = 0.0;
    double variance = 0.0;
    double proposal_entropy = 0.0;
};

struct SimulationParams {
    std::size_t space_size = 1000;
    std::size_t samples = 10000;
    int rounds = 5;
    double lambda = 0.5;
    std::uint64_t seed = 0;
};

std::vector<SimulationRow> run_simulation(const SimulationParams& params);

// CSV with columns round, samples, estimate, exact, abs_error, variance,
// proposal_entropy.
std::string simulation_csv(const std::vector<SimulationRow>& rows);

} // namespace factaudit::sim

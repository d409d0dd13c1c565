#include "factaudit/sampling.hpp"

#include "factaudit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace factaudit::sim {

namespace {

constexpr double kSumTolerance = 1e-12;

// Uniform in [0,1) with 53 random bits; keeps the draw stream pinned to
// the mt19937_64 output instead of the library's distribution internals.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> cumulative(const std::vector<double>& weights) {
    std::vector<double> cdf(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0; // guard against rounding at the top
    return cdf;
}

std::size_t draw_index(const std::vector<double>& cdf, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::size_t>(std::distance(cdf.begin(), it));
}

void check_distribution(const std::vector<double>& weights, const char* what) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) fail(ErrorCode::ConfigError, std::string(what) + " has a negative entry");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        fail(ErrorCode::ConfigError, std::string(what) + " does not sum to 1");
}

EstimateResult summarize(std::vector<std::pair<std::size_t, double>> observations) {
    EstimateResult result;
    const std::size_t n = observations.size();
    double sum = 0.0;
    for (const auto& [index, value] : observations) sum += value;
    result.estimate = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& [index, value] : observations) {
        const double d = value - result.estimate;
        ss += d * d;
    }
    result.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    result.observations = std::move(observations);
    return result;
}

} // namespace

SyntheticSpace SyntheticSpace::make(std::vector<double> p, std::vector<double> f,
                                    std::uint64_t seed) {
    if (p.size() != f.size() || p.empty())
        fail(ErrorCode::ConfigError, "space needs matching nonempty p and f");
    check_distribution(p, "p");
    for (double value : f)
        if (value < 0.0) fail(ErrorCode::ConfigError, "f has a negative entry");
    SyntheticSpace space;
    space.size = p.size();
    space.p = std::move(p);
    space.f = std::move(f);
    space.seed = seed;
    return space;
}

Proposal Proposal::make(std::vector<double> q) {
    check_distribution(q, "q");
    return Proposal{std::move(q)};
}

SyntheticSpace random_space(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> p(size);
    std::vector<double> f(size);
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        p[i] = uniform01(rng) + 1e-6; // keep full support
        sum += p[i];
    }
    for (double& value : p) value /= sum;
    for (std::size_t i = 0; i < size; ++i) f[i] = uniform01(rng);
    return SyntheticSpace::make(std::move(p), std::move(f), seed);
}

Proposal proposal_from_p(const SyntheticSpace& space) {
    return Proposal::make(space.p);
}

Proposal optimal_proposal(const SyntheticSpace& space) {
    const double mass = exact_expectation(space);
    if (mass <= 0.0)
        fail(ErrorCode::ConfigError, "optimal proposal undefined when p*f is identically zero");
    std::vector<double> q(space.size);
    for (std::size_t i = 0; i < space.size; ++i) q[i] = space.p[i] * space.f[i] / mass;
    return Proposal{std::move(q)}; // sums to 1 up to rounding by construction
}

double exact_expectation(const SyntheticSpace& space) {
    double sum = 0.0;
    for (std::size_t i = 0; i < space.size; ++i) sum += space.p[i] * space.f[i];
    return sum;
}

EstimateResult mc_estimate(const SyntheticSpace& space, std::size_t samples,
                           std::mt19937_64& rng) {
    if (samples < 2) fail(ErrorCode::ConfigError, "mc_estimate needs at least 2 samples");
    const std::vector<double> cdf = cumulative(space.p);
    std::vector<std::pair<std::size_t, double>> observations;
    observations.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t i = draw_index(cdf, rng);
        observations.emplace_back(i, space.f[i]);
    }
    return summarize(std::move(observations));
}

EstimateResult mc_estimate(const SyntheticSpace& space, std::size_t samples) {
    std::mt19937_64 rng(space.seed);
    return mc_estimate(space, samples, rng);
}

EstimateResult is_estimate(const SyntheticSpace& space, const Proposal& proposal,
                           std::size_t samples, std::mt19937_64& rng) {
    if (samples < 2) fail(ErrorCode::ConfigError, "is_estimate needs at least 2 samples");
    if (proposal.q.size() != space.size)
        fail(ErrorCode::ConfigError, "proposal size does not match space");
    for (std::size_t i = 0; i < space.size; ++i) {
        if (proposal.q[i] <= 0.0 && space.p[i] * space.f[i] > 0.0)
            fail(ErrorCode::AbsoluteContinuityViolation,
                 "q is zero at support point " + std::to_string(i));
    }
    const std::vector<double> cdf = cumulative(proposal.q);
    std::vector<std::pair<std::size_t, double>> observations;
    observations.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t i = draw_index(cdf, rng);
        const double weight = space.p[i] / proposal.q[i];
        observations.emplace_back(i, space.f[i] * weight);
    }
    return summarize(std::move(observations));
}

EstimateResult is_estimate(const SyntheticSpace& space, const Proposal& proposal,
                           std::size_t samples) {
    std::mt19937_64 rng(space.seed);
    return is_estimate(space, proposal, samples, rng);
}

Proposal refine_proposal(const SyntheticSpace& space, const Proposal& proposal,
                         const std::vector<std::pair<std::size_t, double>>& observed,
                         double lambda) {
    if (observed.empty()) fail(ErrorCode::ConfigError, "refine_proposal needs observations");
    if (lambda < 0.0 || lambda > 1.0) fail(ErrorCode::ConfigError, "lambda outside [0,1]");
    if (lambda == 0.0) return proposal;
    std::vector<double> empirical(space.size, 0.0);
    double total = 0.0;
    for (const auto& [index, value] : observed) {
        empirical[index] += value;
        total += value;
    }
    if (total <= 0.0) return proposal; // no weighted mass observed, keep q
    std::vector<double> q(space.size);
    for (std::size_t i = 0; i < space.size; ++i)
        q[i] = (1.0 - lambda) * proposal.q[i] + lambda * empirical[i] / total;
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& value : q) value /= sum;
    return Proposal::make(std::move(q));
}

double objective_mass(const SyntheticSpace& space, const Proposal& proposal) {
    double sum = 0.0;
    for (std::size_t i = 0; i < space.size; ++i)
        sum += proposal.q[i] * space.f[i] * space.p[i];
    return sum;
}

double proposal_entropy(const Proposal& proposal) {
    double h = 0.0;
    for (double q : proposal.q)
        if (q > 0.0) h -= q * std::log(q);
    return h;
}

double variance_standard_error(
    const std::vector<std::pair<std::size_t, double>>& observations) {
    const std::size_t n = observations.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (const auto& [index, value] : observations) mean += value;
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (const auto& [index, value] : observations) {
        const double d = value - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const double nd = static_cast<double>(n);
    // Var(s^2) ~ (m4 - (n-3)/(n-1) * m2^2) / n
    const double var_of_var = (m4 - (nd - 3.0) / (nd - 1.0) * m2 * m2) / nd;
    return var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
}

Eq3Check eq3_check(const SyntheticSpace& space, const Proposal& proposal) {
    Eq3Check check;
    check.lhs = exact_expectation(space); // E_q[f*p/q] telescopes to E_p[f]
    double rhs = 0.0;
    double premise = 0.0;
    for (std::size_t i = 0; i < space.size; ++i) {
        rhs += proposal.q[i] * space.f[i];
        if (space.p[i] <= proposal.q[i]) premise += proposal.q[i];
    }
    check.rhs = rhs;
    check.holds = check.lhs <= check.rhs;
    check.premise_mass = premise;
    return check;
}

std::vector<SimulationRow> run_simulation(const SimulationParams& params) {
    const SyntheticSpace space = random_space(params.space_size, params.seed);
    const double exact = exact_expectation(space);
    std::mt19937_64 rng(params.seed);

    std::vector<SimulationRow> rows;
    Proposal proposal = proposal_from_p(space);
    for (int round = 0; round < params.rounds; ++round) {
        const EstimateResult result = is_estimate(space, proposal, params.samples, rng);
        SimulationRow row;
        row.round = round;
        row.samples = params.samples;
        row.estimate = result.estimate;
        row.exact = exact;
        row.abs_error = std::abs(result.estimate - exact);
        row.variance = result.variance;
        row.proposal_entropy = proposal_entropy(proposal);
        rows.push_back(row);
        proposal = refine_proposal(space, proposal, result.observations, params.lambda);
    }
    return rows;
}

std::string simulation_csv(const std::vector<SimulationRow>& rows) {
    std::ostringstream out;
    out << "round,samples,estimate,exact,abs_error,variance,proposal_entropy\n";
    for (const auto& row : rows) {
        out << row.round << ',' << row.samples << ',' << nlohmann::json(row.estimate).dump()
            << ',' << nlohmann::json(row.exact).dump() << ','
            << nlohmann::json(row.abs_error).dump() << ','
            << nlohmann::json(row.variance).dump() << ','
            << nlohmann::json(row.proposal_entropy).dump() << '\n';
    }
    return out.str();
}

} // namespace factaudit::sim

#pragma once

#include "ocl/events.hpp"
#include "ocl/knowledge.hpp"
#include "ocl/params.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace ocl::oracle {

/// "Agent `agent` held `value` at `time`."
struct ValueFact {
    double time;
    std::uint32_t agent;
    double value;

    friend auto operator<=>(const ValueFact&, const ValueFact&) = default;
};

/// "`from` sent information to `to` at `time`."
struct ExchangeFact {
    double time;
    std::uint32_t from;
    std::uint32_t to;

    friend auto operator<=>(const ExchangeFact&, const ExchangeFact&) = default;
};

struct KnowledgeSet {
    std::set<ValueFact> values;
    std::set<ExchangeFact> exchanges;
};

/// Literal set-union knowledge sets, kept for cross-checking the
/// latest-info tables on tiny systems. Memory grows with every exchange.
class FullKnowledgeSystem {
public:
    FullKnowledgeSystem(std::vector<double> initial_values, Model model);

    /// `new_value` is only read for replacements.
    void apply(const Event& ev, double new_value);

    /// Newest fact about j in agent i's set, as a table record.
    std::optional<InfoRecord> latest(std::size_t i, std::size_t j) const;

    const KnowledgeSet& set_of(std::size_t i) const { return sets_[i]; }

private:
    void receive(std::size_t to, std::size_t from, double t, const KnowledgeSet& from_set);

    Model model_;
    std::vector<double> values_;
    std::vector<KnowledgeSet> sets_;
};

struct SufficiencyReport {
    std::size_t streams = 0;
    std::size_t comparisons = 0;
    std::size_t mismatches = 0;
};

/// Replays `streams` random streams (N in [2, max_agents], at most
/// `max_events` events, both models) through the tables and the full sets and
/// compares the newest record for every ordered pair after every event.
SufficiencyReport check_knowledge_sufficiency(std::uint64_t seed, std::size_t streams,
                                              std::size_t max_agents = 4,
                                              std::size_t max_events = 30);

struct MixedRvReport {
    double p = 0.0;
    double sigma2 = 1.0;
    std::size_t draws = 0;
    double mse_optimal = 0.0;
    double stderr_optimal = 0.0;
    /// Competitors Z, 0, (p+0.1)Z, (p-0.1)Z in that order.
    std::vector<double> mse_competitors;
};

/// Monte Carlo of X = Z w.p. p else Y (Y, Z i.i.d. gaussian) scoring pZ
/// against the competitor estimators on common draws.
MixedRvReport check_mixed_rv(double p, double sigma2, std::size_t draws, std::uint64_t seed);

}  // namespace ocl::oracle

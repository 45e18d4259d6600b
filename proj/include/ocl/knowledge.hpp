#pragma once

#include "ocl/events.hpp"
#include "ocl/params.hpp"
#include "ocl/rng.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ocl {

/// A past value of a peer and the time at which it held it.
struct InfoRecord {
    double value = 0.0;
    double timestamp = 0.0;

    friend bool operator==(const InfoRecord&, const InfoRecord&) = default;
};

/// Most recent information an agent can hold about each peer.
///
/// This is the sufficient statistic of the full knowledge set for estimating
/// current values: the replacement probability of a peer depends only on the
/// age of the newest record, and newcomers' values are independent of
/// everything recorded before their arrival.
struct LatestInfoTable {
    std::size_t owner = 0;
    double own_value = 0.0;
    /// peers[owner] stays empty; the owner's own value is always current.
    std::vector<std::optional<InfoRecord>> peers;
};

/// Values and latest-info tables of all N agents of one realization.
struct AgentState {
    std::vector<double> values;
    std::vector<LatestInfoTable> tables;
    double time = 0.0;

    AgentState() = default;
    /// Agents that only know themselves, at time 0.
    explicit AgentState(std::vector<double> initial_values);

    std::size_t size() const { return values.size(); }
};

/// Draws N initial values from the params' distribution.
AgentState initial_state(const SystemParams& params, Rng& value_rng);

/// Pairwise exchange: each side records the other's current value at t and
/// keeps the newer record about every third agent.
void apply_pair_interaction(AgentState& state, std::size_t a, std::size_t b, double t);

/// Ping update of agent i: a fresh snapshot of every other agent's value.
void apply_ping(AgentState& state, std::size_t i, double t);

/// Replacement of agent i by a newcomer holding `new_value`. Under the
/// Gossip model the newcomer starts with an empty memory; under the Ping
/// model it inherits the predecessor's table. Other tables are untouched.
void replace_agent(AgentState& state, std::size_t i, double t, Model model, double new_value);

/// replace_agent with the new value drawn from params' distribution.
void apply_replacement(AgentState& state, std::size_t i, double t, Model model,
                       const SystemParams& params, Rng& value_rng);

/// Dispatches one event. Replacement values come from value_rng.
void apply_event(AgentState& state, const Event& ev, Model model, const SystemParams& params,
                 Rng& value_rng);

/// Age of the newest record about j held by i at time t; 0 for j == i,
/// nullopt if i knows nothing about j.
std::optional<double> age_of(const AgentState& state, std::size_t i, std::size_t j, double t);

}  // namespace ocl

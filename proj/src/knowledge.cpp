#include "ocl/knowledge.hpp"

#include "ocl/values.hpp"

#include <cassert>
#include <utility>

namespace ocl {

AgentState::AgentState(std::vector<double> initial_values) : values(std::move(initial_values)) {
    const std::size_t n = values.size();
    tables.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tables[i].owner = i;
        tables[i].own_value = values[i];
        tables[i].peers.assign(n, std::nullopt);
    }
}

AgentState initial_state(const SystemParams& params, Rng& value_rng) {
    std::vector<double> v(params.n_agents);
    for (auto& x : v) x = sample_value(params, value_rng);
    return AgentState(std::move(v));
}

namespace {

void keep_newer(std::optional<InfoRecord>& mine, const std::optional<InfoRecord>& theirs) {
    if (theirs && (!mine || theirs->timestamp > mine->timestamp)) mine = theirs;
}

}  // namespace

void apply_pair_interaction(AgentState& state, std::size_t a, std::size_t b, double t) {
    assert(a != b && t >= state.time);
    auto& ta = state.tables[a].peers;
    auto& tb = state.tables[b].peers;
    const std::size_t n = state.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == a || k == b) continue;
        keep_newer(ta[k], tb[k]);
        tb[k] = ta[k];
    }
    ta[b] = InfoRecord{state.values[b], t};
    tb[a] = InfoRecord{state.values[a], t};
    state.time = t;
}

void apply_ping(AgentState& state, std::size_t i, double t) {
    assert(t >= state.time);
    auto& peers = state.tables[i].peers;
    for (std::size_t j = 0; j < state.size(); ++j)
        if (j != i) peers[j] = InfoRecord{state.values[j], t};
    state.time = t;
}

void replace_agent(AgentState& state, std::size_t i, double t, Model model, double new_value) {
    assert(t >= state.time);
    state.values[i] = new_value;
    auto& table = state.tables[i];
    table.own_value = new_value;
    if (model == Model::gossip)
        for (auto& rec : table.peers) rec.reset();
    state.time = t;
}

void apply_replacement(AgentState& state, std::size_t i, double t, Model model,
                       const SystemParams& params, Rng& value_rng) {
    replace_agent(state, i, t, model, sample_value(params, value_rng));
}

void apply_event(AgentState& state, const Event& ev, Model model, const SystemParams& params,
                 Rng& value_rng) {
    switch (ev.kind) {
        case EventKind::replacement:
            apply_replacement(state, ev.a, ev.time, model, params, value_rng);
            break;
        case EventKind::pair_interaction:
            apply_pair_interaction(state, ev.a, ev.b, ev.time);
            break;
        case EventKind::ping:
            apply_ping(state, ev.a, ev.time);
            break;
    }
}

std::optional<double> age_of(const AgentState& state, std::size_t i, std::size_t j, double t) {
    if (i == j) return 0.0;
    const auto& rec = state.tables[i].peers[j];
    if (!rec) return std::nullopt;
    return t - rec->timestamp;
}

}  // namespace ocl

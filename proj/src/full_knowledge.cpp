#include "ocl/full_knowledge.hpp"

#include "ocl/estimators.hpp"
#include "ocl/rng.hpp"

#include <cmath>

namespace ocl::oracle {

FullKnowledgeSystem::FullKnowledgeSystem(std::vector<double> initial_values, Model model)
    : model_(model), values_(std::move(initial_values)), sets_(values_.size()) {
    for (std::size_t i = 0; i < values_.size(); ++i)
        sets_[i].values.insert({0.0, static_cast<std::uint32_t>(i), values_[i]});
}

void FullKnowledgeSystem::receive(std::size_t to, std::size_t from, double t,
                                  const KnowledgeSet& from_set) {
    auto& mine = sets_[to];
    mine.values.insert(from_set.values.begin(), from_set.values.end());
    mine.exchanges.insert(from_set.exchanges.begin(), from_set.exchanges.end());
    mine.values.insert({t, static_cast<std::uint32_t>(from), values_[from]});
    mine.exchanges.insert({t, static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to)});
}

void FullKnowledgeSystem::apply(const Event& ev, double new_value) {
    switch (ev.kind) {
        case EventKind::replacement: {
            values_[ev.a] = new_value;
            const ValueFact arrival{ev.time, ev.a, new_value};
            if (model_ == Model::gossip) sets_[ev.a] = KnowledgeSet{};
            sets_[ev.a].values.insert(arrival);
            break;
        }
        case EventKind::pair_interaction: {
            // Both directions use the sets held just before the exchange.
            const KnowledgeSet before_a = sets_[ev.a];
            const KnowledgeSet before_b = sets_[ev.b];
            receive(ev.a, ev.b, ev.time, before_b);
            receive(ev.b, ev.a, ev.time, before_a);
            break;
        }
        case EventKind::ping: {
            const std::vector<KnowledgeSet> before = sets_;
            for (std::size_t j = 0; j < sets_.size(); ++j)
                if (j != ev.a) receive(ev.a, j, ev.time, before[j]);
            break;
        }
    }
}

std::optional<InfoRecord> FullKnowledgeSystem::latest(std::size_t i, std::size_t j) const {
    std::optional<InfoRecord> best;
    for (const auto& f : sets_[i].values)
        if (f.agent == j && (!best || f.time > best->timestamp)) best = InfoRecord{f.value, f.time};
    return best;
}

SufficiencyReport check_knowledge_sufficiency(std::uint64_t seed, std::size_t streams,
                                              std::size_t max_agents, std::size_t max_events) {
    SufficiencyReport report;
    Rng meta(RngHandle{seed, 0}, Substream::auxiliary);
    for (std::size_t s = 0; s < streams; ++s) {
        SystemParams params;
        params.n_agents = 2 + meta.index(max_agents - 1);
        params.lambda_r = 0.2 + 1.8 * meta.uniform();
        params.comm_rate = 5.0 * meta.uniform();
        const Model model = meta.uniform() < 0.5 ? Model::gossip : Model::ping;
        const std::size_t events = meta.index(max_events + 1);
        const RngHandle handle{seed, s + 1};

        Rng values(handle, Substream::values);
        AgentState tables = initial_state(params, values);
        FullKnowledgeSystem full(tables.values, model);
        EventStream stream(params, StreamSpec{model, EventCount{events}}, handle);
        auto compare = [&] {
            for (std::size_t i = 0; i < params.n_agents; ++i)
                for (std::size_t j = 0; j < params.n_agents; ++j) {
                    if (i == j) continue;
                    ++report.comparisons;
                    if (tables.tables[i].peers[j] != full.latest(i, j)) ++report.mismatches;
                }
        };
        compare();
        while (auto ev = stream.next()) {
            double fresh = 0.0;
            if (ev->kind == EventKind::replacement) {
                fresh = values.normal();
                replace_agent(tables, ev->a, ev->time, model, fresh);
            } else {
                apply_event(tables, *ev, model, params, values);
            }
            full.apply(*ev, fresh);
            compare();
        }
        ++report.streams;
    }
    return report;
}

MixedRvReport check_mixed_rv(double p, double sigma2, std::size_t draws, std::uint64_t seed) {
    MixedRvReport rep{p, sigma2, draws, 0.0, 0.0, {}};
    Rng rng(RngHandle{seed, 0}, Substream::auxiliary);
    const double sd = std::sqrt(sigma2);
    const double alternatives[] = {1.0, 0.0, p + 0.1, p - 0.1};
    std::vector<double> sums(4, 0.0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
        const double z = sd * rng.normal();
        const double y = sd * rng.normal();
        const double x = rng.uniform() < p ? z : y;
        const double err = x - mixed_rv_estimate(p, z);
        sum += err * err;
        sumsq += err * err * err * err;
        for (std::size_t a = 0; a < 4; ++a) {
            const double e = x - alternatives[a] * z;
            sums[a] += e * e;
        }
    }
    const auto n = static_cast<double>(draws);
    rep.mse_optimal = sum / n;
    rep.stderr_optimal = std::sqrt(std::max(0.0, sumsq / n - rep.mse_optimal * rep.mse_optimal) / n);
    for (double s : sums) rep.mse_competitors.push_back(s / n);
    return rep;
}

}  // namespace ocl::oracle

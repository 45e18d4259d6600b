#include "ocl/events.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ocl {

double total_rate(const SystemParams& params, Model model) {
    const auto n = static_cast<double>(params.n_agents);
    const double replacements = n * params.lambda_r;
    // Gossip: N(N-1)/2 pairs, each at comm_rate/(N-1).
    const double exchanges =
        model == Model::gossip ? n * params.comm_rate / 2.0 : n * params.comm_rate;
    return replacements + exchanges;
}

double per_agent_interaction_rate(const SystemParams& params, Model) {
    return params.comm_rate;
}

EventStream::EventStream(const SystemParams& params, StreamSpec spec, RngHandle handle)
    : params_(params),
      spec_(spec),
      rng_(handle, Substream::events),
      rate_(total_rate(params, spec.model)),
      replacement_share_(static_cast<double>(params.n_agents) * params.lambda_r / rate_) {
    require_valid(params);
    if (const auto* h = std::get_if<Horizon>(&spec_.stop); h && !(h->time > 0.0))
        throw std::invalid_argument("stream horizon must be positive");
}

std::optional<Event> EventStream::next() {
    if (done_) return std::nullopt;
    if (const auto* c = std::get_if<EventCount>(&spec_.stop); c && emitted_ >= c->events) {
        done_ = true;
        return std::nullopt;
    }
    now_ += rng_.exponential(rate_);
    if (const auto* h = std::get_if<Horizon>(&spec_.stop); h && now_ > h->time) {
        done_ = true;
        return std::nullopt;
    }
    const std::size_t n = params_.n_agents;
    Event ev;
    if (rng_.uniform() < replacement_share_) {
        ev = Event::replacement(now_, static_cast<std::uint32_t>(rng_.index(n)));
    } else if (spec_.model == Model::ping) {
        ev = Event::ping(now_, static_cast<std::uint32_t>(rng_.index(n)));
    } else {
        const auto i = rng_.index(n);
        auto j = rng_.index(n - 1);
        if (j >= i) ++j;
        ev = Event::pair(now_, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
    ++emitted_;
    return ev;
}

std::vector<Event> generate_stream(const SystemParams& params, const StreamSpec& spec,
                                   RngHandle handle) {
    EventStream stream(params, spec, handle);
    std::vector<Event> out;
    if (const auto* c = std::get_if<EventCount>(&spec.stop)) out.reserve(c->events);
    while (auto ev = stream.next()) out.push_back(*ev);
    return out;
}

namespace {

std::string_view kind_name(EventKind k) {
    switch (k) {
        case EventKind::replacement: return "replacement";
        case EventKind::pair_interaction: return "pair";
        case EventKind::ping: return "ping";
    }
    return "?";
}

EventKind parse_kind(const std::string& s) {
    if (s == "replacement") return EventKind::replacement;
    if (s == "pair") return EventKind::pair_interaction;
    if (s == "ping") return EventKind::ping;
    throw std::runtime_error("unknown event kind '" + s + "'");
}

}  // namespace

void write_events_csv(std::ostream& os, const std::vector<Event>& events) {
    os << "time,kind,a,b\n";
    for (const auto& e : events) {
        os << fmt::format("{:.17g},{},{},", e.time, kind_name(e.kind), e.a);
        if (e.kind == EventKind::pair_interaction) os << e.b;
        os << '\n';
    }
}

std::vector<Event> read_events_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "time,kind,a,b")
        throw std::runtime_error("event CSV: bad header");
    std::vector<Event> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string time, kind, a, b;
        std::getline(ss, time, ',');
        std::getline(ss, kind, ',');
        std::getline(ss, a, ',');
        std::getline(ss, b);
        Event ev{std::stod(time), parse_kind(kind), static_cast<std::uint32_t>(std::stoul(a)),
                 Event::no_agent};
        if (ev.kind == EventKind::pair_interaction)
            ev.b = static_cast<std::uint32_t>(std::stoul(b));
        out.push_back(ev);
    }
    return out;
}

}  // namespace ocl

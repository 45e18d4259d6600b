#pragma once

#include "ocl/params.hpp"
#include "ocl/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace ocl {

enum class EventKind : std::uint8_t { replacement, pair_interaction, ping };

/// One timestamped event of a realization.
///
/// `b` is only meaningful for pair interactions, where a < b.
struct Event {
    static constexpr std::uint32_t no_agent = std::numeric_limits<std::uint32_t>::max();

    double time = 0.0;
    EventKind kind = EventKind::replacement;
    std::uint32_t a = 0;
    std::uint32_t b = no_agent;

    static Event replacement(double t, std::uint32_t agent) {
        return {t, EventKind::replacement, agent, no_agent};
    }
    static Event pair(double t, std::uint32_t i, std::uint32_t j) {
        return i < j ? Event{t, EventKind::pair_interaction, i, j}
                     : Event{t, EventKind::pair_interaction, j, i};
    }
    static Event ping(double t, std::uint32_t agent) {
        return {t, EventKind::ping, agent, no_agent};
    }

    friend bool operator==(const Event&, const Event&) = default;
};

struct EventCount {
    std::size_t events = 0;
};
struct Horizon {
    double time = 0.0;
};
using StopCriterion = std::variant<EventCount, Horizon>;

struct StreamSpec {
    Model model = Model::gossip;
    StopCriterion stop = EventCount{0};
};

/// Aggregate rate of all Poisson clocks: N*lambda_r plus N*lambda_c/2
/// (Gossip, N(N-1)/2 pairs at lambda_c/(N-1)) or N*lambda_p (Ping).
double total_rate(const SystemParams& params, Model model);

/// Expected number of exchanges an agent takes part in per unit time.
double per_agent_interaction_rate(const SystemParams& params, Model model);

/// Lazily generated event stream.
///
/// A single exponential clock at total_rate() with categorical selection of
/// the event kind and its targets; equivalent to independent per-agent and
/// per-pair clocks by Poisson superposition. Never reads agent values.
class EventStream {
public:
    EventStream(const SystemParams& params, StreamSpec spec, RngHandle handle);

    /// Next event, or nullopt once the stop criterion is reached.
    std::optional<Event> next();

    std::size_t emitted() const { return emitted_; }
    double rate() const { return rate_; }

private:
    SystemParams params_;
    StreamSpec spec_;
    Rng rng_;
    double rate_;
    double replacement_share_;
    double now_ = 0.0;
    std::size_t emitted_ = 0;
    bool done_ = false;
};

/// Materializes a whole stream; prefer EventStream for long horizons.
std::vector<Event> generate_stream(const SystemParams& params, const StreamSpec& spec,
                                   RngHandle handle);

/// CSV dump with header `time,kind,a,b` (b empty unless pair).
void write_events_csv(std::ostream& os, const std::vector<Event>& events);
std::vector<Event> read_events_csv(std::istream& is);

}  // namespace ocl

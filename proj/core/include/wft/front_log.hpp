// front_log.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wft {

/// Append-only history of a front-tracking run.
///
/// Fronts never cross, so the live set is an ordered list that only changes
/// at events, where a contiguous run of fronts is replaced by a new fan.
/// Replaying the recorded replacements reproduces the exact order at any
/// time, which sorting by floating-point positions cannot guarantee near
/// collisions.
template <class Record>
class FrontLog {
public:
    using Id = std::uint32_t;

    struct Step {
        double t;
        Id at;         // index into the live list
        Id removed;    // number of fronts removed there
        Id first_new;  // new fronts have consecutive ids
        Id new_count;
    };

    Id add(const Record& r)
    {
        m_records.push_back(r);
        return static_cast<Id>(m_records.size() - 1);
    }

    void set_initial(std::vector<Id> ids)
    {
        m_initial = std::move(ids);
        m_current = m_initial;
    }
    void push_step(const Step& s)
    {
        m_steps.push_back(s);
        apply(m_current, s);
        if (m_steps.size() % checkpoint_every == 0)
            m_checkpoints.push_back(m_current);
    }

    const Record& operator[](Id id) const { return m_records[id]; }
    Record& operator[](Id id) { return m_records[id]; }
    std::size_t size() const { return m_records.size(); }
    const std::vector<Step>& steps() const { return m_steps; }

    /// Live front ids, left to right, after all events with time <= t.
    std::vector<Id> live_at(double t) const
    {
        // checkpoint k holds the list after the first (k + 1) * checkpoint_every steps
        std::size_t k = 0;
        while (k < m_checkpoints.size() && m_steps[(k + 1) * checkpoint_every - 1].t <= t)
            ++k;
        std::vector<Id> live = k == 0 ? m_initial : m_checkpoints[k - 1];
        for (std::size_t i = k * checkpoint_every; i < m_steps.size() && m_steps[i].t <= t; ++i)
            apply(live, m_steps[i]);
        return live;
    }

private:
    static constexpr std::size_t checkpoint_every = 64;

    static void apply(std::vector<Id>& live, const Step& s)
    {
        live.erase(live.begin() + s.at, live.begin() + s.at + s.removed);
        std::vector<Id> fresh(s.new_count);
        for (Id k = 0; k < s.new_count; ++k)
            fresh[k] = s.first_new + k;
        live.insert(live.begin() + s.at, fresh.begin(), fresh.end());
    }

    std::vector<Record> m_records;
    std::vector<Id> m_initial;
    std::vector<Id> m_current;
    std::vector<Step> m_steps;
    std::vector<std::vector<Id>> m_checkpoints;
};

/// One interaction as written to the event log.
struct FrontEvent {
    double t;
    double x;
    std::string kind;  // kinds of the incoming fronts joined by '+'
    int in_fronts;
    int out_fronts;
};

}  // namespace wft

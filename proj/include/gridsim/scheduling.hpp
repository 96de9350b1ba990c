#pragma once
// Global time, per-machine time scales and exchange schedules. A scale maps
// a machine's local move index (1-based) to the global tick of that move;
// move ticks are strictly increasing. Irrational stretches are evaluated
// exactly: floor(i * alpha) is bracketed between consecutive continued-
// fraction convergents until the floor is pinned, so no value is ever
// misrounded within a run horizon.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridsim {

enum class IrrationalConstant { Sqrt2, Golden };

struct TimeScale {
  enum class Kind { Identity, Rational, Irrational, Table };
  Kind kind = Kind::Identity;
  // Rational n:m — n local moves per m global ticks; requires 1 <= n <= m.
  uint64_t moves_n = 1;
  uint64_t per_ticks_m = 1;
  IrrationalConstant alpha = IrrationalConstant::Sqrt2;
  std::vector<uint64_t> table;  // explicit move ticks, strictly increasing

  static TimeScale identity() { return {}; }
  static TimeScale rational(uint64_t n, uint64_t m) {
    TimeScale s;
    s.kind = Kind::Rational;
    s.moves_n = n;
    s.per_ticks_m = m;
    return s;
  }
  static TimeScale irrational(IrrationalConstant a) {
    TimeScale s;
    s.kind = Kind::Irrational;
    s.alpha = a;
    return s;
  }
  static TimeScale explicit_table(std::vector<uint64_t> ticks) {
    TimeScale s;
    s.kind = Kind::Table;
    s.table = std::move(ticks);
    return s;
  }
  bool operator==(const TimeScale&) const = default;
};

// Problems with the scale itself (bad rational ratio, non-increasing table).
std::vector<std::string> validate_scale(const TimeScale& s);

// Global tick of local move i (i >= 1). Table scales throw std::out_of_range
// beyond their stored prefix; move_tick_opt returns nullopt instead.
uint64_t move_ticks(const TimeScale& s, uint64_t i);
std::optional<uint64_t> move_tick_opt(const TimeScale& s, uint64_t i);

// floor(i * alpha), exact.
uint64_t beatty_floor(IrrationalConstant alpha, uint64_t i);

// All moves with tick <= horizon across machines, sorted by tick, ties broken
// by position in `scales` (the declaration order).
std::vector<std::pair<uint64_t, size_t>> interleaving(const std::vector<TimeScale>& scales,
                                                      uint64_t horizon);

struct ExchangeSchedule {
  enum class Source { Always, Injected, SeededRandom };
  Source source = Source::Always;
  std::vector<std::string> injected;  // machine id admitted at tick t = injected[t-1]
  uint64_t seed = 0;

  static ExchangeSchedule always() { return {}; }
  static ExchangeSchedule injected_ids(std::vector<std::string> ids) {
    ExchangeSchedule s;
    s.source = Source::Injected;
    s.injected = std::move(ids);
    return s;
  }
  static ExchangeSchedule seeded(uint64_t seed) {
    ExchangeSchedule s;
    s.source = Source::SeededRandom;
    s.seed = seed;
    return s;
  }
  bool operator==(const ExchangeSchedule&) const = default;
};

// May the machine access the communication space at this tick? Pure in
// (schedule, tick, id); injected schedules deny everything beyond their
// prefix. Ticks are 1-based.
bool admits(const ExchangeSchedule& s, uint64_t tick, std::string_view machine_id);

// Deterministic 64-bit mixer shared by every seeded feature (no platform-
// dependent std distributions anywhere).
uint64_t mix64(uint64_t x);

}  // namespace gridsim

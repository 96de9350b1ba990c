#include "gridsim/scheduling.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridsim {

namespace {

struct Convergent {
  uint64_t p, q;
};

// Continued fractions: sqrt2 = [1; 2, 2, ...], golden = [1; 1, 1, ...].
// Convergents alternate below/above the constant (even index below).
const std::vector<Convergent>& convergents(IrrationalConstant a) {
  static const std::vector<Convergent> sqrt2 = [] {
    std::vector<Convergent> v{{1, 1}, {3, 2}};
    while (true) {
      const auto& c1 = v[v.size() - 1];
      const auto& c2 = v[v.size() - 2];
      if (c1.p > (uint64_t(1) << 61) / 2) break;
      v.push_back({2 * c1.p + c2.p, 2 * c1.q + c2.q});
    }
    return v;
  }();
  static const std::vector<Convergent> golden = [] {
    std::vector<Convergent> v{{1, 1}, {2, 1}};
    while (true) {
      const auto& c1 = v[v.size() - 1];
      const auto& c2 = v[v.size() - 2];
      if (c1.p > (uint64_t(1) << 62)) break;
      v.push_back({c1.p + c2.p, c1.q + c2.q});
    }
    return v;
  }();
  return a == IrrationalConstant::Sqrt2 ? sqrt2 : golden;
}

uint64_t mul_div_floor(uint64_t i, uint64_t p, uint64_t q) {
  return uint64_t((unsigned __int128)i * p / q);
}

}  // namespace

uint64_t beatty_floor(IrrationalConstant alpha, uint64_t i) {
  const auto& cv = convergents(alpha);
  // Bracket i*alpha between i*p_lo/q_lo and i*p_hi/q_hi; refine until both
  // floors agree. i*alpha is irrational, so the interval eventually clears
  // every integer and the loop terminates.
  for (size_t k = 1; k < cv.size(); ++k) {
    const Convergent& below = (k % 2 == 1) ? cv[k - 1] : cv[k];
    const Convergent& above = (k % 2 == 1) ? cv[k] : cv[k - 1];
    uint64_t lo = mul_div_floor(i, below.p, below.q);
    uint64_t hi = mul_div_floor(i, above.p, above.q);
    if (lo == hi) return lo;
  }
  throw std::out_of_range("move index too large for exact irrational evaluation");
}

std::vector<std::string> validate_scale(const TimeScale& s) {
  std::vector<std::string> problems;
  switch (s.kind) {
    case TimeScale::Kind::Identity:
    case TimeScale::Kind::Irrational:
      break;
    case TimeScale::Kind::Rational:
      if (s.moves_n == 0 || s.per_ticks_m == 0)
        problems.push_back("rational scale needs positive n and m");
      else if (s.moves_n > s.per_ticks_m)
        problems.push_back("rational scale n:m needs n <= m (at most one move per tick)");
      break;
    case TimeScale::Kind::Table:
      for (size_t i = 0; i < s.table.size(); ++i) {
        if (s.table[i] == 0) {
          problems.push_back("table ticks start at 1");
          break;
        }
        if (i > 0 && s.table[i] <= s.table[i - 1]) {
          problems.push_back("table ticks must be strictly increasing");
          break;
        }
      }
      break;
  }
  return problems;
}

std::optional<uint64_t> move_tick_opt(const TimeScale& s, uint64_t i) {
  if (i == 0) throw std::invalid_argument("move indices are 1-based");
  switch (s.kind) {
    case TimeScale::Kind::Identity:
      return i;
    case TimeScale::Kind::Rational:
      return (i * s.per_ticks_m + s.moves_n - 1) / s.moves_n;  // ceil(i*m/n)
    case TimeScale::Kind::Irrational:
      return beatty_floor(s.alpha, i);
    case TimeScale::Kind::Table:
      if (i > s.table.size()) return std::nullopt;
      return s.table[i - 1];
  }
  return std::nullopt;
}

uint64_t move_ticks(const TimeScale& s, uint64_t i) {
  auto t = move_tick_opt(s, i);
  if (!t) throw std::out_of_range("move index beyond the stored table prefix");
  return *t;
}

std::vector<std::pair<uint64_t, size_t>> interleaving(const std::vector<TimeScale>& scales,
                                                      uint64_t horizon) {
  std::vector<std::pair<uint64_t, size_t>> events;
  for (size_t m = 0; m < scales.size(); ++m) {
    for (uint64_t i = 1;; ++i) {
      auto t = move_tick_opt(scales[m], i);
      if (!t || *t > horizon) break;
      events.emplace_back(*t, m);
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return events;
}

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {
uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= uint64_t(static_cast<unsigned char>(c));
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

bool admits(const ExchangeSchedule& s, uint64_t tick, std::string_view machine_id) {
  switch (s.source) {
    case ExchangeSchedule::Source::Always:
      return true;
    case ExchangeSchedule::Source::Injected:
      if (tick == 0 || tick > s.injected.size()) return false;
      return s.injected[tick - 1] == machine_id;
    case ExchangeSchedule::Source::SeededRandom:
      return (mix64(mix64(s.seed ^ tick) ^ fnv1a(machine_id)) & 1) != 0;
  }
  return false;
}

}  // namespace gridsim

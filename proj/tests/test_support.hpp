#pragma once
// Shared test helpers: a deterministic generator independent of the library's
// mixer, an integer-square-root floor oracle, random machine specs and a
// scratch directory guard.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "gridsim/machine.hpp"

namespace testsup {

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state((seed + 0x9E3779B97F4A7C15ull) | 1) {}
  uint64_t next() {  // xorshift64*
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 0x2545F4914F6CDD1Dull;
  }
  uint64_t below(uint64_t n) { return next() % n; }
  std::string bits(size_t len) {
    std::string w;
    for (size_t i = 0; i < len; ++i) w.push_back(below(2) ? '1' : '0');
    return w;
  }
};

// Largest k with k*k <= x. Exact for the ranges used in tests.
inline uint64_t isqrt(uint64_t x) {
  uint64_t r = uint64_t(std::sqrt(double(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("gridsim_test_" + tag);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Small random machine over {_,0,1}: concrete read patterns (so determinism
// holds by unique keys), every state an output state, one final state.
inline gridsim::MachineSpec random_machine(Rng& rng) {
  using namespace gridsim;
  MachineSpec m;
  m.alphabet = {kBlank, '0', '1'};
  size_t n_states = 2 + rng.below(3);
  for (size_t i = 0; i < n_states; ++i) m.states.push_back("q" + std::to_string(i));
  m.start_state = "q0";
  m.output_states = m.states;
  m.final_states = {m.states.back()};
  m.output_tapes = 1;
  const Symbol syms[3] = {kBlank, '0', '1'};
  const HeadMove moves[3] = {HeadMove::Left, HeadMove::Right, HeadMove::Stay};
  for (size_t s = 0; s + 1 < n_states; ++s)
    for (Symbol in : syms)
      for (Symbol wk : syms) {
        if (rng.below(8) == 0) continue;  // leave a few holes (stuck paths)
        Rule r;
        r.from = m.states[s];
        r.to = m.states[rng.below(n_states)];
        r.read.input = in;
        r.read.work = wk;
        if (rng.below(2)) r.act.write_work = syms[rng.below(3)];
        r.act.move_input = moves[rng.below(3)];
        r.act.move_work = moves[rng.below(3)];
        if (rng.below(3) == 0) r.act.emit = Emit{rng.below(2) ? '1' : '0', 0};
        m.rules.push_back(r);
      }
  return m;
}

}  // namespace testsup

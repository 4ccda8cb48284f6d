#ifndef FAITHDEBATE_RNG_HPP
#define FAITHDEBATE_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace faithdebate {

// Deterministic RNG used for every randomized decision in the pipeline
// (stance assignment, history shuffling, adjudicator ordering, explanation
// picks, the random ambiguity baseline). splitmix64 is used instead of the
// standard distributions so that streams are bit-identical across platforms
// and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Unbiased draw in [0, bound). bound must be > 0.
  std::uint64_t bounded(std::uint64_t bound);

  double unit_real();  // [0, 1)

  // Fisher-Yates; stable across platforms, unlike std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i + 1));
      using std::swap;
      swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Derives an independent child seed from a parent seed and a component path,
// e.g. derive_seed(master, {session, round, agent}). Same inputs give the
// same stream regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t parent,
                          std::initializer_list<std::uint64_t> path);

}  // namespace faithdebate

#endif  // FAITHDEBATE_RNG_HPP

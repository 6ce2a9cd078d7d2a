#include "ctmc/rng.hpp"

namespace ctmc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

void Xoshiro256pp::jump() {
  static constexpr std::array<std::uint64_t, 4> kJump{0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                                      0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
  std::array<std::uint64_t, 4> acc{};
  for (std::uint64_t word : kJump)
    for (int b = 0; b < 64; ++b) {
      if (word & (std::uint64_t{1} << b))
        for (int i = 0; i < 4; ++i) acc[static_cast<std::size_t>(i)] ^= s_[static_cast<std::size_t>(i)];
      (*this)();
    }
  s_ = acc;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(seed) {
  for (std::uint64_t i = 0; i < stream; ++i) engine_.jump();
}

}  // namespace ctmc

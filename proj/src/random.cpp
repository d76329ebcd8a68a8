#include "tvps/random.hpp"

#include <cmath>
#include <numbers>

namespace tvps {

namespace {

void append_u64(std::vector<std::uint32_t>& words, std::uint64_t v) {
  words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
  words.push_back(static_cast<std::uint32_t>(v >> 32));
}

// FNV-1a, stable across platforms and runs.
std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::mt19937_64 seeded_engine(const std::vector<std::uint32_t>& words) {
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t index) {
  append_u64(words_, master_seed);
  append_u64(words_, index);
  engine_ = seeded_engine(words_);
}

RandomStream::RandomStream(std::vector<std::uint32_t> words)
    : words_(std::move(words)), engine_(seeded_engine(words_)) {}

RandomStream RandomStream::split(std::string_view name) const {
  auto words = words_;
  append_u64(words, hash_name(name));
  return RandomStream(std::move(words));
}

RandomStream RandomStream::split(std::uint64_t index) const {
  auto words = words_;
  append_u64(words, 0x9e3779b97f4a7c15ull);
  append_u64(words, index);
  return RandomStream(std::move(words));
}

double RandomStream::uniform() {
  // 53 random bits, shifted by half an ulp so that 0 is never produced.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  return r * std::cos(2.0 * std::numbers::pi * uniform());
}

}  // namespace tvps

#ifndef NOMRE_GEN_HPP
#define NOMRE_GEN_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nomre/nre.hpp"

namespace nomre {

struct GenOptions {
  int max_depth = 3;  // binder nesting
  int max_size = 9;   // node budget
  std::vector<std::string> letters{"a", "b"};
};

/// A closed, well-formed expression whose class is exactly `cls`.  The
/// constant 0 is never produced.
Nre random_nre(std::mt19937_64 &rng, NreClass cls, const GenOptions &opt = {});

/// `count` expressions cycling through the four classes.
std::vector<Nre> random_corpus(std::uint64_t seed, std::size_t count,
                               const GenOptions &opt = {});

/// Every binder renamed to a name not occurring in e.
Nre alpha_variant(const Nre &e, std::mt19937_64 &rng);

} // namespace nomre

#endif

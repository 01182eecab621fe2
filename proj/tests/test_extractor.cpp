#include <doctest.h>

#include <filesystem>
#include <random>

#include "corpus_path.hpp"
#include "nomre/compiler.hpp"
#include "nomre/extractor.hpp"
#include "nomre/gen.hpp"
#include "nomre/io.hpp"

using namespace nomre;

namespace {
Name nm(const char *s) { return Name::user(s); }
std::vector<Name> pool3() { return {nm("x"), nm("y"), nm("z")}; }

bool round_trips(const Cda &a, std::size_t maxlen) {
  Nre e = extract_expr(a);
  return !equiv_bounded(a, compile(e), pool3(), maxlen);
}
} // namespace

TEST_CASE("layered view") {
  Cda a = load_cda(corpus("automata/lses.json"));
  auto v = layered_view(a);
  REQUIRE(v.layers.size() == 2);
  CHECK(v.layers[0].size() == 4);
  CHECK(v.layers[1].size() == 1);
  CHECK(v.up.size() == 1);
  CHECK(v.down.size() == 1);
  CHECK(v.intra.size() == 3);

  Cda bad;
  bad.add_state(1);
  CHECK_THROWS_AS(layered_view(bad), InvalidAutomaton);
}

TEST_CASE("determinize") {
  Cda ab = load_cda(corpus("automata/ab_star.json"));
  Cda d = determinize_layers(ab);
  CHECK(d.states.size() == ab.states.size());
  CHECK(d.transitions.size() == ab.transitions.size());
  CHECK_FALSE(equiv_bounded(ab, d, pool3(), 6));

  Cda eps = load_cda(corpus("automata/eps_branch.json"));
  Cda e = determinize_layers(eps);
  int from_initial = 0;
  for (const auto &t : e.transitions) {
    CHECK(t.label.kind != Label::Kind::Eps);
    from_initial += t.from == e.initial;
  }
  CHECK(from_initial == 2);
  CHECK(class_of(e).deterministic);

  Cda lses = load_cda(corpus("automata/lses.json"));
  CHECK_FALSE(equiv_bounded(lses, determinize_layers(lses), pool3(), 6));
}

TEST_CASE("extract the unit") {
  Nre e = extract_expr(compile(Nre::one()));
  CHECK(enumerate(compile(e), pool3(), 3) == std::set<Word>{Word{}});
}

TEST_CASE("extract uses canonical names") {
  Nre e = extract_expr(load_cda(corpus("automata/lses.json")));
  for (const auto &n : all_names(e))
    CHECK(n.spelling().substr(0, 1) == "n");
  CHECK(canonical_name(2) == nm("n2"));
}

TEST_CASE("extract round trip on the hand-built automata") {
  for (const auto &f : std::filesystem::directory_iterator(corpus("automata"))) {
    CAPTURE(f.path().string());
    Cda a = load_cda(f.path().string());
    CHECK(round_trips(a, f.path().stem() == "lses" ? 6 : 5));
  }
}

TEST_CASE("extract round trip on random compiled expressions") {
  GenOptions g;
  for (const auto &e : random_corpus(41, 30, g)) {
    CAPTURE(render(e));
    CHECK(round_trips(compile(e), 5));
  }
}

TEST_CASE("extraction without determinization") {
  Cda a = load_cda(corpus("automata/lonet.json"));
  Nre e = extract_expr(a, {false});
  CHECK_FALSE(equiv_bounded(a, compile(e), pool3(), 5));
}

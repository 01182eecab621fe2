#include <doctest.h>

#include <filesystem>

#include "corpus_path.hpp"
#include "nomre/cda.hpp"
#include "nomre/compiler.hpp"
#include "nomre/gen.hpp"
#include "nomre/io.hpp"
#include "nomre/langcalc.hpp"

using namespace nomre;

TEST_CASE("expression files honour the declared alphabet") {
  auto src = read_nre_source(corpus("expr/lths.nre"));
  CHECK(src.letters == Alphabet{"a", "b", "d"});
  CHECK(read_nre_source(corpus("expr/lses.nre")).letters == Alphabet{"a", "b"});
  CHECK_THROWS_AS(read_file(corpus("expr/missing.nre")), IoError);
}

TEST_CASE("corpus word lists hold for both semantics") {
  for (const auto &f : std::filesystem::directory_iterator(corpus("words"))) {
    std::string stem = f.path().stem().string();
    CAPTURE(stem);
    Nre e = load_nre(corpus("expr/" + stem + ".nre"));
    Cda a = compile(e);
    auto list = read_word_list(f.path().string());
    CHECK(!list.accept.empty());
    CHECK(!list.reject.empty());
    for (const auto &w : list.accept) {
      CAPTURE(word_str(w));
      CHECK(accept(a, w));
      CHECK(language_member(e, w));
    }
    for (const auto &w : list.reject) {
      CAPTURE(word_str(w));
      CHECK_FALSE(accept(a, w));
      CHECK_FALSE(language_member(e, w));
    }
  }
}

TEST_CASE("hand-built automata agree with their expressions") {
  for (const char *stem : {"lses", "lonet", "lths", "nmn", "succ_distinct"}) {
    CAPTURE(stem);
    Cda a = load_cda(corpus(std::string("automata/") + stem + ".json"));
    Cda b = compile(load_nre(corpus(std::string("expr/") + stem + ".nre")));
    std::vector<Name> pool{Name::user("x"), Name::user("y"), Name::user("z")};
    CHECK_FALSE(equiv_bounded(a, b, pool, 5));
  }
}

TEST_CASE("generator honours its class and shape contract") {
  std::mt19937_64 rng(13);
  const NreClass classes[] = {NreClass::B, NreClass::P, NreClass::U, NreClass::UP};
  for (int i = 0; i < 200; ++i) {
    NreClass c = classes[i % 4];
    Nre e = random_nre(rng, c);
    CHECK(classify(e) == c);
    CHECK(binder_depth(e) <= 3);
    CHECK(check_wellformed(e).ok());
  }
  auto a = random_corpus(5, 20), b = random_corpus(5, 20);
  CHECK(a == b);
}

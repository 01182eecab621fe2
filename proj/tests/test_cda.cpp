#include <doctest.h>

#include <random>

#include "corpus_path.hpp"
#include "nomre/cda.hpp"
#include "nomre/compiler.hpp"
#include "nomre/io.hpp"
#include "oracles.hpp"

using namespace nomre;

namespace {
Name nm(const char *s) { return Name::user(s); }
std::vector<Name> pool3() { return {nm("x"), nm("y"), nm("z")}; }
Cda lses() { return load_cda(corpus("automata/lses.json")); }

bool mentions(const ValidationReport &r, const std::string &frag) {
  for (const auto &v : r.violations)
    if (v.find(frag) != std::string::npos)
      return true;
  return false;
}
} // namespace

TEST_CASE("validate") {
  Cda a;
  a.add_state(0);
  CHECK(validate(a).ok());

  Cda s;
  s.add_state(0);
  s.add_state(0);
  s.add(0, Label::star(), 1);
  CHECK(mentions(validate(s), "|q'| = |q| + 1"));

  Cda f;
  f.add_state(0);
  f.add_state(1, true);
  f.add(0, Label::star(), 1);
  CHECK(mentions(validate(f), "|q| = 0"));

  Cda r;
  r.add_state(0);
  r.add_state(0);
  r.add(0, Label::reg(1), 1);
  CHECK_FALSE(validate(r).ok());
}

TEST_CASE("class_of") {
  CHECK(class_of(lses()).cls == CdaClass::CA);

  // Close(1) from a two-register state
  Cda d;
  d.add_state(0);
  d.add_state(1);
  d.add_state(2);
  d.add_state(1);
  d.add_state(0, true);
  d.add(0, Label::star(), 1);
  d.add(1, Label::star(), 2);
  d.add(2, Label::close(1), 3);
  d.add(3, Label::close(1), 4);
  CHECK(class_of(d).cls == CdaClass::DA);
  CHECK(class_of(d).cls != CdaClass::CA);

  CHECK(class_of(load_cda(corpus("automata/nmn.json"))).cls == CdaClass::A);
  CHECK(class_of(load_cda(corpus("automata/lths.json"))).cls == CdaClass::CDA);

  Cda ab;
  ab.add_state(0, true);
  ab.add_state(0);
  ab.add(0, Label::sym("a"), 1);
  ab.add(1, Label::sym("a"), 0);
  CHECK(class_of(ab).deterministic);
  CHECK_FALSE(class_of(load_cda(corpus("automata/eps_branch.json"))).deterministic);
}

TEST_CASE("step: star allocates a fresh name or an unread input name") {
  Cda a;
  a.add_state(0);
  a.add_state(1);
  a.add(0, Label::star(), 1);
  Word w{nm("x")};
  auto next = step(a, {0, 0, {}}, w);
  bool fresh = false, input = false;
  for (const auto &c : next) {
    REQUIRE(c.extant.size() == 1);
    CHECK(c.extant[0].history == std::vector<Name>{c.extant[0].cv});
    CHECK(c.pos == 0);
    fresh |= c.extant[0].cv.is_fresh();
    input |= c.extant[0].cv == nm("x");
  }
  CHECK(fresh);
  CHECK(input);
}

TEST_CASE("step: underlined read") {
  Cda a;
  a.add_state(0);
  a.add_state(1);
  a.add_state(1);
  a.add(0, Label::star(), 1);
  a.add(1, Label::under(1), 2);
  Name x = nm("x"), y = nm("y"), z = nm("z");
  ExtantChronicle E({Chronicle({y, x}, y)});
  CHECK(step(a, {1, 0, E}, Word{x}).empty());
  CHECK(step(a, {1, 0, E}, Word{y}).empty());
  auto ok = step(a, {1, 0, E}, Word{z});
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].extant[0].cv == z);
  CHECK(ok[0].extant[0].history == std::vector<Name>{y, x, z});
  CHECK(ok[0].pos == 1);
}

TEST_CASE("step: close moves the top value into register i") {
  Cda a;
  a.add_state(0);
  a.add_state(2);
  a.add_state(1);
  a.add_state(1);
  a.add(1, Label::close(1), 2);
  a.add(1, Label::close(2), 3);
  Name p = nm("p"), q = nm("q");
  ExtantChronicle E({Chronicle({p, q}, p), Chronicle({q}, q)});
  for (const auto &c : step(a, {1, 0, E}, Word{})) {
    REQUIRE(c.extant.size() == 1);
    CHECK(c.extant[0].history == std::vector<Name>{p, q});
    CHECK(c.extant[0].cv == (c.state == 2 ? q : p));
  }
  CHECK(step(a, {1, 0, E}, Word{}).size() == 2);
}

TEST_CASE("accept") {
  Cda a = lses();
  CHECK(accept(a, parse_word("a b $n1 $n2 $n3")));
  CHECK_FALSE(accept(a, parse_word("a b $n1 $n1")));
  CHECK(accept(a, parse_word("a b")));

  Cda on = load_cda(corpus("automata/lonet.json"));
  CHECK(accept(on, parse_word("a b $r0 $p0 $q0 $r1 $r0 $q1")));
  CHECK_FALSE(accept(on, parse_word("a b $r0 $p0 $q0 $p0 $x $y")));

  RunStats st;
  accept(load_cda(corpus("automata/lths.json")), parse_word("a b $r $p $q d $q d"),
         &st);
  CHECK(st.register_discipline);
  CHECK(st.distinct_cvs);
}

TEST_CASE("enumerate") {
  auto one = compile(Nre::one());
  CHECK(enumerate(one, pool3(), 2) == std::set<Word>{Word{}});
  CHECK(enumerate(compile(Nre::zero()), pool3(), 3).empty());

  Cda sd = load_cda(corpus("automata/succ_distinct.json"));
  std::size_t n3 = 0;
  for (const auto &w : enumerate(sd, pool3(), 3))
    n3 += w.size() == 3;
  std::size_t brute = 0;
  for (const auto &w : oracle::all_words({}, pool3(), 3))
    brute += oracle::successive_distinct(w);
  CHECK(brute == 12);
  CHECK(n3 == brute);
}

TEST_CASE("equiv_bounded") {
  Cda a = lses();
  CHECK_FALSE(equiv_bounded(a, a, pool3(), 4));
  auto cex = equiv_bounded(compile(Nre::one()), compile(Nre::zero()), pool3(), 3);
  REQUIRE(cex);
  CHECK(cex->empty());
}

TEST_CASE("json round trip on random automata") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 100; ++round) {
    Cda a;
    int n = 2 + rng() % 6;
    a.add_state(0);
    for (int i = 1; i < n; ++i)
      a.add_state(static_cast<int>(rng() % 3), rng() % 4 == 0);
    for (auto &s : a.states)
      if (s.regs)
        s.final = false;
    for (int t = 0; t < 10; ++t) {
      int from = rng() % n, to = rng() % n;
      int rf = a.states[from].regs, rt = a.states[to].regs;
      if (rt == rf + 1)
        a.add(from, Label::star(), to);
      else if (rt + 1 == rf)
        a.add(from, Label::close(1 + rng() % rf), to);
      else if (rt == rf) {
        switch (rng() % 4) {
        case 0:
          a.add(from, Label::eps(), to);
          break;
        case 1:
          a.add(from, Label::sym(rng() % 2 ? "a" : "b"), to);
          break;
        default:
          if (rf)
            a.add(from, rng() % 2 ? Label::reg(1 + rng() % rf)
                                  : Label::under(1 + rng() % rf), to);
        }
      }
    }
    REQUIRE(validate(a).ok());
    CHECK(from_json(to_json(a)) == a);
  }
  CHECK_THROWS_AS(from_json("{"), SchemaError);
  CHECK_THROWS_AS(from_json("{\"states\": 3}"), SchemaError);
}

TEST_CASE("dot export") {
  Cda a;
  a.add_state(0);
  std::string d = to_dot(a);
  std::size_t nodes = 0, pos = 0;
  while ((pos = d.find("[shape=", pos)) != std::string::npos) {
    ++nodes;
    ++pos;
  }
  CHECK(nodes == 1);
  CHECK(d.find("->") == std::string::npos);

  std::string l = to_dot(lses());
  nodes = pos = 0;
  while ((pos = l.find("[shape=", pos)) != std::string::npos) {
    ++nodes;
    ++pos;
  }
  CHECK(nodes == 5);
  CHECK(l.find("subgraph layer0") != std::string::npos);
  CHECK(l.find("subgraph layer1") != std::string::npos);
  CHECK(l.find("subgraph layer2") == std::string::npos);
}

TEST_CASE("closure constructions") {
  Cda a = lses(), b = load_cda(corpus("automata/ab_star.json"));
  auto pool = pool3();
  auto la = enumerate(a, pool, 4), lb = enumerate(b, pool, 4);
  CHECK(enumerate(union_cda(a, b), pool, 4) == oracle::set_union(la, lb));
  CHECK(enumerate(concat_cda(a, b), pool, 4) == oracle::set_concat(la, lb, 4));
  CHECK(enumerate(star_cda(a), pool, 4) == oracle::set_star(la, 4));
}

TEST_CASE("parse_word") {
  Word w = parse_word("a $n b");
  REQUIRE(w.size() == 3);
  CHECK(std::get<Letter>(w[0]).sym == "a");
  CHECK(std::get<Name>(w[1]) == nm("n"));
  CHECK(parse_word("").empty());
  CHECK_THROWS_AS(parse_word("a $"), std::invalid_argument);
}

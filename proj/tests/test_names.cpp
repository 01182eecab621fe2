#include <doctest.h>

#include <random>

#include "nomre/names.hpp"

using namespace nomre;

namespace {
Name nm(const char *s) { return Name::user(s); }
Word wd(std::initializer_list<Symbol> s) { return Word(s); }
} // namespace

TEST_CASE("name order puts user names first and placeholders last") {
  CHECK(nm("zz") < Name::fresh(0));
  CHECK(Name::fresh(7) < Name::placeholder(0));
  CHECK(nm("a") < nm("b"));
  CHECK(nm("n").str() == "$n");
  CHECK(Name::placeholder(3).str() == "?3");
}

TEST_CASE("transpose") {
  Name n = nm("n"), m = nm("m"), k = nm("k");
  CHECK(Perm::transpose(n, n).is_identity());
  CHECK(Perm::transpose(n, m)(n) == m);
  CHECK(Perm::transpose(n, m)(m) == n);
  CHECK(Perm::transpose(n, m)(k) == k);
}

TEST_CASE("from_lists") {
  Name a = nm("a"), b = nm("b"), c = nm("c");
  CHECK(Perm::from_lists({}, {}).is_identity());

  std::vector<Name> N{a}, M{b};
  Perm p = Perm::from_lists(N, M);
  CHECK(p(a) == b);
  CHECK(p(b) == a);

  std::vector<Name> N2{a, b}, M2{b, c};
  Perm q = Perm::from_lists(N2, M2);
  CHECK(q(a) == b);
  CHECK(q(b) == c);
  CHECK(q(c) == a);

  std::vector<Name> bad{a, a};
  CHECK_THROWS_AS(Perm::from_lists(bad, M2), std::invalid_argument);
  CHECK_THROWS_AS(Perm::from_lists(N, M2), std::invalid_argument);
}

TEST_CASE("from_lists completes to a bijection on random lists") {
  std::mt19937_64 rng(11);
  std::vector<Name> universe;
  for (int i = 0; i < 8; ++i)
    universe.push_back(nm(("u" + std::to_string(i)).c_str()));
  for (int round = 0; round < 200; ++round) {
    auto s1 = universe, s2 = universe;
    std::shuffle(s1.begin(), s1.end(), rng);
    std::shuffle(s2.begin(), s2.end(), rng);
    std::size_t len = rng() % 5;
    std::vector<Name> N(s1.begin(), s1.begin() + len), M(s2.begin(), s2.begin() + len);
    Perm p = Perm::from_lists(N, M);
    for (std::size_t i = 0; i < len; ++i)
      CHECK(p(N[i]) == M[i]);
    std::set<Name> dom(N.begin(), N.end()), image;
    dom.insert(M.begin(), M.end());
    for (const auto &x : dom) {
      CHECK(dom.count(p(x)));
      image.insert(p(x));
      CHECK(p.inverse()(p(x)) == x);
    }
    CHECK(image == dom);
    Name outside = nm("outside");
    CHECK(p(outside) == outside);
  }
}

TEST_CASE("apply_perm_word") {
  Name n1 = nm("n1"), n2 = nm("n2");
  Word w = wd({Letter{"a"}, n1, n2});
  CHECK(apply_perm_word(Perm::identity(), w) == w);
  Perm t = Perm::transpose(n1, n2);
  CHECK(apply_perm_word(t, wd({n1, n2, n1})) == wd({n2, n1, n2}));
  CHECK(apply_perm_word(t, wd({Letter{"a"}, Letter{"b"}})) ==
        wd({Letter{"a"}, Letter{"b"}}));

  Perm q = Perm::transpose(n2, nm("n3"));
  Word v = wd({n1, n2, nm("n3"), Letter{"a"}});
  CHECK(apply_perm_word(t, apply_perm_word(q, v)) ==
        apply_perm_word(t.compose(q), v));
}

TEST_CASE("chronicle extension and deletion") {
  Name a = nm("a"), b = nm("b"), c = nm("c"), n = nm("n");
  Chronicle s({n}, n);
  CHECK(s.extend(std::vector<Name>{}) == s);
  Chronicle ab({a, b}, a);
  Chronicle abc = ab.extend(c);
  CHECK(abc.history == std::vector<Name>{a, b, c});
  CHECK(abc.cv == a);

  ExtantChronicle E({Chronicle({a}, a), Chronicle({b}, b)});
  auto F = E.extend(n);
  CHECK(F[0].history == std::vector<Name>{a, n});
  CHECK(F[1].history == std::vector<Name>{b, n});
  CHECK(F.hcv() == E.hcv());
  CHECK(F.distinct_cvs());

  Chronicle aba({a, b, a}, b);
  auto r = aba.remove(std::vector<Name>{a});
  CHECK(r.history == std::vector<Name>{b});
  CHECK(r.cv == b);
  CHECK(aba.remove(std::vector<Name>{}) == aba);
  CHECK_THROWS_AS(Chronicle({a}, a).remove(std::vector<Name>{a}),
                  std::invalid_argument);
}

TEST_CASE("natural chronicle") {
  Name a = nm("a"), b = nm("b");
  auto E = ExtantChronicle::natural(std::vector<Name>{a, b});
  REQUIRE(E.size() == 2);
  CHECK(E[0].history == std::vector<Name>{a, b});
  CHECK(E[0].cv == a);
  CHECK(E[1].history == std::vector<Name>{b});
  CHECK(E[1].cv == b);
}

TEST_CASE("canonical_fresh") {
  CHECK(canonical_fresh({}) == Name::fresh(0));
  CHECK(canonical_fresh({Name::fresh(0)}) == Name::fresh(1));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    NameSet avoid;
    for (int k = 0; k < 6; ++k)
      avoid.insert(rng() % 2 ? Name::fresh(rng() % 8) : nm("x"));
    CHECK(!avoid.count(canonical_fresh(avoid)));
  }
}

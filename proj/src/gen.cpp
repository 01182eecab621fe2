#include "nomre/gen.hpp"

#include <algorithm>
#include <functional>

namespace nomre {

namespace {

class Gen {
public:
  Gen(std::mt19937_64 &rng, NreClass cls, const GenOptions &opt)
      : rng_(rng), opt_(opt),
        under_(cls == NreClass::U || cls == NreClass::UP),
        close_(cls == NreClass::P || cls == NreClass::UP) {}

  Nre expr(std::vector<Name> &env, int depth, int budget) {
    if (budget <= 1)
      return leaf(env);
    switch (pick(depth < opt_.max_depth ? 6 : 4)) {
    case 0: {
      int l = 1 + pick(budget - 1);
      return Nre::sum(expr(env, depth, l), expr(env, depth, budget - l));
    }
    case 1:
    case 2: {
      int l = 1 + pick(budget - 1);
      return Nre::concat(expr(env, depth, l), expr(env, depth, budget - l));
    }
    case 3:
      return Nre::star(expr(env, depth, budget - 1));
    default:
      return binder(env, depth, budget - 1);
    }
  }

  Nre binder(std::vector<Name> &env, int depth, int budget) {
    static const char *pool[] = {"x", "y", "z", "w"};
    Name n = Name::user(pool[depth % 4]);
    Name close = n;
    if (close_ && !env.empty() && pick(2) == 0)
      close = env[pick(static_cast<int>(env.size()))];
    env.push_back(n);
    Nre body = expr(env, depth + 1, std::max(budget, 1));
    env.pop_back();
    return Nre::binder(n, body, close);
  }

private:
  std::mt19937_64 &rng_;
  const GenOptions &opt_;
  bool under_, close_;

  int pick(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_));
  }

  Nre leaf(const std::vector<Name> &env) {
    int k = pick(8);
    if (!env.empty() && k >= 5) {
      const Name &n = env[pick(static_cast<int>(env.size()))];
      if (under_ && k == 7)
        return Nre::under(n);
      return Nre::name(n);
    }
    if (k == 0)
      return Nre::one();
    return Nre::letter(opt_.letters[pick(static_cast<int>(opt_.letters.size()))]);
  }
};

} // namespace

Nre random_nre(std::mt19937_64 &rng, NreClass cls, const GenOptions &opt) {
  for (;;) {
    Gen g(rng, cls, opt);
    std::vector<Name> env;
    int budget = 2 + static_cast<int>(rng() % static_cast<unsigned>(
                                                 std::max(opt.max_size - 1, 1)));
    // a binder at the root makes names available below
    Nre e = rng() % 4 ? g.binder(env, 0, budget) : g.expr(env, 0, budget);
    if (classify(e) == cls && binder_depth(e) <= opt.max_depth &&
        check_wellformed(e, true).ok())
      return e;
  }
}

std::vector<Nre> random_corpus(std::uint64_t seed, std::size_t count,
                               const GenOptions &opt) {
  static const NreClass order[] = {NreClass::B, NreClass::P, NreClass::U,
                                   NreClass::UP};
  std::mt19937_64 rng(seed);
  std::vector<Nre> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(random_nre(rng, order[i % 4], opt));
  return out;
}

Nre alpha_variant(const Nre &e, std::mt19937_64 &rng) {
  NameSet used = all_names(e);
  std::uint64_t salt = rng() % 1000;
  std::size_t k = 0;
  auto fresh = [&]() {
    for (;;) {
      Name n = Name::user("v" + std::to_string(salt) + "_" + std::to_string(k++));
      if (used.insert(n).second)
        return n;
    }
  };
  std::function<Nre(const Nre &)> go = [&](const Nre &x) -> Nre {
    using K = Nre::Kind;
    switch (x.kind()) {
    case K::Sum:
      return Nre::sum(go(x.left()), go(x.right()));
    case K::Concat:
      return Nre::concat(go(x.left()), go(x.right()));
    case K::Star:
      return Nre::star(go(x.body()));
    case K::Binder: {
      Name v = fresh();
      Nre body = go(apply_perm_expr(Perm::transpose(x.atom(), v), x.body()));
      return Nre::binder(v, body, x.plain_binder() ? v : x.close());
    }
    default:
      return x;
    }
  };
  return go(e);
}

} // namespace nomre

// Independent reference predicates.  Nothing here calls the automaton or
// calculus code; every check reads the word directly.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "nomre/names.hpp"

namespace oracle {

using nomre::Letter;
using nomre::Name;
using nomre::Symbol;
using nomre::Word;

inline bool is_letter(const Symbol &s, const char *l) {
  return std::holds_alternative<Letter>(s) && std::get<Letter>(s).sym == l;
}

inline bool is_name(const Symbol &s) { return std::holds_alternative<Name>(s); }

inline Name name_at(const Word &w, std::size_t i) { return std::get<Name>(w[i]); }

/// a b r0 ... rk with the r_i pairwise distinct.
inline bool lses(const Word &w) {
  if (w.size() < 2 || !is_letter(w[0], "a") || !is_letter(w[1], "b"))
    return false;
  std::set<Name> seen;
  for (std::size_t i = 2; i < w.size(); ++i)
    if (!is_name(w[i]) || !seen.insert(name_at(w, i)).second)
      return false;
  return true;
}

/// a b (r p p')* where r is new to the whole word so far, p differs from r
/// and p' differs from r and p.
inline bool lonet(const Word &w) {
  if (w.size() < 2 || !is_letter(w[0], "a") || !is_letter(w[1], "b"))
    return false;
  if ((w.size() - 2) % 3 != 0)
    return false;
  std::set<Name> seen;
  for (std::size_t i = 2; i < w.size(); i += 3) {
    for (std::size_t j = i; j < i + 3; ++j)
      if (!is_name(w[j]))
        return false;
    Name r = name_at(w, i), p = name_at(w, i + 1), q = name_at(w, i + 2);
    if (seen.count(r) || p == r || q == r || q == p)
      return false;
    seen.insert({r, p, q});
  }
  return true;
}

/// Names only, no two neighbours equal.
inline bool successive_distinct(const Word &w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_name(w[i]))
      return false;
    if (i && name_at(w, i) == name_at(w, i - 1))
      return false;
  }
  return true;
}

/// Every word over `letters` and `pool` of length exactly n.
inline std::vector<Word> all_words(const std::vector<std::string> &letters,
                                   const std::vector<Name> &pool, std::size_t n) {
  std::vector<Symbol> syms;
  for (const auto &l : letters)
    syms.push_back(Letter{l});
  for (const auto &p : pool)
    syms.push_back(p);
  std::vector<Word> out{Word{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Word> next;
    for (const auto &w : out)
      for (const auto &s : syms) {
        Word v = w;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

using Lang = std::set<Word>;

inline Lang set_union(const Lang &a, const Lang &b) {
  Lang r = a;
  r.insert(b.begin(), b.end());
  return r;
}

inline Lang set_concat(const Lang &a, const Lang &b, std::size_t maxlen) {
  Lang r;
  for (const auto &x : a)
    for (const auto &y : b)
      if (x.size() + y.size() <= maxlen) {
        Word w = x;
        w.insert(w.end(), y.begin(), y.end());
        r.insert(std::move(w));
      }
  return r;
}

inline Lang set_star(const Lang &a, std::size_t maxlen) {
  Lang r{Word{}};
  Lang frontier = r;
  while (!frontier.empty()) {
    Lang next;
    for (const auto &w : set_concat(frontier, a, maxlen))
      if (r.insert(w).second)
        next.insert(w);
    frontier = std::move(next);
  }
  return r;
}

} // namespace oracle

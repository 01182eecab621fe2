#ifndef NOMRE_LANGCALC_HPP
#define NOMRE_LANGCALC_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nomre/compiler.hpp"
#include "nomre/names.hpp"
#include "nomre/nre.hpp"

namespace nomre {

/// Freshness condition over placeholders and names.
///
/// Local(p, S) is p # S: p differs from every element of S.  Global(p, i, S)
/// is the relative global mark #̲ⁱ; it reads the same way but its list keeps
/// growing with register i's chronicle while i is live.  And([]) is true and
/// Or([]) is false.
struct FreshCond {
  enum class Kind { Neq, Local, Global, And, Or };
  Kind kind = Kind::And;
  Name subject;
  Name other;
  int reg = 0;
  std::vector<Name> wrt;
  std::vector<FreshCond> children;

  static FreshCond neq(Name a, Name b);
  static FreshCond local(Name p, std::vector<Name> wrt);
  static FreshCond global(Name p, int reg, std::vector<Name> wrt);
  static FreshCond conj(std::vector<FreshCond> cs);
  static FreshCond disj(std::vector<FreshCond> cs);
  static FreshCond truth() { return conj({}); }
  static FreshCond falsity() { return disj({}); }

  bool is_false() const { return kind == Kind::Or && children.empty(); }
  FreshCond permute(const Perm &p) const;
  std::string str() const;

  friend bool operator==(const FreshCond &, const FreshCond &) = default;
  friend auto operator<=>(const FreshCond &a, const FreshCond &b) {
    return a.key() <=> b.key();
  }

private:
  std::string key() const;
};

/// ⟦ word | cond ⟧.  Placeholders are Names of placeholder kind.
struct SchematicWord {
  Word word;
  FreshCond cond;

  bool is_bottom() const { return cond.is_false(); }
  /// `[[ word | cond, cond ]]`
  std::string str() const;

  friend bool operator==(const SchematicWord &, const SchematicWord &) = default;
};

// ------------------------------------------------------------- CTXC

struct DerivationTree {
  enum class Rule {
    One,
    Zero,
    Letter,
    Name,
    Under,
    Sum1,
    Sum2,
    Concat,
    Star,
    BindEq,
    BindNeq
  };
  Rule rule;
  int star_h = 0;
  ContextTriple<Nre> ctx;
  std::vector<DerivationTree> children;
};

const char *rule_tag(DerivationTree::Rule r);

class CalcError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Natural extant chronicle ℂ(C).
inline ExtantChronicle natural_chronicle(const std::vector<Name> &pre) {
  return ExtantChronicle::natural(pre);
}

/// Post-context given to the body of a binder by ◇̂₌ / ◇̂≠; `nu` is the
/// renamed bound name (the new last element of the pre-context).
ExtantChronicle binder_post(const Nre &binder, const ExtantChronicle &post,
                            const Name &nu);

/// Every derivation of t, each star unfolded 0..star_bound times.
std::vector<DerivationTree> ctxc_derive(const ContextTriple<Nre> &t,
                                        int star_bound);

// ------------------------------------------------------------- LNGC

struct LngcResult {
  SchematicWord sw;
  ExtantChronicle post;
};

/// Bottom-up evaluation of one derivation.  Placeholders are numbered from
/// `first_placeholder` in evaluation order.
LngcResult lngc_eval(const DerivationTree &tree, std::uint32_t first_placeholder = 0);

/// Derivation dump: one rule per line, children indented, each line
/// `(rule) C ‡ e ‡ E  ==>  [[ w | φ ]] ‡ E'`.
std::string dump_derivation(const DerivationTree &tree);

/// For each derivation of [] ‡ e ‡ []: a `derivation k of N` header, the
/// dump, and a `normal form:` line.
std::string derivation_report(const Nre &e, int star_bound);

bool schematic_member(const SchematicWord &sw, const Word &w);

/// Placeholders renumbered canonically, lists deduplicated, empty lists
/// dropped, conjunctions flattened and sorted.
SchematicWord schematic_normalize(const SchematicWord &sw);

/// Every Local/Global mark flattened into unordered Neq pairs.
std::set<std::pair<Name, Name>> to_inequations(const SchematicWord &sw);

/// True when some bijection of placeholders maps a onto b (after
/// normalisation of both).
bool equal_modulo_renaming(const SchematicWord &a, const SchematicWord &b);

// --------------------------------------------- languages of expressions

struct EvalOptions {
  std::size_t maxlen = 6;
  /// Unfoldings per star; -1 unfolds until no new result appears.
  int star_bound = -1;
};

/// Schematic words of all derivations of [] ‡ e ‡ [] whose word is at most
/// maxlen long, with unobservable placeholders projected out.
std::vector<SchematicWord> language_schemata(const Nre &e, EvalOptions opt);

/// Same, for an open context C ‡ e ‡ E (results keep their posts).
std::vector<LngcResult> language_schemata_in_context(const ContextTriple<Nre> &t,
                                                     EvalOptions opt);

bool language_member(const Nre &e, const Word &w, int star_bound = -1);

std::set<Word> language_enumerate(const Nre &e, const std::vector<Name> &pool,
                                  std::size_t maxlen, int star_bound = -1);

/// Words obtained by assigning pool names to the placeholders of sw's word
/// that satisfy its condition.
std::set<Word> instantiate(const SchematicWord &sw,
                           const std::vector<Name> &pool);

} // namespace nomre

#endif

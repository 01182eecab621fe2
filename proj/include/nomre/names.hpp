#ifndef NOMRE_NAMES_HPP
#define NOMRE_NAMES_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nomre {

/// An atom of the name universe.
///
/// Three disjoint families share one total order: user names (ordered by
/// spelling), the reserved machine sequence ~0, ~1, ... handed out by
/// canonical_fresh, and the placeholders ?0, ?1, ... used by the language
/// calculus.  User names sort first, placeholders last.
class Name {
public:
  enum class Kind : std::uint8_t { User = 0, Fresh = 1, Placeholder = 2 };

  Name() = default;

  static Name user(std::string_view spelling);
  static Name fresh(std::uint32_t index) { return Name(Kind::Fresh, index); }
  static Name placeholder(std::uint32_t index) {
    return Name(Kind::Placeholder, index);
  }

  Kind kind() const { return kind_; }
  bool is_user() const { return kind_ == Kind::User; }
  bool is_fresh() const { return kind_ == Kind::Fresh; }
  bool is_placeholder() const { return kind_ == Kind::Placeholder; }

  /// Interned id for user names, sequence index otherwise.
  std::uint32_t index() const { return id_; }

  /// Spelling of a user name without the `$` sigil; empty otherwise.
  std::string_view spelling() const;

  /// Printed form: `$n`, `~3`, `?3`.
  std::string str() const;

  friend bool operator==(const Name &a, const Name &b) {
    return a.kind_ == b.kind_ && a.id_ == b.id_;
  }
  friend std::strong_ordering operator<=>(const Name &a, const Name &b);

  std::uint64_t hash_key() const {
    return (static_cast<std::uint64_t>(kind_) << 32) | id_;
  }

private:
  Name(Kind k, std::uint32_t id, const std::string *sp = nullptr)
      : kind_(k), id_(id), sp_(sp) {}

  Kind kind_ = Kind::Fresh;
  std::uint32_t id_ = 0;
  const std::string *sp_ = nullptr; // interned spelling, user names only
};

std::ostream &operator<<(std::ostream &os, const Name &n);

/// A symbol of the finite alphabet.
struct Letter {
  std::string sym;

  friend bool operator==(const Letter &, const Letter &) = default;
  friend auto operator<=>(const Letter &, const Letter &) = default;
};

/// One position of a data word.
using Symbol = std::variant<Letter, Name>;
using Word = std::vector<Symbol>;

std::string symbol_str(const Symbol &s);
std::string word_str(const Word &w);

/// Names occurring in a word, in order of first occurrence.
std::vector<Name> word_names(const Word &w);

using NameSet = std::set<Name>;

/// Least machine-reserved name not in `avoid`.
Name canonical_fresh(const NameSet &avoid);

/// A finitely supported permutation of the name universe.
class Perm {
public:
  Perm() = default;

  static Perm identity() { return Perm(); }
  static Perm transpose(Name a, Name b);

  /// The bijective completion of N[i] -> M[i].
  ///
  /// Elements of M outside N have no assigned image; they are sent, in name
  /// order, to the elements of N outside M (which have no preimage), also in
  /// name order.  The result restricts to a bijection on N u M and fixes
  /// everything else.
  /// Throws std::invalid_argument on a length mismatch or repeated entries.
  static Perm from_lists(std::span<const Name> from, std::span<const Name> to);

  Name operator()(const Name &n) const;
  Name apply(const Name &n) const { return (*this)(n); }

  Perm inverse() const;

  /// (this . other)(n) = this(other(n)).
  Perm compose(const Perm &other) const;

  bool is_identity() const { return map_.empty(); }
  NameSet support() const;

  friend bool operator==(const Perm &, const Perm &) = default;

private:
  std::map<Name, Name> map_; // non-fixed points only
};

Word apply_perm_word(const Perm &p, const Word &w);
std::vector<Name> apply_perm_names(const Perm &p, std::span<const Name> ns);

/// A register history together with its current value.
struct Chronicle {
  std::vector<Name> history;
  Name cv;

  Chronicle() = default;
  Chronicle(std::vector<Name> h, Name current);

  /// s@t: history extended by t, current value unchanged.
  Chronicle extend(std::span<const Name> t) const;
  Chronicle extend(const Name &n) const;

  /// s\t: every occurrence of every name of t removed from the history.
  /// Throws std::invalid_argument when t contains the current value.
  Chronicle remove(std::span<const Name> t) const;

  bool contains(const Name &n) const;
  Chronicle permute(const Perm &p) const;

  /// History with repeated names dropped (first occurrence kept).
  Chronicle dedup() const;

  friend bool operator==(const Chronicle &, const Chronicle &) = default;
};

/// The list of live register chronicles.
class ExtantChronicle {
public:
  ExtantChronicle() = default;
  explicit ExtantChronicle(std::vector<Chronicle> entries);

  /// The natural chronicle of a pre-context: entry i has history
  /// C[i] C[i+1] ... C[k] and current value C[i].
  static ExtantChronicle natural(std::span<const Name> context);

  const std::vector<Chronicle> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Chronicle &operator[](std::size_t i) const { return entries_[i]; }

  std::vector<Name> hcv() const;

  ExtantChronicle extend(std::span<const Name> t) const;
  ExtantChronicle extend(const Name &n) const;
  ExtantChronicle remove(std::span<const Name> t) const;
  ExtantChronicle append(const ExtantChronicle &other) const;
  ExtantChronicle push(Chronicle c) const;
  ExtantChronicle pop() const;
  ExtantChronicle permute(const Perm &p) const;
  ExtantChronicle with_cv(std::size_t i, Name n) const;
  ExtantChronicle dedup() const;

  /// True iff the current values are pairwise distinct.
  bool distinct_cvs() const;

  /// Every name mentioned in any history or current value.
  NameSet names() const;

  friend bool operator==(const ExtantChronicle &,
                         const ExtantChronicle &) = default;

private:
  std::vector<Chronicle> entries_;
};

std::string chronicle_str(const Chronicle &c);
std::string extant_str(const ExtantChronicle &e);
std::string names_str(std::span<const Name> ns);

} // namespace nomre

template <> struct std::hash<nomre::Name> {
  std::size_t operator()(const nomre::Name &n) const noexcept {
    return std::hash<std::uint64_t>{}(n.hash_key());
  }
};

#endif

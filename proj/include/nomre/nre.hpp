#ifndef NOMRE_NRE_HPP
#define NOMRE_NRE_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nomre/names.hpp"

namespace nomre {

using Alphabet = std::set<std::string>;

/// Nominal regular expression.  Immutable; copies share structure.
///
/// A binder carries its bound name and its close name.  When the two agree
/// the binder is the plain ⟨n e⟩ of b- and u-NREs.
class Nre {
public:
  enum class Kind { One, Zero, Letter, Name, Under, Sum, Concat, Star, Binder };

  static Nre one();
  static Nre zero();
  static Nre letter(std::string sym);
  static Nre name(Name n);
  static Nre under(Name n);
  static Nre sum(Nre l, Nre r);
  static Nre concat(Nre l, Nre r);
  static Nre star(Nre e);
  static Nre binder(Name bind, Nre body);
  static Nre binder(Name bind, Nre body, Name close);

  Kind kind() const { return node_->kind; }
  const std::string &sym() const { return node_->sym; }
  /// The name of Name/Under nodes, the bound name of binders.
  Name atom() const { return node_->atom; }
  Name close() const { return node_->close; }
  bool plain_binder() const { return node_->atom == node_->close; }
  const Nre &left() const { return *node_->l; }
  const Nre &right() const { return *node_->r; }
  const Nre &body() const { return *node_->l; }

  /// Source position (1-based) when produced by the parser, else 0.
  int line() const { return node_->line; }
  int col() const { return node_->col; }
  Nre at(int line, int col) const;

  std::size_t size() const;

  /// Structural equality, ignoring source positions.
  friend bool operator==(const Nre &a, const Nre &b);

private:
  struct Node {
    Kind kind;
    std::string sym;
    Name atom, close;
    std::shared_ptr<const Nre> l, r;
    int line = 0, col = 0;
  };
  explicit Nre(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Nre make(Node n);

  std::shared_ptr<const Node> node_;
};

enum class NreClass { B, P, U, UP };

const char *class_name(NreClass c);
/// Least upper bound in the lattice B <= P, U <= UP.
NreClass class_join(NreClass a, NreClass b);
bool class_leq(NreClass a, NreClass b);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_, col_;
};

struct ParseOptions {
  /// Accept a close name that no enclosing binder introduces.
  bool allow_unbound_close = false;
};

/// Parses the concrete NRE grammar.
///
///   sum    ::= concat ('+' concat)*
///   concat ::= post post*
///   post   ::= atom '*'*
///   atom   ::= '1' | '0' | letters | '$'id | '_$'id | '(' sum ')'
///            | '<$'id '.' sum '>' ['$'id]
///
/// A run of bare identifier characters is split into declared letters by
/// longest match.  The close name must follow '>' without whitespace.
Nre parse(std::string_view text, const Alphabet &alphabet,
          ParseOptions opts = {});

std::string render(const Nre &e);

NreClass classify(const Nre &e);

struct Diagnostic {
  enum class Kind { Scope, Open, UnderlineLocality };
  Kind kind;
  std::string message;
  Nre subterm;
};

struct WellformedReport {
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
  std::string str() const;
};

/// Scope condition, closedness (if requested) and underline locality.
WellformedReport check_wellformed(const Nre &e, bool require_closed = true);

NameSet free_names(const Nre &e);

/// Every name occurring anywhere in e, bound or free.
NameSet all_names(const Nre &e);

Nre apply_perm_expr(const Perm &p, const Nre &e);

bool alpha_eq(const Nre &a, const Nre &b);

/// h when e is an h-prefixed first-degree up-NRE (largest such h).
std::optional<int> classify_first_degree(const Nre &e);

/// Maximum nesting depth of binders.
int binder_depth(const Nre &e);

/// Letters occurring in e.
Alphabet letters_of(const Nre &e);

} // namespace nomre

#endif

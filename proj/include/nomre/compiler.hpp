#ifndef NOMRE_COMPILER_HPP
#define NOMRE_COMPILER_HPP

#include <stdexcept>
#include <vector>

#include "nomre/cda.hpp"
#include "nomre/names.hpp"
#include "nomre/nre.hpp"

namespace nomre {

/// C ‡ payload ‡ E.
template <class P> struct ContextTriple {
  std::vector<Name> pre;
  P payload;
  ExtantChronicle post;
};

/// An automaton whose initial and final states carry |C| registers; runs
/// start from the natural chronicle of C.
using CdaInContext = ContextTriple<Cda>;

class CompileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fresh name used to rename the bound name of a binder met under
/// pre-context `pre`: the least reserved name avoiding the context and
/// every name of the binder.
Name binder_name(const std::vector<Name> &pre, const Nre &binder);

/// 1-based register of name n in the pre-context.  Throws CompileError.
int context_index(const std::vector<Name> &pre, const Name &n);

/// Register a binder closes into: the top for a plain binder, otherwise
/// the register of the close name.
int close_index(const std::vector<Name> &pre, const Nre &binder);

/// Inductive construction over a pre-context.  Every free name of the
/// expression must occur in `t.pre`.
CdaInContext compile_in_context(const ContextTriple<Nre> &t);

/// Closed, well-formed expressions only.
Cda compile(const Nre &e);

} // namespace nomre

#endif

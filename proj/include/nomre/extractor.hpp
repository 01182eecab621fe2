#ifndef NOMRE_EXTRACTOR_HPP
#define NOMRE_EXTRACTOR_HPP

#include <vector>

#include "nomre/cda.hpp"
#include "nomre/nre.hpp"

namespace nomre {

/// States grouped by register count, with transitions split into those
/// that stay on a layer, ⋆ edges (up one layer) and Close edges (down one).
struct LayeredView {
  std::vector<std::vector<int>> layers; // state indices per layer
  std::vector<int> intra, up, down;     // transition indices
};

/// Throws InvalidAutomaton when validate fails.
LayeredView layered_view(const Cda &a);

/// ε-closure and subset construction over transition labels.  Every subset
/// reached lies on a single layer; ⋆ and Close moves are lifted like any
/// other label.  States are named d0, d1, ... in discovery order.
Cda determinize_layers(const Cda &a);

struct ExtractOptions {
  bool determinize = true;
};

/// An NRE over n1 .. nH with the language of a, built layer by layer from
/// the top.  Throws InvalidAutomaton.
Nre extract_expr(const Cda &a, ExtractOptions opt = {});

/// The canonical name n<i> used by extract_expr.
Name canonical_name(int i);

} // namespace nomre

#endif

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lifa/effects.hpp"
#include "lifa/term.hpp"

namespace lifa::galois {

// Finite-instance checks for abstraction pairs: monotonicity of both maps,
// extensiveness of gamma-after-alpha, reductiveness of alpha-after-gamma,
// and the commuting properties of the effect layers. Failures are data, not
// exceptions; each carries a witness.

struct Universe {
  std::vector<Term> elems;
  std::function<bool(const Term&, const Term&)> leq;
};

struct Report {
  int checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

using ValueMap = std::function<Term(const Term&)>;

// alpha : lo -> hi, gamma : hi -> lo over enumerated ordered universes.
Report checkGaloisPair(const Universe& lo, const Universe& hi, const ValueMap& alpha,
                       const ValueMap& gamma);

// A finite Galois connection between two enumerated payload spaces, given by
// its alpha; gamma is derived as the weakest inverse.
struct ValueGalois {
  Universe lo;
  Universe hi;
  ValueMap alpha;
  Term gammaJoinLo(const Term& hiElem) const;  // join of { x | alpha(x) leq hiElem }
};

enum class LayerKind { State, Nondet, Flow };

// Properties of one effect layer over the identity base:
//  (1) the layer's action on functions commutes with function abstraction,
//  (2) the induced state-space functor commutes likewise,
//  (3) the transfer/embed pair is itself a Galois connection, and the
//      state-space action of a transferred function under-approximates the
//      transferred action (the asymmetric commuting inequality).
Report checkLayerProperties(LayerKind layer, const ValueGalois& payloads,
                            const Universe& cellUniverse);

// Transfer/embed pair of a built stack checked as a Galois connection over
// enumerated mini-universes of payloads and cell values.
Report checkTransferPair(const fx::Monad& m, const std::vector<Term>& payloads,
                         const std::vector<std::vector<Term>>& cellUniverses);

}  // namespace lifa::galois

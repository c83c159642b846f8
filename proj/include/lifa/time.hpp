#pragma once

#include <optional>

#include "lifa/term.hpp"

namespace lifa::timeabs {

// Execution contexts are sequences of recently visited expression labels,
// newest first. Bounded sequences (length <= k) give call-site sensitivity;
// the unbounded sequence recovers concrete freshness. Stack addresses pair
// the label a frame waits on with the context at push time, keeping the
// address space finite while separating frames pushed by distinct sites.

inline Term initialTime() { return Term::seq({}); }

inline Term haltAddr() { return Term::sym("#halt"); }

constexpr int kSyntheticLabel = -1;  // label used when ticking computed-value results

// tick(e, stack-addr, t): cons the stepped expression's label, then truncate.
// The stack address parameter is part of the interface; this policy ignores it.
inline Term tickTime(int label, const Term& /*stackAddr*/, const Term& t, std::optional<int> k) {
  if (k && *k == 0) return Term::seq({});
  TermVec xs;
  xs.push_back(Term::integer(label));
  const TermVec& old = t.items();
  std::size_t keep = k ? static_cast<std::size_t>(*k - 1) : old.size();
  for (std::size_t i = 0; i < old.size() && i < keep; ++i) xs.push_back(old[i]);
  return Term::seq(std::move(xs));
}

inline Term stackAddr(int entryLabel, const Term& time) {
  return Term::seq({Term::integer(entryLabel), time});
}

inline Term bindAddr(std::string_view var, const Term& time) {
  return Term::seq({Term::sym(var), time});
}

// Truncation of an existing context to k entries (abstraction on times).
inline Term truncateTime(const Term& t, std::optional<int> k) {
  if (!k) return t;
  const TermVec& old = t.items();
  TermVec xs;
  for (std::size_t i = 0; i < old.size() && i < static_cast<std::size_t>(*k); ++i)
    xs.push_back(old[i]);
  return Term::seq(std::move(xs));
}

}  // namespace lifa::timeabs

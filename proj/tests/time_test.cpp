#include <doctest.h>

#include <set>

#include "lifa/time.hpp"

using namespace lifa;
using namespace lifa::timeabs;

TEST_CASE("unbounded ticks grow by one") {
  Term t = initialTime();
  CHECK(t == Term::seq({}));
  t = tickTime(4, haltAddr(), t, std::nullopt);
  CHECK(t == Term::seq({Term::integer(4)}));
  t = tickTime(7, haltAddr(), t, std::nullopt);
  CHECK(t == Term::seq({Term::integer(7), Term::integer(4)}));
  // strictly increasing length along any trace
  Term u = initialTime();
  std::size_t last = 0;
  for (int i = 0; i < 5; ++i) {
    u = tickTime(i, haltAddr(), u, std::nullopt);
    CHECK(u.items().size() == last + 1);
    last = u.items().size();
  }
}

TEST_CASE("bounded ticks truncate to the most recent entries") {
  CHECK(tickTime(9, haltAddr(), Term::seq({Term::integer(1)}), 0) == Term::seq({}));
  CHECK(tickTime(7, haltAddr(), Term::seq({Term::integer(2)}), 1) ==
        Term::seq({Term::integer(7)}));
  Term two = Term::seq({Term::integer(5), Term::integer(4)});
  CHECK(tickTime(6, haltAddr(), two, 2) == Term::seq({Term::integer(6), Term::integer(5)}));
}

TEST_CASE("bounded contexts range over a finite set") {
  // every tick result over labels {0,1} with k=2 stays within length 2
  std::set<Term> seen{initialTime()};
  for (int round = 0; round < 6; ++round) {
    std::set<Term> next = seen;
    for (const Term& t : seen)
      for (int l : {0, 1}) next.insert(tickTime(l, haltAddr(), t, 2));
    seen = next;
  }
  CHECK(seen.size() == 7);  // 1 + 2 + 4 contexts of length <= 2
  for (const Term& t : seen) CHECK(t.items().size() <= 2);
}

TEST_CASE("truncation commutes with ticking") {
  // abstraction of a concrete context then ticking equals ticking concretely
  // then abstracting: the coherence the soundness mapping relies on
  for (int k : {0, 1, 2, 3}) {
    Term conc = initialTime();
    Term abs = initialTime();
    for (int l : {3, 1, 4, 1, 5}) {
      Term tickedAbs = tickTime(l, haltAddr(), truncateTime(conc, k), k);
      conc = tickTime(l, haltAddr(), conc, std::nullopt);
      abs = tickTime(l, haltAddr(), abs, k);
      CHECK(truncateTime(conc, k) == tickedAbs);
      CHECK(abs == tickedAbs);
    }
  }
}

TEST_CASE("stack addresses pair the entry site with the context") {
  Term t = Term::seq({Term::integer(3)});
  CHECK(stackAddr(7, t) != stackAddr(8, t));
  CHECK(stackAddr(7, t) != haltAddr());
  CHECK(bindAddr("x", t) != bindAddr("y", t));
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lifa/domain.hpp"
#include "lifa/effects.hpp"
#include "lifa/interp.hpp"
#include "lifa/syntax.hpp"

namespace lifa::engine {

enum class DataStore { PathSensitive, FlowSensitive, FlowInsensitive };
enum class StackStore { PathSensitive, FlowInsensitive };

std::optional<DataStore> dataStoreFromName(std::string_view);    // path-sen|flow-sen|flow-insen
std::optional<StackStore> stackStoreFromName(std::string_view);  // path-sen|flow-insen
const char* dataStoreName(DataStore);
const char* stackStoreName(StackStore);

struct Config {
  domain::DomainKind domain = domain::DomainKind::ConstSet;
  std::optional<int> k = 0;  // nullopt = concrete (unbounded contexts)
  DataStore dataStore = DataStore::PathSensitive;
  StackStore stackStore = StackStore::PathSensitive;
  bool gc = false;
  std::optional<int64_t> input;
  int64_t fuel = 100000;

  bool concrete() const { return !k.has_value(); }
  std::string describe() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const Config& cfg, const syntax::Program& p);

// A built analysis: the composed effect stack plus the pieces needed to run
// and decode it.
class Analysis {
 public:
  Analysis(const syntax::Program& p, const Config& cfg);

  const fx::Monad& monad() const { return *monad_; }
  const domain::Domain& dom() const { return dom_; }
  const Config& config() const { return cfg_; }

  Term inject() const;
  Term transfer(const Term& sigma) const;  // one application of the induced map

  struct RunResult {
    Term sigma;
    int64_t iterations = 0;
    bool fuelExhausted = false;
  };
  // Least fixpoint of  X -> X ⊔ inject ⊔ transfer(X), with a monotonicity
  // check on every iterate.
  RunResult run() const;

  // One world = one control point with its cell views.
  struct World {
    Term payload;
    Term env;
    Term stackAddr;
    Term time;
    Term stackStore;
    Term store;
  };
  std::vector<World> worlds(const Term& sigma) const;

  // Rebuilds the sigma element a single world denotes (used to embed
  // abstracted oracle states for comparisons).
  Term embedWorld(const World& w) const;

  interp::Context interpContext() const;

 private:
  const syntax::Program& program_;
  Config cfg_;
  domain::Domain dom_;
  fx::MonadPtr monad_;
  mutable fx::StepMemo memo_;
};

struct Facts {
  // label -> variable -> joined value
  std::map<int, std::map<std::string, Term>> vars;
  // label -> distinct variable assignments (worlds), sorted
  std::map<int, std::vector<std::map<std::string, Term>>> worldAssignments;
  std::map<int, int> reachCount;  // raw configurations per label
  std::optional<Term> result;     // join of values at final configurations
};

Facts report(const Analysis& a, const Term& sigma);

}  // namespace lifa::engine

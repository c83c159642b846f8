#include "lifa/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lifa/abstraction.hpp"
#include "lifa/engine.hpp"
#include "lifa/oracle.hpp"
#include "lifa/syntax.hpp"

namespace lifa::cli {

namespace {

using nlohmann::ordered_json;

ordered_json renderValue(domain::DomainKind kind, const Term& v) {
  ordered_json j;
  const Term& ints = domain::valueInts(v);
  switch (kind) {
    case domain::DomainKind::Concrete: {
      std::vector<int64_t> xs;
      for (const Term& i : ints.items()) xs.push_back(i.asInt());
      j["int"] = xs;
      break;
    }
    case domain::DomainKind::Sign: {
      std::vector<std::string> xs;
      for (const Term& s : ints.items()) xs.push_back(s.symName());
      j["int"] = xs;
      break;
    }
    case domain::DomainKind::ConstSet: {
      const IntSetAbs& s = ints.asIntSet();
      if (s.kind() == IntSetAbs::Kind::NonZero) j["int"] = "nz";
      else if (s.kind() == IntSetAbs::Kind::Any) j["int"] = "top";
      else {
        ordered_json fin;
        fin["fin"] = s.elems();
        j["int"] = fin;
      }
      break;
    }
  }
  std::vector<int> lams;
  for (const Term& clo : domain::valueClosures(v).items())
    lams.push_back(domain::closureLambda(clo));
  std::sort(lams.begin(), lams.end());
  j["clos"] = lams;
  return j;
}

std::string renderValueText(domain::DomainKind kind, const Term& v) {
  ordered_json j = renderValue(kind, v);
  return j.dump();
}

struct Options {
  std::string path;
  std::string domain = "const";
  int kcfa = 0;
  bool gc = false;
  std::string dataStore = "path-sen";
  std::string stackStore = "path-sen";
  bool concrete = false;
  std::optional<int64_t> input;
  int64_t fuel = 100000;
  std::string format = "text";
};

int failUsage(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << "\n";
  return 1;
}

ordered_json factsJson(const engine::Config& cfg, const engine::Facts& facts,
                       int64_t iterations, std::size_t sigmaSize) {
  ordered_json labels = ordered_json::object();
  for (const auto& [label, vars] : facts.vars) {
    ordered_json lj;
    ordered_json vj = ordered_json::object();
    for (const auto& [name, value] : vars) vj[name] = renderValue(cfg.domain, value);
    lj["vars"] = vj;
    auto worlds = facts.worldAssignments.find(label);
    lj["worlds"] = worlds == facts.worldAssignments.end()
                       ? 0
                       : static_cast<int>(worlds->second.size());
    labels[std::to_string(label)] = lj;
  }
  // labels that are reachable but bind no variables still report world counts
  for (const auto& [label, n] : facts.reachCount) {
    std::string key = std::to_string(label);
    if (!labels.contains(key)) {
      ordered_json lj;
      lj["vars"] = ordered_json::object();
      auto worlds = facts.worldAssignments.find(label);
      lj["worlds"] = worlds == facts.worldAssignments.end()
                         ? 0
                         : static_cast<int>(worlds->second.size());
      labels[key] = lj;
    }
  }
  ordered_json meta;
  meta["iterations"] = iterations;
  meta["sigma_size"] = sigmaSize;
  meta["config"] = cfg.describe();
  if (facts.result) meta["result"] = renderValue(cfg.domain, *facts.result);
  ordered_json root;
  root["labels"] = labels;
  root["meta"] = meta;
  return root;
}

void printText(std::ostream& out, const engine::Config& cfg, const engine::Facts& facts,
               int64_t iterations, std::size_t sigmaSize) {
  out << "config: " << cfg.describe() << "\n";
  out << "iterations: " << iterations << "  sigma-size: " << sigmaSize << "\n";
  if (facts.result)
    out << "result: " << renderValueText(cfg.domain, *facts.result) << "\n";
  for (const auto& [label, vars] : facts.vars) {
    out << "label " << label;
    auto worlds = facts.worldAssignments.find(label);
    if (worlds != facts.worldAssignments.end()) out << " (worlds: " << worlds->second.size() << ")";
    out << "\n";
    for (const auto& [name, value] : vars)
      out << "  " << name << " = " << renderValueText(cfg.domain, value) << "\n";
    if (worlds != facts.worldAssignments.end() && worlds->second.size() > 1) {
      int i = 0;
      for (const auto& assignment : worlds->second) {
        out << "  world " << i++ << ":";
        for (const auto& [name, value] : assignment)
          out << " " << name << "=" << renderValueText(cfg.domain, value);
        out << "\n";
      }
    }
  }
}

std::size_t sigmaSizeOf(const engine::Analysis& a, const Term& sigma) {
  return a.worlds(sigma).size();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"static analyzer for a small applied lambda calculus"};
  Options o;
  app.add_option("program", o.path, "program file")->required();
  app.add_option("--domain", o.domain, "abstract domain: sign|const");
  app.add_option("--kcfa", o.kcfa, "call-site context depth (k)");
  app.add_flag("--gc", o.gc, "collect unreachable bindings during stepping");
  app.add_option("--data-store", o.dataStore, "path-sen|flow-sen|flow-insen");
  app.add_option("--stack-store", o.stackStore, "path-sen|flow-insen");
  app.add_flag("--concrete", o.concrete, "run the concrete collecting semantics");
  app.add_option("--input", o.input, "integer read by 'input' in concrete runs");
  app.add_option("--fuel", o.fuel, "iteration budget");
  app.add_option("--format", o.format, "text|json");
  bool mcfa = false, ocfa = false;
  app.add_flag("--mcfa", mcfa, "not supported");
  app.add_flag("--ocfa", ocfa, "not supported");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    return failUsage(err, e.what());
  }
  if (mcfa || ocfa) return failUsage(err, "--mcfa/--ocfa are not supported");
  if (o.kcfa < 0) return failUsage(err, "--kcfa must be non-negative");
  if (o.format != "text" && o.format != "json") return failUsage(err, "--format must be text|json");

  std::ifstream file(o.path);
  if (!file) return failUsage(err, "cannot read " + o.path);
  std::stringstream buf;
  buf << file.rdbuf();

  engine::Config cfg;
  cfg.gc = o.gc;
  cfg.input = o.input;
  cfg.fuel = o.fuel;
  if (o.concrete) {
    cfg.domain = domain::DomainKind::Concrete;
    cfg.k = std::nullopt;
  } else {
    auto dk = domain::domainFromName(o.domain);
    if (!dk) return failUsage(err, "unknown domain: " + o.domain);
    cfg.domain = *dk;
    cfg.k = o.kcfa;
    auto ds = engine::dataStoreFromName(o.dataStore);
    if (!ds) return failUsage(err, "unknown data store: " + o.dataStore);
    cfg.dataStore = *ds;
    auto ss = engine::stackStoreFromName(o.stackStore);
    if (!ss) return failUsage(err, "unknown stack store: " + o.stackStore);
    cfg.stackStore = *ss;
  }

  try {
    syntax::Program program = syntax::parseProgram(buf.str());
    engine::Analysis analysis(program, cfg);
    engine::Analysis::RunResult res;
    if (o.concrete) {
      // Concrete runs go through the relational semantics directly.
      oracle::CollectResult run = oracle::collect(program, o.input.value_or(0), cfg.gc, cfg.fuel);
      res.sigma = abstraction::embedConcreteRun(program, run, analysis);
      res.iterations = static_cast<int64_t>(run.states.size());
      res.fuelExhausted = run.fuelExhausted;
    } else {
      res = analysis.run();
    }
    engine::Facts facts = engine::report(analysis, res.sigma);
    std::size_t size = sigmaSizeOf(analysis, res.sigma);
    if (o.format == "json") {
      out << factsJson(cfg, facts, res.iterations, size).dump(2) << "\n";
    } else {
      printText(out, cfg, facts, res.iterations, size);
    }
    if (res.fuelExhausted) {
      err << "fuel exhausted after " << res.iterations << " iterations\n";
      return 2;
    }
    return 0;
  } catch (const syntax::ParseError& e) {
    return failUsage(err, e.what());
  } catch (const engine::ConfigError& e) {
    return failUsage(err, e.what());
  } catch (const std::exception& e) {
    return failUsage(err, e.what());
  }
}

}  // namespace lifa::cli

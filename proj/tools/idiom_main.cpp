#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "idiom/laws.hpp"
#include "idiom/normalize.hpp"
#include "idiom/oracle.hpp"
#include "idiom/parse.hpp"

namespace {

using namespace idiom;
using json = nlohmann::ordered_json;

struct CliConfig {
  bool eta = true;
  std::size_t arity_cap = 16;
  std::size_t step_budget = 1'000'000;
  std::uint64_t seed = 0;
  std::string output = "text";

  Options options() const { return Options{eta, arity_cap, step_budget}; }
  bool machine() const { return output == "machine"; }
};

void emit_run_header(const CliConfig& cfg, const std::string& command) {
  json rec;
  rec["type"] = "run";
  rec["command"] = command;
  rec["eta"] = cfg.eta;
  rec["arity_cap"] = cfg.arity_cap;
  rec["step_budget"] = cfg.step_budget;
  rec["seed"] = cfg.seed;
  rec["output"] = cfg.output;
  std::cout << rec.dump() << "\n";
}

std::string read_input(const std::string& arg) {
  namespace fs = std::filesystem;
  bool is_file = arg.size() > 4 && arg.substr(arg.size() - 4) == ".idm";
  if (!is_file) {
    std::error_code ec;
    is_file = fs::is_regular_file(arg, ec);
  }
  if (!is_file) return arg;
  std::ifstream in(arg, std::ios::binary);
  if (!in) throw Error("cannot open input file '" + arg + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_trace_text(const DerivationTrace& t) {
  std::cout << "initial: " << print_expr(t.initial) << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const RewriteStep& s = t.steps[i];
    std::cout << "  " << i << ". " << law_name(s) << " at "
              << position_to_string(s.position) << ": "
              << print_expr(s.after) << "\n";
  }
  std::cout << "canonical: " << print_expr(t.final_form.to_lift()) << "\n";
}

int cmd_normalize(const CliConfig& cfg, const std::string& input, bool trace) {
  ExprPtr e = parse_expr(read_input(input), ParseOpts{cfg.arity_cap});
  auto [canon, deriv] = canonicalize(e, cfg.options());
  if (cfg.machine()) {
    emit_run_header(cfg, "normalize");
    if (trace) std::cout << trace_to_jsonl(deriv, cfg.options());
    json rec;
    rec["type"] = "canonical";
    rec["arity"] = canon.leaves.size();
    rec["head"] = print_term(canon.head);
    rec["leaves"] = canon.leaves;
    rec["expr"] = print_expr(canon.to_lift());
    std::cout << rec.dump() << "\n";
  } else {
    if (trace) print_trace_text(deriv);
    else std::cout << print_expr(canon.to_lift()) << "\n";
  }
  return 0;
}

int cmd_equiv(const CliConfig& cfg, const std::string& a, const std::string& b,
              bool trace) {
  ExprPtr ea = parse_expr(read_input(a), ParseOpts{cfg.arity_cap});
  ExprPtr eb = parse_expr(read_input(b), ParseOpts{cfg.arity_cap});
  EquivalenceResult r = equivalent(ea, eb, cfg.options());
  if (cfg.machine()) {
    emit_run_header(cfg, "equiv");
    if (trace) {
      std::cout << trace_to_jsonl(r.lhs, cfg.options());
      std::cout << trace_to_jsonl(r.rhs, cfg.options());
    }
    json rec;
    rec["type"] = "verdict";
    rec["verdict"] = r.equal ? "equal" : "distinct";
    rec["lhs"] = print_expr(r.lhs.final_form.to_lift());
    rec["rhs"] = print_expr(r.rhs.final_form.to_lift());
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << (r.equal ? "equal" : "distinct") << "\n";
    std::cout << "  lhs canonical: " << print_expr(r.lhs.final_form.to_lift()) << "\n";
    std::cout << "  rhs canonical: " << print_expr(r.rhs.final_form.to_lift()) << "\n";
    if (trace) {
      std::cout << "lhs derivation:\n";
      print_trace_text(r.lhs);
      std::cout << "rhs derivation:\n";
      print_trace_text(r.rhs);
    }
  }
  return r.equal ? 0 : 1;
}

int cmd_eval(const CliConfig& cfg, const std::string& expr_text,
             const std::string& inst_name, const std::string& env_path) {
  InstanceKind kind;
  if (!instance_from_name(inst_name, kind))
    throw Error("unknown instance '" + inst_name +
                "' (expected identity, option, list or writer)");
  ExprPtr e = parse_expr(read_input(expr_text), ParseOpts{cfg.arity_cap});
  EffectEnv env;
  if (!env_path.empty()) {
    std::ifstream in(env_path, std::ios::binary);
    if (!in) throw Error("cannot open environment file '" + env_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    env = parse_env_file(kind, buf.str());
  }
  Effect result = eval_expr(e, kind, env);
  if (cfg.machine()) {
    emit_run_header(cfg, "eval");
    json rec;
    rec["type"] = "value";
    rec["instance"] = instance_name(kind);
    rec["value"] = show_effect(result);
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << show_effect(result) << "\n";
  }
  return 0;
}

int cmd_expand(const CliConfig& cfg, const std::string& expr_text) {
  ExprPtr e = parse_expr(read_input(expr_text), ParseOpts{cfg.arity_cap});
  ExprPtr expanded = expand_lift(e);
  if (cfg.machine()) {
    emit_run_header(cfg, "expand");
    json rec;
    rec["type"] = "expanded";
    rec["expr"] = print_expr(expanded);
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << print_expr(expanded) << "\n";
  }
  return 0;
}

int cmd_laws(const CliConfig& cfg, const std::string& emit_dir) {
  namespace fs = std::filesystem;
  Options opts = cfg.options();
  bool machine = cfg.machine();
  if (machine) emit_run_header(cfg, "laws");
  bool all_ok = true;

  if (!emit_dir.empty()) fs::create_directories(emit_dir);

  for (const LawCase& law : builtin_corpus()) {
    LawResult r = check_law(law, opts);
    bool oracle_ok = true;
    std::string detail;
    for (InstanceKind kind : kAllInstances)
      oracle_ok = oracle_ok &&
                  check_law_oracle(law, kind, 20, cfg.seed, opts, &detail);
    bool ok = r.equal && oracle_ok;
    all_ok = all_ok && ok;
    std::size_t steps = r.lhs_trace.steps.size() + r.rhs_trace.steps.size();
    if (machine) {
      json rec;
      rec["type"] = "law";
      rec["name"] = law.name;
      rec["family"] = law.family;
      rec["verdict"] = r.equal ? "equal" : "distinct";
      rec["oracle"] = oracle_ok ? "ok" : "mismatch";
      rec["steps"] = steps;
      std::cout << rec.dump() << "\n";
    } else {
      std::cout << (ok ? "ok  " : "FAIL") << "  " << law.name << "  "
                << (r.equal ? "equal" : "distinct") << "  steps=" << steps;
      if (!oracle_ok) std::cout << "  oracle: " << detail;
      std::cout << "\n";
    }
    if (!emit_dir.empty()) {
      std::ofstream(emit_dir + "/" + law.name + "_lhs.trace")
          << trace_to_jsonl(r.lhs_trace, opts);
      std::ofstream(emit_dir + "/" + law.name + "_rhs.trace")
          << trace_to_jsonl(r.rhs_trace, opts);
    }
  }

  for (const MatrixCell& cell : composition_matrix(3, 3, 3, 10, cfg.seed, opts)) {
    bool ok = cell.symbolic_equal && cell.oracle_equal;
    all_ok = all_ok && ok;
    if (machine) {
      json rec;
      rec["type"] = "cell";
      rec["n"] = cell.n;
      rec["k"] = cell.k;
      rec["m"] = cell.m;
      rec["symbolic"] = cell.symbolic_equal;
      rec["oracle"] = cell.oracle_equal;
      rec["tag"] = cell.tag;
      std::cout << rec.dump() << "\n";
    } else {
      std::cout << (ok ? "ok  " : "FAIL") << "  composition(" << cell.n << ","
                << cell.k << "," << cell.m << ")";
      if (!cell.tag.empty()) std::cout << "  [" << cell.tag << "]";
      std::cout << "\n";
    }
  }

  if (machine) {
    json rec;
    rec["type"] = "summary";
    rec["ok"] = all_ok;
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << (all_ok ? "all laws hold" : "law failures detected") << "\n";
  }
  return all_ok ? 0 : 1;
}

int cmd_fuzz(const CliConfig& cfg, std::size_t count, std::size_t envs) {
  FuzzReport report = soundness_fuzz(count, envs, cfg.seed, cfg.options());
  if (cfg.machine()) {
    emit_run_header(cfg, "fuzz");
    json rec;
    rec["type"] = "fuzz";
    rec["count"] = report.count;
    rec["with_effects"] = report.with_effects;
    rec["comparisons"] = report.comparisons;
    rec["ok"] = report.ok;
    if (!report.ok) {
      rec["failing_seed"] = report.failing_seed;
      rec["message"] = report.message;
    }
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << "generated " << report.count << " expressions ("
              << report.with_effects << " with effect variables), "
              << report.comparisons << " comparisons\n";
    if (report.ok) {
      std::cout << "soundness holds: evaluation is preserved by normalization\n";
    } else {
      std::cout << "FAIL at seed " << report.failing_seed << "\n"
                << report.message << "\n";
    }
  }
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "idiom: normalizer, equivalence checker and law suite for applicative "
      "expressions"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand too

  CliConfig cfg;
  if (const char* env_seed = std::getenv("IDIOM_SEED"))
    cfg.seed = std::strtoull(env_seed, nullptr, 10);

  app.add_flag("--eta,!--no-eta", cfg.eta,
               "eta-reduce heads during normalization (default on)");
  app.add_option("--arity-cap", cfg.arity_cap, "maximum liftA arity")
      ->check(CLI::PositiveNumber);
  app.add_option("--step-budget", cfg.step_budget,
                 "reduction budget before reporting divergence")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for sampling (default $IDIOM_SEED)");
  app.add_option("--output", cfg.output, "text or machine (JSON lines)")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string norm_input;
  bool norm_trace = false;
  CLI::App* norm = app.add_subcommand("normalize", "print the canonical form");
  norm->add_option("input", norm_input, "expression or .idm file")->required();
  norm->add_flag("--trace", norm_trace, "print the derivation");

  std::string eq_a, eq_b;
  bool eq_trace = false;
  CLI::App* eq = app.add_subcommand(
      "equiv", "decide equivalence (exit 0 equal, 1 distinct, 2 errors)");
  eq->add_option("lhs", eq_a, "first expression or .idm file")->required();
  eq->add_option("rhs", eq_b, "second expression or .idm file")->required();
  eq->add_flag("--trace", eq_trace, "print both derivations");

  std::string ev_expr, ev_inst, ev_env;
  CLI::App* ev = app.add_subcommand("eval", "evaluate under a concrete instance");
  ev->add_option("expr", ev_expr, "expression or .idm file")->required();
  ev->add_option("--instance", ev_inst, "identity, option, list or writer")
      ->required();
  ev->add_option("--env", ev_env, "file of `name = literal` bindings");

  std::string laws_dir;
  CLI::App* laws = app.add_subcommand(
      "laws", "run the built-in law corpus and the composition matrix");
  laws->add_option("--emit-traces", laws_dir, "write per-case trace files here");

  std::size_t fz_count = 1000, fz_envs = 5;
  CLI::App* fz = app.add_subcommand("fuzz", "oracle-soundness fuzzing");
  fz->add_option("--count", fz_count, "number of generated expressions");
  fz->add_option("--envs", fz_envs, "environments per instance");

  std::string ex_expr;
  CLI::App* ex =
      app.add_subcommand("expand", "unfold liftA nodes into pure/<*> form");
  ex->add_option("expr", ex_expr, "expression or .idm file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed()) return cmd_normalize(cfg, norm_input, norm_trace);
    if (eq->parsed()) return cmd_equiv(cfg, eq_a, eq_b, eq_trace);
    if (ev->parsed()) return cmd_eval(cfg, ev_expr, ev_inst, ev_env);
    if (laws->parsed()) return cmd_laws(cfg, laws_dir);
    if (fz->parsed()) return cmd_fuzz(cfg, fz_count, fz_envs);
    if (ex->parsed()) return cmd_expand(cfg, ex_expr);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n  span: bytes " << e.span.begin
              << ".." << e.span.end << " (line " << e.span.line << ", column "
              << e.span.column << ")\n";
    if (!e.expected.empty()) {
      std::cerr << "  expected:";
      for (const std::string& tok : e.expected) std::cerr << " " << tok;
      std::cerr << "\n";
    }
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ArityCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

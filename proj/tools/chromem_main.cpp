#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chromem/arena.hpp"
#include "chromem/chromatize.hpp"
#include "chromem/errors.hpp"
#include "chromem/lowerbound.hpp"
#include "chromem/play_graph.hpp"
#include "chromem/search.hpp"
#include "chromem/strategy.hpp"

namespace {

using chromem::Arena;
using chromem::Strategy;
using ordered_json = nlohmann::ordered_json;

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

/// Per-run record: command echo, input digests, command results, timing.
/// Digest-stable for identical inputs; printed as JSON under --json.
struct RunReport {
  ordered_json doc;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  explicit RunReport(int argc, char** argv) {
    std::string echo;
    for (int i = 0; i < argc; ++i) {
      if (i) echo += ' ';
      echo += argv[i];
    }
    doc["command"] = echo;
    doc["inputs"] = ordered_json::array();
  }

  std::string load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw chromem::FormatError("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string bytes = buffer.str();
    ordered_json entry;
    entry["path"] = path;
    entry["digest"] = fnv1a_digest(bytes);
    doc["inputs"].push_back(std::move(entry));
    return bytes;
  }

  void emit(bool as_json) {
    if (!as_json) return;
    doc["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    std::cout << doc.dump(2) << "\n";
  }
};

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw chromem::FormatError("cannot write file: " + path);
  out << bytes;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

std::vector<int> parse_runs(const std::string& csv) {
  std::vector<int> runs;
  for (const std::string& item : split_csv(csv)) {
    try {
      runs.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw chromem::FormatError("not an integer: " + item);
    }
  }
  return runs;
}

std::vector<int> start_nodes_or_all(const Arena& arena, const std::string& csv) {
  if (csv.empty()) {
    std::vector<int> all(static_cast<size_t>(arena.node_count()));
    for (int v = 0; v < arena.node_count(); ++v) all[static_cast<size_t>(v)] = v;
    return all;
  }
  return chromem::start_set(arena, split_csv(csv));
}

ordered_json word_json(const Arena& arena, std::span<const int> word) {
  ordered_json arr = ordered_json::array();
  for (int c : word) arr.push_back(arena.color_symbol(c));
  return arr;
}

int cmd_validate(RunReport& report, const std::string& arena_path, bool json_out) {
  Arena arena = chromem::parse_arena_unchecked(report.load(arena_path));
  std::vector<std::string> violations = chromem::validate(arena);
  report.doc["valid"] = violations.empty();
  report.doc["violations"] = violations;
  if (!json_out) {
    if (violations.empty()) {
      std::cout << "valid\n";
    } else {
      for (const std::string& v : violations) std::cout << v << "\n";
    }
  }
  return violations.empty() ? 0 : 1;
}

int cmd_transform(RunReport& report, const std::string& arena_path,
                  const std::string& strategy_path, const std::string& from_csv,
                  const std::string& mode, const std::string& preorder_path,
                  const std::string& out_path, bool json_out) {
  Arena arena = chromem::parse_arena(report.load(arena_path));
  Strategy s1 = chromem::parse_strategy(report.load(strategy_path), arena);
  int n = arena.node_count();
  int q = s1.memory.state_count();
  auto [winning_bound, preference_bound] = chromem::nominal_bounds(n, q);

  chromem::ChromatizeResult out;
  chromem::BigInt bound;
  bool selfcheck = true;
  if (mode == "winning") {
    std::vector<int> start = start_nodes_or_all(arena, from_csv);
    out = chromem::chromatize_winning(arena, s1, start);
    bound = winning_bound;
    chromem::PlayGraph left = chromem::build_play_graph(arena, out.strategy, start);
    chromem::PlayGraph right = chromem::build_play_graph(arena, s1, start);
    selfcheck = chromem::trace_inclusion(left, right).holds;
  } else {
    if (preorder_path.empty())
      throw chromem::FormatError("preference mode requires --preorder");
    chromem::NodePreorder preorder = chromem::parse_preorder(report.load(preorder_path), arena);
    out = chromem::chromatize_preference(arena, s1, preorder);
    bound = preference_bound;
    for (int v = 0; v < arena.node_count() && selfcheck; ++v) {
      std::vector<int> left_start{v};
      std::vector<int> right_start;
      for (int u = 0; u < arena.node_count(); ++u)
        if (preorder.class_of[static_cast<size_t>(u)] >= preorder.class_of[static_cast<size_t>(v)])
          right_start.push_back(u);
      chromem::PlayGraph left = chromem::build_play_graph(arena, out.strategy, left_start);
      chromem::PlayGraph right = chromem::build_play_graph(arena, s1, right_start);
      selfcheck = chromem::trace_inclusion(left, right).holds;
    }
  }

  write_file(out_path, chromem::serialize(out.strategy, arena));
  report.doc["mode"] = mode;
  report.doc["reachable"] = out.reachable_states();
  report.doc["bound"] = bound.str();
  report.doc["selfcheck"] = selfcheck;
  report.doc["out"] = out_path;
  if (!json_out) {
    std::cout << "reachable=" << out.reachable_states() << " bound=" << bound.str()
              << " selfcheck=" << (selfcheck ? "pass" : "FAIL") << "\n";
    std::cout << "wrote " << out_path << "\n";
  }
  if (!selfcheck) std::cerr << "error: post-hoc inclusion self-check failed\n";
  return selfcheck ? 0 : 1;
}

int cmd_verify(RunReport& report, const std::string& arena_path, const std::string& left_path,
               const std::string& right_path, const std::string& left_from,
               const std::string& right_from, bool json_out) {
  Arena arena = chromem::parse_arena(report.load(arena_path));
  Strategy left = chromem::parse_strategy(report.load(left_path), arena);
  Strategy right = chromem::parse_strategy(report.load(right_path), arena);
  chromem::PlayGraph lg =
      chromem::build_play_graph(arena, left, start_nodes_or_all(arena, left_from));
  chromem::PlayGraph rg =
      chromem::build_play_graph(arena, right, start_nodes_or_all(arena, right_from));
  chromem::InclusionVerdict verdict = chromem::trace_inclusion(lg, rg);
  report.doc["holds"] = verdict.holds;
  report.doc["counterexample"] =
      verdict.holds ? ordered_json(nullptr) : word_json(arena, *verdict.counterexample);
  if (!json_out) {
    if (verdict.holds) {
      std::cout << "inclusion holds\n";
    } else {
      std::cout << "counterexample: " << chromem::format_word(arena, *verdict.counterexample)
                << "\n";
    }
  }
  return verdict.holds ? 0 : 1;
}

int cmd_lowerbound_gen(RunReport& report, int n, int q, const std::string& out_dir,
                       bool json_out) {
  chromem::LowerBoundInstance inst = chromem::make_lower_bound_instance(n, q);
  std::string suffix = "_n" + std::to_string(n) + "_q" + std::to_string(q) + ".json";
  std::string arena_path = out_dir + "/arena" + suffix;
  std::string strategy_path = out_dir + "/strategy" + suffix;
  write_file(arena_path, chromem::serialize(inst.arena));
  write_file(strategy_path, chromem::serialize(inst.s1, inst.arena));
  report.doc["nodes"] = inst.arena.node_count();
  report.doc["edges"] = inst.arena.edge_count();
  report.doc["arena"] = arena_path;
  report.doc["strategy"] = strategy_path;
  if (!json_out) {
    std::cout << "wrote " << arena_path << " (" << inst.arena.node_count() << " nodes, "
              << inst.arena.edge_count() << " edges)\n";
    std::cout << "wrote " << strategy_path << " (" << q << " states)\n";
  }
  return 0;
}

int cmd_lowerbound_words(RunReport& report, const std::string& k1_csv, const std::string& k2_csv,
                         const std::string& kappa_csv, const std::string& value_word, int n_opt,
                         int q, bool json_out) {
  if (!kappa_csv.empty()) {
    std::vector<int> runs = parse_runs(kappa_csv);
    std::string word = chromem::block_word(runs);
    report.doc["word"] = word;
    if (!json_out) std::cout << word << "\n";
    return 0;
  }
  if (!value_word.empty()) {
    if (n_opt < 1 || q < 1) throw chromem::FormatError("--value requires -n and -q");
    int value = chromem::counter_value(value_word, n_opt, q);
    report.doc["value"] = value;
    if (!json_out) std::cout << value << "\n";
    return 0;
  }
  if (k1_csv.empty() || k2_csv.empty())
    throw chromem::FormatError("words: provide --k1 and --k2, or --kappa, or --value");
  if (q < 1) throw chromem::FormatError("words: -q is required");
  std::vector<int> k1 = parse_runs(k1_csv);
  std::vector<int> k2 = parse_runs(k2_csv);
  int n = static_cast<int>(k1.size());
  std::string word = chromem::distinguishing_word(k1, k2, n, q);
  report.doc["word"] = word;
  report.doc["left_value"] = chromem::counter_value(chromem::block_word(k1) + word, n, q);
  report.doc["right_value"] = chromem::counter_value(chromem::block_word(k2) + word, n, q);
  if (!json_out) std::cout << word << "\n";
  return 0;
}

int cmd_lowerbound_separate(RunReport& report, const std::string& strategy_path,
                            const std::string& arena_path, int n, int q, bool json_out) {
  Arena arena;
  if (arena_path.empty()) {
    arena = chromem::make_lower_bound_instance(n, q).arena;
  } else {
    arena = chromem::parse_arena(report.load(arena_path));
  }
  Strategy s = chromem::parse_strategy(report.load(strategy_path), arena);
  bool separated = chromem::verify_separation(s.memory, arena, n, q);
  report.doc["separated"] = separated;
  if (!json_out) std::cout << (separated ? "separation holds\n" : "separation fails\n");
  return separated ? 0 : 1;
}

int cmd_search(RunReport& report, const std::string& arena_path, const std::string& reference_path,
               const std::string& from_csv, int max_states, bool general,
               std::uint64_t max_candidates, unsigned threads, const std::string& out_path,
               bool json_out) {
  Arena arena = chromem::parse_arena(report.load(arena_path));
  Strategy reference = chromem::parse_strategy(report.load(reference_path), arena);
  std::vector<int> start = start_nodes_or_all(arena, from_csv);

  chromem::SearchBudget budget;
  budget.max_states = max_states;
  if (max_candidates) budget.max_candidates = max_candidates;
  budget.threads = threads;

  auto t0 = std::chrono::steady_clock::now();
  chromem::SearchResult result =
      general ? chromem::min_general_states(arena, reference, start, budget)
              : chromem::min_chromatic_states(arena, reference, start, budget);
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();

  report.doc["kind"] = general ? "general" : "chromatic";
  report.doc["levels"] = ordered_json::array();
  for (const chromem::LevelReport& level : result.levels) {
    ordered_json entry;
    entry["states"] = level.states;
    if (level.witness_found) {
      entry["witness_table"] = level.witness_table;
      entry["witness_move"] = level.witness_move;
    } else {
      entry["candidates"] = level.candidates;
      entry["exhausted"] = level.exhausted;
    }
    report.doc["levels"].push_back(std::move(entry));
    if (!json_out) {
      std::cout << "states=" << level.states;
      if (level.witness_found) {
        std::cout << " witness at table " << level.witness_table << ", move "
                  << level.witness_move << "\n";
      } else {
        std::cout << " candidates=" << level.candidates
                  << (level.exhausted ? " (budget exhausted)" : " no witness") << "\n";
      }
    }
  }
  report.doc["elapsed_search_ms"] = elapsed;
  if (!json_out) std::cout << "elapsed " << elapsed << " ms\n";

  if (result.minimal_states) {
    report.doc["minimal"] = *result.minimal_states;
    if (!out_path.empty()) {
      write_file(out_path, chromem::serialize(*result.witness, arena));
      report.doc["witness"] = out_path;
    }
    if (!json_out) {
      std::cout << "minimal=" << *result.minimal_states << "\n";
      if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    }
    return 0;
  }
  report.doc["minimal"] = nullptr;
  report.doc["budget_exhausted"] = result.budget_exhausted;
  if (!json_out) {
    std::cout << (result.budget_exhausted
                      ? "budget exhausted mid-level; minimality not established\n"
                      : "no witness within the state budget\n");
  }
  return 1;
}

int cmd_simulate(RunReport& report, const std::string& arena_path,
                 const std::string& strategy_path, const std::string& from, int steps,
                 std::uint64_t seed, bool json_out) {
  Arena arena = chromem::parse_arena(report.load(arena_path));
  Strategy strategy = chromem::parse_strategy(report.load(strategy_path), arena);
  int v = arena.node_index(from);
  int m = strategy.memory.initial;
  std::mt19937_64 rng(seed);
  std::vector<int> word;
  for (int i = 0; i < steps; ++i) {
    int e;
    if (arena.owner(v) == chromem::Player::zero) {
      e = chromem::strategy_move(arena, strategy, v, m);
    } else {
      std::span<const int> out = arena.out(v);
      e = out[static_cast<size_t>(rng() % out.size())];
    }
    word.push_back(arena.edge(e).color);
    m = strategy.memory.step(arena, m, e);
    v = arena.edge(e).target;
  }
  report.doc["seed"] = seed;
  report.doc["word"] = word_json(arena, word);
  if (!json_out) std::cout << chromem::format_word(arena, word) << "\n";
  return 0;
}

int cmd_dot(RunReport& report, const std::string& arena_path, const std::string& out_path,
            bool json_out) {
  Arena arena = chromem::parse_arena(report.load(arena_path));
  std::string dot = chromem::export_dot(arena);
  if (out_path.empty()) {
    if (!json_out) std::cout << dot;
  } else {
    write_file(out_path, dot);
    if (!json_out) std::cout << "wrote " << out_path << "\n";
  }
  report.doc["dot"] = dot;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chromem: finite-memory strategies in games on finite edge-colored arenas"};
  app.require_subcommand(1);
  bool json_out = false;
  std::uint64_t seed = 0;
  app.add_flag("--json", json_out, "emit a machine-readable run report");
  app.add_option("--seed", seed, "seed for randomized commands");

  std::string arena_path, strategy_path, right_path, out_path, from_csv, left_from, right_from;
  std::string mode = "winning", preorder_path, out_dir = ".", k1_csv, k2_csv, kappa_csv, value_word;
  int n = 1, q = 1, max_states = 4, steps = 0;
  std::uint64_t max_candidates = 0;
  unsigned threads = 0;
  bool general = false;

  CLI::App* validate = app.add_subcommand("validate", "check an arena file");
  validate->add_option("arena", arena_path)->required();

  CLI::App* transform = app.add_subcommand("transform", "convert a strategy to chromatic memory");
  transform->add_option("arena", arena_path)->required();
  transform->add_option("strategy", strategy_path)->required();
  transform->add_option("--from", from_csv, "start nodes (comma-separated; default all)");
  transform->add_option("--mode", mode)->check(CLI::IsMember({"winning", "preference"}));
  transform->add_option("--preorder", preorder_path, "preorder file (preference mode)");
  transform->add_option("--out", out_path)->required();

  CLI::App* verify = app.add_subcommand("verify", "decide trace inclusion of two strategies");
  verify->add_option("arena", arena_path)->required();
  verify->add_option("left", strategy_path)->required();
  verify->add_option("right", right_path)->required();
  verify->add_option("--left-from", left_from, "left start nodes (default all)");
  verify->add_option("--right-from", right_from, "right start nodes (default all)");

  CLI::App* lowerbound = app.add_subcommand("lowerbound", "hard-instance family tools");
  lowerbound->require_subcommand(1);
  CLI::App* lb_gen = lowerbound->add_subcommand("gen", "emit an instance as arena/strategy files");
  lb_gen->add_option("-n", n)->required();
  lb_gen->add_option("-q", q)->required();
  lb_gen->add_option("--out-dir", out_dir);
  CLI::App* lb_words = lowerbound->add_subcommand("words", "evaluate the word combinatorics");
  lb_words->add_option("--k1", k1_csv, "first run-length sequence");
  lb_words->add_option("--k2", k2_csv, "second run-length sequence");
  lb_words->add_option("--kappa", kappa_csv, "print the block word of a sequence");
  lb_words->add_option("--value", value_word, "print the counter value of a word over x,y");
  lb_words->add_option("-n", n);
  lb_words->add_option("-q", q);
  CLI::App* lb_sep = lowerbound->add_subcommand("separate", "check pairwise state separation");
  lb_sep->add_option("--strategy", strategy_path)->required();
  lb_sep->add_option("--arena", arena_path);
  lb_sep->add_option("-n", n)->required();
  lb_sep->add_option("-q", q)->required();

  CLI::App* search = app.add_subcommand("search", "minimal memory by exhaustive search");
  search->add_option("arena", arena_path)->required();
  search->add_option("reference", strategy_path)->required();
  search->add_option("--from", from_csv, "start nodes (default all)");
  search->add_option("--max-states", max_states);
  search->add_flag("--general", general, "search general instead of chromatic memory");
  search->add_option("--max-candidates", max_candidates, "per-level candidate cap");
  search->add_option("--threads", threads);
  search->add_option("--out", out_path, "write the witness strategy here");

  CLI::App* simulate = app.add_subcommand("simulate", "play K steps against a random adversary");
  simulate->add_option("arena", arena_path)->required();
  simulate->add_option("strategy", strategy_path)->required();
  simulate->add_option("--from", from_csv)->required();
  simulate->add_option("--steps", steps)->required();

  CLI::App* dot = app.add_subcommand("dot", "export an arena as graphviz");
  dot->add_option("arena", arena_path)->required();
  dot->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunReport report(argc, argv);
  int code = 2;
  try {
    if (*validate) {
      code = cmd_validate(report, arena_path, json_out);
    } else if (*transform) {
      code = cmd_transform(report, arena_path, strategy_path, from_csv, mode, preorder_path,
                           out_path, json_out);
    } else if (*verify) {
      code = cmd_verify(report, arena_path, strategy_path, right_path, left_from, right_from,
                        json_out);
    } else if (*lowerbound) {
      if (*lb_gen) code = cmd_lowerbound_gen(report, n, q, out_dir, json_out);
      if (*lb_words)
        code = cmd_lowerbound_words(report, k1_csv, k2_csv, kappa_csv, value_word, n, q, json_out);
      if (*lb_sep) code = cmd_lowerbound_separate(report, strategy_path, arena_path, n, q, json_out);
    } else if (*search) {
      code = cmd_search(report, arena_path, strategy_path, from_csv, max_states, general,
                        max_candidates, threads, out_path, json_out);
    } else if (*simulate) {
      code = cmd_simulate(report, arena_path, strategy_path, from_csv, steps, seed, json_out);
    } else if (*dot) {
      code = cmd_dot(report, arena_path, out_path, json_out);
    }
  } catch (const chromem::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const chromem::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const chromem::LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const chromem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  report.emit(json_out);
  return code;
}

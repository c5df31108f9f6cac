// eqfix command line: learn fixing rules from examples (train), repair an
// equation with the rule library (fix), and benchmark over a corpus (bench).
//
// Exit codes: 0 success, 1 unsolved/rejected/no consistent rule, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eqfix/bench.hpp"
#include "eqfix/errors.hpp"
#include "eqfix/library.hpp"

namespace {

using namespace eqfix;

std::vector<Example> load_examples_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("invalid examples file: " + std::string(e.what()), e.byte);
  }
  if (!j.is_array() || j.empty())
    throw FormatError("examples file must be a non-empty JSON array");
  std::vector<Example> examples;
  for (const auto& je : j) {
    try {
      Example e;
      e.eq = je.at("eq").get<std::string>();
      e.err = tokenize_message(je.at("err").get<std::string>());
      e.fix = je.at("fix").get<std::string>();
      if (e.eq.empty() || e.fix.empty())
        throw FormatError("eq and fix must be non-empty");
      if (e.eq == e.fix) throw FormatError("eq equals fix");
      examples.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("invalid example: " + std::string(e.what()));
    } catch (const EmptyMessageError&) {
      throw FormatError("example with blank error message");
    }
  }
  sort_examples_by_length(examples);
  return examples;
}

RuleLibrary load_or_create_library(const std::filesystem::path& path, std::size_t k) {
  if (std::filesystem::exists(path)) {
    RuleLibrary lib = RuleLibrary::load(path);
    lib.set_k(k);
    return lib;
  }
  return RuleLibrary(k);
}

int cmd_train(const std::string& library_path, const std::string& examples_path,
              std::size_t top_k) {
  RuleLibrary lib = load_or_create_library(library_path, top_k);
  std::vector<Example> examples = load_examples_file(examples_path);
  auto result = lib.train(examples);
  if (auto* failure = std::get_if<SynthFailure>(&result)) {
    std::cerr << "eqfix: no rule learned: " << to_string(failure->cause);
    if (!failure->detail.empty()) std::cerr << " (" << failure->detail << ")";
    std::cerr << "\n";
    return 1;
  }
  const TrainResult& train = std::get<TrainResult>(result);
  lib.save(library_path);
  std::cout << (train.refined ? "refined entry " : "new entry ") << train.entry_id
            << " (" << examples.size() << " example"
            << (examples.size() == 1 ? "" : "s") << ")\n";
  return 0;
}

int cmd_fix(const std::string& library_path, const std::string& eq,
            const std::string& err_text, std::size_t limit, bool yes) {
  RuleLibrary lib = RuleLibrary::load(library_path);
  ErrorMessage err = tokenize_message(err_text);
  std::vector<SuggestedFix> fixes = lib.suggest_fixes(eq, err, limit);
  if (fixes.empty()) {
    std::cerr << "eqfix: no applicable rules produced a fix\n";
    return 1;
  }
  if (yes) {
    std::cout << fixes.front().fixed << "\n";
    return 0;
  }
  for (const SuggestedFix& fix : fixes) {
    std::cout << "suggestion (entry " << fix.entry_id << "): " << fix.fixed << "\n";
    std::cout << "accept? [y/n] " << std::flush;
    std::string answer;
    if (!std::getline(std::cin, answer)) break;
    if (!answer.empty() && (answer[0] == 'y' || answer[0] == 'Y')) {
      std::cout << fix.fixed << "\n";
      return 0;
    }
  }
  std::cerr << "eqfix: all suggested results were rejected\n";
  return 1;
}

int cmd_bench(const std::string& corpus_path, const std::string& configs_arg,
              std::size_t top_k, const std::string& out_path) {
  Corpus corpus = load_corpus(corpus_path);
  std::vector<BenchConfig> configs;
  std::stringstream ss(configs_arg);
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto config = parse_bench_config(token);
    if (!config) throw FormatError("unknown config " + token + " (use c1..c4, all)");
    configs.push_back(std::move(*config));
  }
  if (configs.empty()) throw FormatError("no configs given");
  BenchReport report = run_bench(corpus, configs, top_k);
  std::cout << report_to_table(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path);
    out << report_to_json(report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eqfix - example-driven repair of LaTeX equations"};
  app.require_subcommand(1);

  std::string library_path;
  std::string examples_path;
  std::size_t top_k = 10;
  auto* train = app.add_subcommand("train", "learn rules from an examples file");
  train->add_option("--library", library_path, "rule library path")->required();
  train->add_option("--examples", examples_path, "JSON examples file")->required();
  train->add_option("--top-k", top_k, "candidate rules kept per entry")
      ->check(CLI::PositiveNumber);

  std::string eq;
  std::string err_text;
  std::size_t limit = 10;
  bool yes = false;
  auto* fix = app.add_subcommand("fix", "suggest repairs for an equation");
  fix->add_option("--library", library_path, "rule library path")->required();
  fix->add_option("--eq", eq, "erroneous equation")->required();
  fix->add_option("--err", err_text, "error message")->required();
  fix->add_option("--limit", limit, "maximum suggestions")->check(CLI::PositiveNumber);
  fix->add_flag("--yes", yes, "accept the top suggestion non-interactively");

  std::string corpus_path;
  std::string configs_arg = "all";
  std::string out_path;
  auto* bench = app.add_subcommand("bench", "benchmark synthesis over a corpus");
  bench->add_option("--corpus", corpus_path, "corpus file")->required();
  bench->add_option("--configs", configs_arg, "comma list of c1..c4,all");
  bench->add_option("--top-k", top_k, "rules attempted per test case")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "write the machine-readable report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(library_path, examples_path, top_k);
    if (fix->parsed()) return cmd_fix(library_path, eq, err_text, limit, yes);
    if (bench->parsed()) return cmd_bench(corpus_path, configs_arg, top_k, out_path);
  } catch (const EmptyMessageError&) {
    std::cerr << "eqfix: error message is blank\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "eqfix: " << e.what();
    if (e.position != 0) std::cerr << " (at byte " << e.position << ")";
    std::cerr << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "eqfix: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

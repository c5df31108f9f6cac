#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eqfix/rule.hpp"

namespace eqfix {

// One corpus group: training examples (sorted by equation length on load)
// and a held-out repair problem.
struct ExampleGroup {
  std::string id;
  std::vector<Example> examples;
  Example test;
};

struct Corpus {
  std::vector<ExampleGroup> groups;
};

// Training configuration: use the first `count` (shortest) examples, or all.
struct BenchConfig {
  std::string name;                 // "c1".."c4" or "all"
  std::optional<std::size_t> count; // nullopt = all
};

std::optional<BenchConfig> parse_bench_config(const std::string& name);

struct GroupResult {
  std::string group_id;
  std::string config;
  bool solved = false;
  std::size_t attempts = 0;     // rules tried, in rank order
  std::size_t rule_count = 0;   // candidate rules available (<= top-k)
  double synth_ms = 0.0;
  std::string note;             // synthesis failure cause, when any
};

struct BenchReport {
  std::size_t top_k = 10;
  std::vector<GroupResult> results;

  std::size_t solved_count(const std::string& config) const;
  std::size_t group_count(const std::string& config) const;
  double mean_synth_ms(const std::string& config) const;
};

// Throws IoError / FormatError (with location info) on malformed files.
Corpus load_corpus(const std::filesystem::path& path);
Corpus corpus_from_json(const std::string& text);

// Sorted insert order used everywhere: equation length ascending, stable.
void sort_examples_by_length(std::vector<Example>& examples);

// Synthesizes per group (library-free), tries the top-k rules on the test
// case in rank order; solved iff some rule output equals the expected fix.
// Deterministic given corpus, configs and k (timings aside).
BenchReport run_bench(const Corpus& corpus, const std::vector<BenchConfig>& configs,
                      std::size_t top_k);

std::string report_to_json(const BenchReport& report);
std::string report_to_table(const BenchReport& report);

}  // namespace eqfix

#include "eqfix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "eqfix/errors.hpp"

namespace eqfix {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "eqfix-corpus";
constexpr int kVersion = 1;

Example example_from_json(const json& j, const std::string& where) {
  try {
    Example e;
    e.eq = j.at("eq").get<std::string>();
    e.err = tokenize_message(j.at("err").get<std::string>());
    e.fix = j.at("fix").get<std::string>();
    if (e.eq.empty() || e.fix.empty())
      throw FormatError(where + ": eq and fix must be non-empty");
    if (e.eq == e.fix) throw FormatError(where + ": eq equals fix");
    return e;
  } catch (const json::exception& e) {
    throw FormatError(where + ": " + e.what());
  } catch (const EmptyMessageError&) {
    throw FormatError(where + ": blank error message");
  }
}

}  // namespace

void sort_examples_by_length(std::vector<Example>& examples) {
  std::stable_sort(examples.begin(), examples.end(),
                   [](const Example& a, const Example& b) {
                     return a.eq.size() < b.eq.size();
                   });
}

std::optional<BenchConfig> parse_bench_config(const std::string& name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "all" || lower == "call" || lower == "c-all") return BenchConfig{"all", std::nullopt};
  if (lower.size() == 2 && lower[0] == 'c' && lower[1] >= '1' && lower[1] <= '4')
    return BenchConfig{lower, static_cast<std::size_t>(lower[1] - '0')};
  return std::nullopt;
}

Corpus corpus_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid corpus file: " + std::string(e.what()), e.byte);
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormat)
      throw FormatError("not a corpus file");
    if (j.at("version").get<int>() != kVersion)
      throw FormatError("unsupported corpus version " + j.at("version").dump());
    Corpus corpus;
    for (const json& jg : j.at("groups")) {
      ExampleGroup group;
      group.id = jg.at("id").get<std::string>();
      if (group.id.empty()) throw FormatError("group with empty id");
      for (const json& je : jg.at("examples"))
        group.examples.push_back(example_from_json(je, "group " + group.id));
      if (group.examples.empty())
        throw FormatError("group " + group.id + " has no training examples");
      group.test = example_from_json(jg.at("test"), "group " + group.id + " test");
      sort_examples_by_length(group.examples);
      corpus.groups.push_back(std::move(group));
    }
    return corpus;
  } catch (const json::exception& e) {
    throw FormatError("invalid corpus file: " + std::string(e.what()));
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return corpus_from_json(buffer.str());
}

std::size_t BenchReport::solved_count(const std::string& config) const {
  std::size_t n = 0;
  for (const GroupResult& r : results) {
    if (r.config == config && r.solved) ++n;
  }
  return n;
}

std::size_t BenchReport::group_count(const std::string& config) const {
  std::size_t n = 0;
  for (const GroupResult& r : results) {
    if (r.config == config) ++n;
  }
  return n;
}

double BenchReport::mean_synth_ms(const std::string& config) const {
  double total = 0.0;
  std::size_t n = 0;
  for (const GroupResult& r : results) {
    if (r.config == config) {
      total += r.synth_ms;
      ++n;
    }
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

BenchReport run_bench(const Corpus& corpus, const std::vector<BenchConfig>& configs,
                      std::size_t top_k) {
  BenchReport report;
  report.top_k = top_k;
  for (const ExampleGroup& group : corpus.groups) {
    for (const BenchConfig& config : configs) {
      GroupResult result;
      result.group_id = group.id;
      result.config = config.name;

      std::vector<Example> training = group.examples;
      if (config.count && *config.count < training.size())
        training.resize(*config.count);

      auto start = std::chrono::steady_clock::now();
      auto synth = synth_rule(training, top_k);
      auto elapsed = std::chrono::steady_clock::now() - start;
      result.synth_ms =
          std::chrono::duration<double, std::milli>(elapsed).count();

      if (auto* failure = std::get_if<SynthFailure>(&synth)) {
        result.note = to_string(failure->cause);
      } else {
        const auto& rules = std::get<std::vector<Rule>>(synth);
        result.rule_count = rules.size();
        for (const Rule& rule : rules) {
          ++result.attempts;
          ApplyOutcome outcome = apply_rule(rule, group.test.eq, group.test.err);
          if (outcome.fixed && *outcome.fixed == group.test.fix) {
            result.solved = true;
            break;
          }
        }
      }
      report.results.push_back(std::move(result));
    }
  }
  return report;
}

std::string report_to_json(const BenchReport& report) {
  json j;
  j["format"] = "eqfix-bench-report";
  j["version"] = 1;
  j["top_k"] = report.top_k;
  json results = json::array();
  std::vector<std::string> configs;
  for (const GroupResult& r : report.results) {
    results.push_back({{"group", r.group_id},
                       {"config", r.config},
                       {"solved", r.solved},
                       {"attempts", r.attempts},
                       {"rules", r.rule_count},
                       {"synth_ms", r.synth_ms},
                       {"note", r.note}});
    if (std::find(configs.begin(), configs.end(), r.config) == configs.end())
      configs.push_back(r.config);
  }
  j["results"] = std::move(results);
  json totals = json::object();
  for (const std::string& config : configs) {
    totals[config] = {{"groups", report.group_count(config)},
                      {"solved", report.solved_count(config)},
                      {"mean_synth_ms", report.mean_synth_ms(config)}};
  }
  j["totals"] = std::move(totals);
  return j.dump(2) + "\n";
}

std::string report_to_table(const BenchReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "group" << std::setw(8) << "config"
      << std::setw(8) << "solved" << std::setw(10) << "attempts" << std::setw(8)
      << "rules" << std::setw(12) << "synth_ms"
      << "note\n";
  std::vector<std::string> configs;
  for (const GroupResult& r : report.results) {
    out << std::left << std::setw(24) << r.group_id << std::setw(8) << r.config
        << std::setw(8) << (r.solved ? "yes" : "no") << std::setw(10) << r.attempts
        << std::setw(8) << r.rule_count << std::setw(12) << std::fixed
        << std::setprecision(2) << r.synth_ms << r.note << "\n";
    if (std::find(configs.begin(), configs.end(), r.config) == configs.end())
      configs.push_back(r.config);
  }
  for (const std::string& config : configs) {
    out << config << ": solved " << report.solved_count(config) << "/"
        << report.group_count(config) << ", mean synthesis "
        << std::fixed << std::setprecision(2) << report.mean_synth_ms(config)
        << " ms\n";
  }
  return out.str();
}

}  // namespace eqfix

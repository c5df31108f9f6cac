#include "eqfix/library.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "eqfix/errors.hpp"

namespace eqfix {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "eqfix-rule-library";
constexpr int kVersion = 1;

std::string now_utc() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json matchers_to_json(const std::vector<Matcher>& ms) {
  json arr = json::array();
  for (const Matcher& m : ms) {
    if (m.is_str()) {
      arr.push_back({{"s", m.value}});
    } else {
      arr.push_back({{"v", m.id->to_string()}});
    }
  }
  return arr;
}

std::vector<Matcher> matchers_from_json(const json& arr) {
  std::vector<Matcher> out;
  for (const json& item : arr) {
    if (item.contains("s")) {
      std::string value = item.at("s").get<std::string>();
      if (value.empty()) throw FormatError("empty literal matcher");
      out.push_back(Matcher::str(std::move(value)));
    } else if (item.contains("v")) {
      out.push_back(Matcher::var(VarId::parse(item.at("v").get<std::string>())));
    } else {
      throw FormatError("matcher needs an \"s\" or \"v\" field");
    }
  }
  if (out.empty()) throw FormatError("empty pattern");
  return out;
}

json rule_to_json(const Rule& rule) {
  json relaxers = json::array();
  for (const Relaxer& r : rule.relaxers) relaxers.push_back(r.to_string());
  json transformer = json::object();
  for (const auto& [v, t] : rule.transformer) transformer[v.to_string()] = to_string(t);
  return {{"error_pattern", matchers_to_json(rule.error_pattern.matchers)},
          {"relaxers", std::move(relaxers)},
          {"transformer", std::move(transformer)}};
}

Rule rule_from_json(const json& j) {
  Rule rule;
  rule.error_pattern.matchers = matchers_from_json(j.at("error_pattern"));
  for (const json& r : j.at("relaxers"))
    rule.relaxers.insert(Relaxer::parse(r.get<std::string>()));
  for (const auto& [key, value] : j.at("transformer").items())
    rule.transformer.emplace(VarId::parse(key),
                             parse_transformer(value.get<std::string>()));
  return rule;
}

json example_to_json(const Example& e) {
  return {{"eq", e.eq}, {"err", e.err.to_string()}, {"fix", e.fix}};
}

Example example_from_json(const json& j) {
  Example e;
  e.eq = j.at("eq").get<std::string>();
  e.err = tokenize_message(j.at("err").get<std::string>());
  e.fix = j.at("fix").get<std::string>();
  if (e.eq.empty() || e.fix.empty()) throw FormatError("example fields must be non-empty");
  if (e.eq == e.fix) throw FormatError("example eq equals fix");
  return e;
}

}  // namespace

RuleLibrary::RuleLibrary(std::size_t k) : k_(k == 0 ? 1 : k) {}

void RuleLibrary::set_k(std::size_t k) {
  if (k >= 1) k_ = k;
}

SynthResult<TrainResult> RuleLibrary::train(const std::vector<Example>& examples) {
  // oldest first: an entry that already covers this error shape wins
  for (RuleEntry& entry : entries_) {
    std::vector<Example> combined = entry.examples;
    combined.insert(combined.end(), examples.begin(), examples.end());
    auto refined = synth_rule(combined, k_);
    if (auto* rules = std::get_if<std::vector<Rule>>(&refined)) {
      entry.rules = std::move(*rules);
      entry.examples = std::move(combined);
      entry.updated = now_utc();
      entry.revision = next_revision_++;
      return TrainResult{entry.id, true};
    }
  }
  auto fresh = synth_rule(examples, k_);
  if (auto* failure = std::get_if<SynthFailure>(&fresh)) return *failure;
  RuleEntry entry;
  entry.id = next_id_++;
  entry.rules = std::get<std::vector<Rule>>(std::move(fresh));
  entry.examples = examples;
  entry.created = now_utc();
  entry.updated = entry.created;
  entry.revision = next_revision_++;
  entries_.push_back(std::move(entry));
  return TrainResult{entries_.back().id, false};
}

std::vector<std::pair<int, const Rule*>> RuleLibrary::find_applicable(
    const ErrorMessage& err) const {
  std::vector<const RuleEntry*> by_recency;
  for (const RuleEntry& e : entries_) by_recency.push_back(&e);
  std::sort(by_recency.begin(), by_recency.end(),
            [](const RuleEntry* a, const RuleEntry* b) { return a->revision > b->revision; });
  std::vector<std::pair<int, const Rule*>> out;
  for (const RuleEntry* entry : by_recency) {
    for (const Rule& rule : entry->rules) {
      if (match_error_pattern(rule.error_pattern, err))
        out.emplace_back(entry->id, &rule);
    }
  }
  return out;
}

std::vector<SuggestedFix> RuleLibrary::suggest_fixes(std::string_view eq,
                                                     const ErrorMessage& err,
                                                     std::size_t limit) const {
  std::vector<SuggestedFix> out;
  std::vector<std::string> seen;
  for (const auto& [entry_id, rule] : find_applicable(err)) {
    if (out.size() >= limit) break;
    ApplyOutcome outcome = apply_rule(*rule, eq, err);
    if (!outcome.fixed) continue;
    if (std::find(seen.begin(), seen.end(), *outcome.fixed) != seen.end()) continue;
    seen.push_back(*outcome.fixed);
    out.push_back({entry_id, std::move(*outcome.fixed)});
  }
  return out;
}

std::string RuleLibrary::to_json() const {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["top_k"] = k_;
  j["next_id"] = next_id_;
  j["next_revision"] = next_revision_;
  json entries = json::array();
  for (const RuleEntry& entry : entries_) {
    json rules = json::array();
    for (const Rule& rule : entry.rules) rules.push_back(rule_to_json(rule));
    json examples = json::array();
    for (const Example& e : entry.examples) examples.push_back(example_to_json(e));
    entries.push_back({{"id", entry.id},
                       {"created", entry.created},
                       {"updated", entry.updated},
                       {"revision", entry.revision},
                       {"examples", std::move(examples)},
                       {"rules", std::move(rules)}});
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

RuleLibrary RuleLibrary::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid library file: " + std::string(e.what()), e.byte);
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormat)
      throw FormatError("not a rule library file");
    if (j.at("version").get<int>() != kVersion)
      throw FormatError("unsupported library version " + j.at("version").dump());
    RuleLibrary lib(j.at("top_k").get<std::size_t>());
    lib.next_id_ = j.value("next_id", 1);
    lib.next_revision_ = j.value("next_revision", 1);
    for (const json& je : j.at("entries")) {
      RuleEntry entry;
      entry.id = je.at("id").get<int>();
      entry.created = je.value("created", "");
      entry.updated = je.value("updated", "");
      entry.revision = je.at("revision").get<std::uint64_t>();
      for (const json& jr : je.at("rules")) entry.rules.push_back(rule_from_json(jr));
      for (const json& jx : je.at("examples"))
        entry.examples.push_back(example_from_json(jx));
      if (entry.rules.empty()) throw FormatError("entry without rules");
      lib.entries_.push_back(std::move(entry));
    }
    return lib;
  } catch (const json::exception& e) {
    throw FormatError("invalid library file: " + std::string(e.what()));
  }
}

void RuleLibrary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json();
  if (!out) throw IoError("failed writing " + path.string());
}

RuleLibrary RuleLibrary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

}  // namespace eqfix

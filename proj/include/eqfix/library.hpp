#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eqfix/rule.hpp"

namespace eqfix {

// One learned rule family: the top-ranked candidate rules plus the training
// examples they were synthesized from (kept so refinement can re-synthesize).
struct RuleEntry {
  int id = 0;
  std::vector<Rule> rules;        // rank order, length <= library k
  std::vector<Example> examples;
  std::string created;            // ISO-8601 UTC
  std::string updated;
  std::uint64_t revision = 0;     // bumped on create/refine; newest wins lookups
};

struct TrainResult {
  int entry_id = 0;
  bool refined = false;
};

struct SuggestedFix {
  int entry_id = 0;
  std::string fixed;
};

// Persistent store of learned rules. Training first tries to refine an
// existing entry (insertion order); only when no entry accommodates the new
// examples is a fresh one synthesized. Queries walk entries newest-first.
//
// Single writer, multiple readers: train() needs exclusive access, the const
// queries are safe to share.
class RuleLibrary {
 public:
  explicit RuleLibrary(std::size_t k = 10);

  std::size_t k() const { return k_; }
  void set_k(std::size_t k);
  const std::vector<RuleEntry>& entries() const { return entries_; }

  // Refine-or-create; on failure returns the fresh synthesis failure (refine
  // attempts that fail just move on to the next entry).
  SynthResult<TrainResult> train(const std::vector<Example>& examples);

  // Every rule whose error pattern matches, newest entry first, rank order
  // within an entry.
  std::vector<std::pair<int, const Rule*>> find_applicable(const ErrorMessage& err) const;

  // Applies the applicable rules in order, skipping failures and duplicate
  // outputs, up to limit suggestions. Empty result: no rule fixes this.
  std::vector<SuggestedFix> suggest_fixes(std::string_view eq, const ErrorMessage& err,
                                          std::size_t limit) const;

  void save(const std::filesystem::path& path) const;  // throws IoError
  static RuleLibrary load(const std::filesystem::path& path);  // IoError/FormatError

  std::string to_json() const;
  static RuleLibrary from_json(const std::string& text);

 private:
  std::size_t k_;
  std::vector<RuleEntry> entries_;
  int next_id_ = 1;
  std::uint64_t next_revision_ = 1;
};

}  // namespace eqfix

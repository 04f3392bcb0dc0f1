#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "torembed/embed.hpp"
#include "torembed/instance.hpp"

namespace torembed {

enum class GridFamily { ThreeSubfield, Single, LocalGlobal };

struct SearchConfig {
  GridFamily family = GridFamily::ThreeSubfield;
  std::map<std::string, std::vector<Int>> params;  // a, b, c (three-subfield); m, d, c (single)
  std::vector<std::vector<Place>> place_sets;      // local-global
  std::string out;                                 // JSONL result store
  int workers = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_candidates = 100000;
};

/// Each parameter is a list of integers or {"from": x, "to": y}.
SearchConfig parse_search_config(const Json& j);
SearchConfig load_search_config(const std::string& path);

struct Hit {
  std::uint64_t hash = 0;
  Outcome outcome = Outcome::GloballyEmbeddable;
  std::string witness;  // partition string for Brauer-Manin hits
  Json instance;
};

struct SearchStats {
  std::uint64_t candidates = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t invalid = 0;     // rejected by validation
  std::uint64_t new_hits = 0;    // appended to the store
  bool exhausted = false;        // the candidate budget cut the grid short
  std::map<Outcome, std::uint64_t> outcomes;
  std::vector<Hit> hits;         // sorted by hash, deduplicated
};

std::vector<Instance> grid_instances(const SearchConfig& cfg, std::uint64_t* invalid = nullptr);
SearchStats search_serial(const SearchConfig& cfg);
SearchStats search_parallel(const SearchConfig& cfg);
/// Runs the search and appends unseen hits to cfg.out (if set).
SearchStats run_search(const SearchConfig& cfg, bool parallel = true);

std::set<std::uint64_t> stored_hashes(const std::string& path);
std::string hash_hex(std::uint64_t h);

}  // namespace torembed

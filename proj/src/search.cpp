#include "torembed/search.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "torembed/errors.hpp"
#include "torembed/family.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace torembed {

namespace {

std::vector<Int> json_range(const Json& j, const std::string& path) {
  std::vector<Int> out;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(json_int(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
  }
  if (j.is_object() && j.contains("from") && j.contains("to")) {
    const Int lo = json_int(j["from"], path + ".from"), hi = json_int(j["to"], path + ".to");
    if (hi - lo > 1000000) throw Error(ErrorKind::Schema, path + ": range too large");
    for (Int x = lo; x <= hi; ++x) out.push_back(x);
    return out;
  }
  throw Error(ErrorKind::Schema, path + ": expected a list or {\"from\", \"to\"}");
}

const std::vector<Int>& param(const SearchConfig& cfg, const char* name) {
  auto it = cfg.params.find(name);
  if (it == cfg.params.end()) throw Error(ErrorKind::Schema, std::string("grid.") + name + ": missing");
  return it->second;
}

bool usable(const Int& x) { return x != 0 && x != 1 && squarefree_part(x) == x; }

struct Slot {
  std::optional<Outcome> outcome;
  std::optional<Hit> hit;
  bool failed = false;
};

Slot run_one(const Instance& inst) {
  Slot s;
  try {
    const Verdict v = decide(inst.E, inst.A, DecideOptions{false});
    s.outcome = v.outcome;
    if (v.outcome != Outcome::BrauerManinObstructed && v.outcome != Outcome::OrientationIndeterminate) return s;
    Hit h;
    h.hash = instance_hash(inst);
    h.outcome = v.outcome;
    if (v.witness) h.witness = partition_str(*v.witness, v.sha->m);
    Instance echo = inst;
    echo.options = InstanceOptions{};
    h.instance = instance_to_json(echo);
    s.hit = std::move(h);
  } catch (const Error&) {
    s.failed = true;
  }
  return s;
}

SearchStats merge(const std::vector<Slot>& slots, std::uint64_t candidates, std::uint64_t invalid, bool exhausted) {
  SearchStats st;
  st.candidates = candidates;
  st.invalid = invalid;
  st.exhausted = exhausted;
  for (const Slot& s : slots) {
    if (s.failed) {
      ++st.invalid;
      continue;
    }
    ++st.evaluated;
    ++st.outcomes[*s.outcome];
    if (s.hit) st.hits.push_back(*s.hit);
  }
  std::sort(st.hits.begin(), st.hits.end(), [](const Hit& x, const Hit& y) { return x.hash < y.hash; });
  st.hits.erase(std::unique(st.hits.begin(), st.hits.end(), [](const Hit& x, const Hit& y) { return x.hash == y.hash; }),
                st.hits.end());
  return st;
}

// Candidates in seeded order, truncated to the budget.
std::vector<Instance> prepared(const SearchConfig& cfg, std::uint64_t& candidates, std::uint64_t& invalid,
                               bool& exhausted) {
  std::vector<Instance> all = grid_instances(cfg, &invalid);
  candidates = all.size() + invalid;
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(all.begin(), all.end(), rng);
  exhausted = all.size() > cfg.max_candidates;
  if (exhausted) all.resize(cfg.max_candidates);
  return all;
}

}  // namespace

SearchConfig parse_search_config(const Json& j) {
  SearchConfig cfg;
  if (!j.is_object()) throw Error(ErrorKind::Schema, "config: expected an object");
  const std::string fam = j.value("family", "");
  if (fam == "three-subfield") cfg.family = GridFamily::ThreeSubfield;
  else if (fam == "single") cfg.family = GridFamily::Single;
  else if (fam == "local-global") cfg.family = GridFamily::LocalGlobal;
  else throw Error(ErrorKind::Schema, "family: expected three-subfield, single or local-global");
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    if (!g.is_object()) throw Error(ErrorKind::Schema, "grid: expected an object");
    for (const auto& [key, val] : g.items()) {
      if (key == "places") {
        if (!val.is_array()) throw Error(ErrorKind::Schema, "grid.places: expected a list of place lists");
        for (std::size_t k = 0; k < val.size(); ++k) {
          std::vector<Place> set;
          for (const Json& p : val[k]) set.push_back(json_place(p, "grid.places[" + std::to_string(k) + "]"));
          cfg.place_sets.push_back(set);
        }
      } else {
        cfg.params[key] = json_range(val, "grid." + key);
      }
    }
  }
  cfg.out = j.value("out", "");
  cfg.workers = j.value("workers", 1);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.max_candidates = j.value("max_candidates", std::uint64_t{100000});
  if (cfg.workers < 1) throw Error(ErrorKind::Schema, "workers: must be positive");
  return cfg;
}

SearchConfig load_search_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Schema, path + ": " + e.what());
  }
  return parse_search_config(j);
}

std::vector<Instance> grid_instances(const SearchConfig& cfg, std::uint64_t* invalid) {
  std::vector<Instance> out;
  std::uint64_t bad = 0;
  auto add = [&](auto&& build) {
    try {
      out.push_back(build());
    } catch (const Error&) {
      ++bad;
    } catch (const std::invalid_argument&) {
      ++bad;
    }
  };
  switch (cfg.family) {
    case GridFamily::ThreeSubfield:
      for (const Int& a : param(cfg, "a"))
        for (const Int& b : param(cfg, "b")) {
          if (!usable(a) || !usable(b) || a == b || !usable(squarefree_part(a * b))) continue;
          for (const Int& c : param(cfg, "c"))
            add([&] {
              Instance inst;
              inst.E = three_subfield_etale(a, b);
              inst.A = validate_algebra(InvolutionAlgebra{OrthSplit{twisted_trace_form(inst.E, Rat(c))}});
              return inst;
            });
        }
      break;
    case GridFamily::Single:
      for (const Int& m : param(cfg, "m"))
        for (const Int& d : param(cfg, "d")) {
          if (m != 1 && !usable(m)) continue;
          if (!usable(d)) continue;
          for (const Int& c : param(cfg, "c"))
            add([&] {
              Instance inst;
              EtaleAlgebra E;
              E.components = {Component::quad(BaseField{m}, Rat(d))};
              inst.E = validate(E);
              inst.A = validate_algebra(InvolutionAlgebra{OrthSplit{twisted_trace_form(inst.E, Rat(c))}});
              return inst;
            });
        }
      break;
    case GridFamily::LocalGlobal:
      for (const auto& places : cfg.place_sets) add([&] { return local_global_instance(places); });
      break;
  }
  if (invalid) *invalid = bad;
  return out;
}

SearchStats search_serial(const SearchConfig& cfg) {
  std::uint64_t candidates = 0, invalid = 0;
  bool exhausted = false;
  const std::vector<Instance> work = prepared(cfg, candidates, invalid, exhausted);
  std::vector<Slot> slots;
  slots.reserve(work.size());
  for (const Instance& inst : work) slots.push_back(run_one(inst));
  return merge(slots, candidates, invalid, exhausted);
}

SearchStats search_parallel(const SearchConfig& cfg) {
#ifndef _OPENMP
  return search_serial(cfg);
#else
  std::uint64_t candidates = 0, invalid = 0;
  bool exhausted = false;
  const std::vector<Instance> work = prepared(cfg, candidates, invalid, exhausted);
  std::vector<Slot> slots(work.size());
  const auto count = static_cast<std::int64_t>(work.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
  for (std::int64_t k = 0; k < count; ++k) slots[static_cast<std::size_t>(k)] = run_one(work[static_cast<std::size_t>(k)]);
  return merge(slots, candidates, invalid, exhausted);
#endif
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::set<std::uint64_t> stored_hashes(const std::string& path) {
  std::set<std::uint64_t> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("hash")) continue;
    out.insert(std::stoull(j["hash"].get<std::string>(), nullptr, 16));
  }
  return out;
}

SearchStats run_search(const SearchConfig& cfg, bool parallel) {
  SearchStats st = parallel ? search_parallel(cfg) : search_serial(cfg);
  if (cfg.out.empty()) return st;
  const std::set<std::uint64_t> seen = stored_hashes(cfg.out);
  std::ofstream out(cfg.out, std::ios::app);
  if (!out) throw Error(ErrorKind::Schema, "cannot append to " + cfg.out);
  for (const Hit& h : st.hits) {
    if (seen.count(h.hash)) continue;
    Json line;
    line["hash"] = hash_hex(h.hash);
    line["outcome"] = to_string(h.outcome);
    line["witness"] = h.witness;
    line["instance"] = h.instance;
    out << line.dump() << "\n";
    ++st.new_hits;
  }
  return st;
}

}  // namespace torembed

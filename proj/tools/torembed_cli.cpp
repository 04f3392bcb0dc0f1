// Command line front end: decide, sha, local, search, family.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torembed/budget.hpp"
#include "torembed/errors.hpp"
#include "torembed/family.hpp"
#include "torembed/instance.hpp"
#include "torembed/report.hpp"
#include "torembed/search.hpp"

using namespace torembed;

namespace {

constexpr int kInputError = 1;

// File budget first, then TOREMBED_* variables on top.
void apply_budget(const Instance& inst) { set_budget(budget_from_env(inst.options.budget.value_or(Budget{}))); }

Instance read_instance(const std::string& path) {
  Instance inst = load_instance(path);
  apply_budget(inst);
  return inst;
}

int cmd_decide(const std::string& path, bool json, const std::optional<std::uint64_t>& seed, bool parallel) {
  Instance inst = read_instance(path);
  if (seed) inst.options.seed = *seed;
  if (parallel) inst.options.parallel = true;
  const Report r = make_report(inst);
  if (json)
    std::cout << report_to_json(r).dump(2) << "\n";
  else
    std::cout << render_text(r);
  return exit_code(r.verdict.outcome);
}

int cmd_sha(const std::string& path, bool json) {
  const Instance inst = read_instance(path);
  const ShaContext ctx = sha_context(inst.E, inst.options.parallel);
  const ShaGroup g = compute_sha(ctx);
  if (json) {
    Json j = sha_to_json(g);
    Json rejected = Json::array();
    for (std::uint32_t x = 0; x < (1u << g.m); ++x) {
      if (canonical_partition(x, g.m) != x || g.contains(x)) continue;
      const auto w = covering_witness(ctx, x);
      rejected.push_back({{"partition", partition_str(x, g.m)}, {"witness", w ? w->witness_str() : ""}});
    }
    j["rejected"] = rejected;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << render_sha_text(g);
    for (std::uint32_t x = 0; x < (1u << g.m); ++x) {
      if (canonical_partition(x, g.m) != x || g.contains(x)) continue;
      const auto w = covering_witness(ctx, x);
      std::cout << "rejected " << partition_str(x, g.m) << "  at " << (w ? w->witness_str() : "?") << "\n";
    }
  }
  return 0;
}

int cmd_local(const std::string& path, const std::string& place, bool json) {
  const Instance inst = read_instance(path);
  const LocalVerdict lv = local_embeddable(inst.E, inst.A, Place::parse(place));
  if (json)
    std::cout << local_to_json(lv).dump(2) << "\n";
  else
    std::cout << render_local_text(lv) << "\n";
  return 0;
}

int cmd_search(const std::string& path, std::optional<int> workers, bool serial) {
  SearchConfig cfg = load_search_config(path);
  if (workers) cfg.workers = *workers;
  const SearchStats st = run_search(cfg, !serial);
  for (const Hit& h : st.hits)
    std::cout << hash_hex(h.hash) << "  " << to_string(h.outcome) << (h.witness.empty() ? "" : "  " + h.witness) << "\n";
  std::cerr << "candidates " << st.candidates << ", evaluated " << st.evaluated << ", rejected " << st.invalid
            << ", hits " << st.hits.size() << ", new " << st.new_hits << "\n";
  for (const auto& [o, n] : st.outcomes) std::cerr << "  " << to_string(o) << " " << n << "\n";
  if (st.exhausted) {
    std::cerr << "candidate budget exhausted after " << st.evaluated + st.invalid << " of " << st.candidates << "\n";
    return kInputError;
  }
  return 0;
}

int cmd_family(const std::string& name, const std::vector<std::string>& params, const std::string& out) {
  Instance inst;
  if (name == "local-global") {
    std::vector<Place> places;
    for (const std::string& p : params) places.push_back(Place::parse(p));
    if (places.empty()) places = {Place::prime(3), Place::prime(5), Place::prime(7), Place::prime(11)};
    const NonsplitPair ab = local_global_pair(places);
    std::cerr << "a = " << ab.a << ", b = " << ab.b << "\n";
    inst = local_global_instance(places);
  } else if (name == "three-subfield-sha") {
    Int a = 17, b = 89;
    if (params.size() >= 2) {
      a = Int(params[0]);
      b = Int(params[1]);
    }
    const TwistResult tr = three_subfield_instance(a, b);
    std::cerr << "a = " << a << ", b = " << b << ", twist c = " << tr.c << ", witness "
              << partition_str(*tr.verdict.witness, tr.verdict.sha->m) << "\n";
    inst = tr.instance;
  } else {
    throw Error(ErrorKind::Schema, "unknown family '" + name + "' (local-global, three-subfield-sha)");
  }
  const std::string text = instance_to_json(inst).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw Error(ErrorKind::Schema, "cannot write " + out);
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embeddings of etale algebras with involution into central simple algebras with involution"};
  app.require_subcommand(1);

  std::string file, place, config, family_name, out;
  std::vector<std::string> params;
  bool json = false, parallel = false, serial = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;

  auto* decide_cmd = app.add_subcommand("decide", "Full decision report");
  decide_cmd->add_option("file", file, "Instance file")->required();
  decide_cmd->add_flag("--json", json, "Machine-readable report");
  decide_cmd->add_option("--seed", seed, "Seed echoed in the report");
  decide_cmd->add_flag("--parallel", parallel, "Parallel place scan and pattern enumeration");

  auto* sha_cmd = app.add_subcommand("sha", "Sha group of the etale algebra");
  sha_cmd->add_option("file", file, "Instance file")->required();
  sha_cmd->add_flag("--json", json, "Machine-readable output");

  auto* local_cmd = app.add_subcommand("local", "Local verdict at one place");
  local_cmd->add_option("file", file, "Instance file")->required();
  local_cmd->add_option("--place", place, "Prime or 'real'")->required();
  local_cmd->add_flag("--json", json, "Machine-readable output");

  auto* search_cmd = app.add_subcommand("search", "Counterexample search over a parameter grid");
  search_cmd->add_option("config", config, "Search config")->required();
  search_cmd->add_option("--workers", workers, "Worker threads");
  search_cmd->add_flag("--serial", serial, "Use the serial reference loop");

  auto* family_cmd = app.add_subcommand("family", "Emit an instance from a named construction");
  family_cmd->add_option("name", family_name, "local-global | three-subfield-sha")->required();
  family_cmd->add_option("params", params, "Places (local-global) or a b (three-subfield-sha)");
  family_cmd->add_option("--out", out, "Write the instance here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*decide_cmd) return cmd_decide(file, json, seed, parallel);
    if (*sha_cmd) return cmd_sha(file, json);
    if (*local_cmd) return cmd_local(file, place, json);
    if (*search_cmd) return cmd_search(config, workers, serial);
    if (*family_cmd) return cmd_family(family_name, params, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

#include "torembed/report.hpp"

#include <sstream>

#include "torembed/errors.hpp"

namespace torembed {

namespace {

Outcome outcome_from_string(const std::string& s) {
  for (Outcome o : {Outcome::GloballyEmbeddable, Outcome::LocallyObstructed, Outcome::BrauerManinObstructed,
                    Outcome::OrientationIndeterminate, Outcome::NecessaryConditionFailed})
    if (to_string(o) == s) return o;
  throw Error(ErrorKind::Schema, "verdict.outcome: unknown outcome '" + s + "'");
}

Json places_json(const std::vector<Place>& vs) {
  Json out = Json::array();
  for (const Place& v : vs) out.push_back(place_json(v));
  return out;
}

std::vector<Place> json_places(const Json& j, const std::string& path) {
  std::vector<Place> out;
  for (const Json& x : j) out.push_back(json_place(x, path));
  return out;
}

Json datum_to_json(const LocalDatum& d) {
  Json j;
  j["support"] = places_json(d.support);
  j["bits"] = d.bits;
  j["real_pattern"] = d.real_pattern;
  Json slots = Json::array();
  for (const RealSlot& s : d.real_slots) slots.push_back({{"component", s.component}, {"embedding", s.embedding}});
  j["real_slots"] = slots;
  return j;
}

LocalDatum datum_from_json(const Json& j) {
  LocalDatum d;
  d.support = json_places(j.at("support"), "datum.support");
  d.bits = j.at("bits").get<std::vector<std::vector<BrBit>>>();
  d.real_pattern = j.at("real_pattern").get<std::uint32_t>();
  for (const Json& s : j.at("real_slots"))
    d.real_slots.push_back({s.at("component").get<std::size_t>(), s.at("embedding").get<int>()});
  return d;
}

std::string join_places(const std::vector<Place>& vs) {
  std::string out;
  for (const Place& v : vs) out += (out.empty() ? "" : ", ") + v.str();
  return out.empty() ? "-" : out;
}

}  // namespace

Report make_report(const Instance& inst) {
  Report r;
  r.instance = inst;
  r.seed = inst.options.seed;
  r.verdict = decide(inst.E, inst.A, DecideOptions{inst.options.parallel});
  return r;
}

Json local_to_json(const LocalVerdict& lv) {
  Json j;
  j["place"] = place_json(lv.place);
  j["embeddable"] = lv.embeddable;
  j["rule"] = lv.rule;
  Json data = Json::object();
  for (const auto& [k, v] : lv.data) data[k] = v;
  j["data"] = data;
  return j;
}

LocalVerdict local_from_json(const Json& j) {
  LocalVerdict lv;
  lv.place = json_place(j.at("place"), "local.place");
  lv.embeddable = j.at("embeddable").get<bool>();
  lv.rule = j.at("rule").get<std::string>();
  for (const auto& [k, v] : j.at("data").items()) lv.data[k] = v.get<std::string>();
  return lv;
}

Json sha_to_json(const ShaGroup& g) {
  Json j;
  j["m"] = g.m;
  j["order"] = g.order();
  j["elements"] = g.elements;
  Json basis = Json::array();
  for (std::uint32_t x : g.basis) basis.push_back({{"mask", x}, {"partition", partition_str(x, g.m)}});
  j["basis"] = basis;
  j["nonsplit"] = g.nonsplit;
  j["reduced_elements"] = g.reduced_elements;
  return j;
}

ShaGroup sha_from_json(const Json& j) {
  ShaGroup g;
  g.m = j.at("m").get<unsigned>();
  g.elements = j.at("elements").get<std::vector<std::uint32_t>>();
  for (const Json& b : j.at("basis")) g.basis.push_back(b.at("mask").get<std::uint32_t>());
  g.nonsplit = j.at("nonsplit").get<std::vector<unsigned>>();
  g.reduced_elements = j.at("reduced_elements").get<std::vector<std::uint32_t>>();
  return g;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["outcome"] = to_string(v.outcome);
  j["exit_code"] = exit_code(v.outcome);
  j["reason"] = v.reason;
  Json nec = Json::array();
  for (const NecessaryCheck& c : v.necessary.checks)
    nec.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["necessary"] = nec;
  Json locals = Json::array();
  for (const LocalVerdict& lv : v.locals) locals.push_back(local_to_json(lv));
  j["locals"] = locals;
  j["obstructed_places"] = places_json(v.obstructed_places);
  j["orientation_places"] = places_json(v.orientation_places);
  j["sha"] = v.sha ? sha_to_json(*v.sha) : Json(nullptr);
  j["datum"] = v.datum ? datum_to_json(*v.datum) : Json(nullptr);
  Json fb = Json::array();
  const unsigned m = v.sha ? v.sha->m : 0;
  for (const auto& [x, f] : v.f_basis) fb.push_back({{"mask", x}, {"partition", partition_str(x, m)}, {"f", f}});
  j["f_basis"] = fb;
  if (v.witness)
    j["witness"] = {{"mask", *v.witness}, {"partition", partition_str(*v.witness, m)}};
  else
    j["witness"] = nullptr;
  return j;
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  v.reason = j.at("reason").get<std::string>();
  for (const Json& c : j.at("necessary"))
    v.necessary.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                                  c.at("detail").get<std::string>()});
  for (const Json& l : j.at("locals")) v.locals.push_back(local_from_json(l));
  v.obstructed_places = json_places(j.at("obstructed_places"), "verdict.obstructed_places");
  v.orientation_places = json_places(j.at("orientation_places"), "verdict.orientation_places");
  if (!j.at("sha").is_null()) v.sha = sha_from_json(j.at("sha"));
  if (!j.at("datum").is_null()) v.datum = datum_from_json(j.at("datum"));
  for (const Json& f : j.at("f_basis"))
    v.f_basis.emplace_back(f.at("mask").get<std::uint32_t>(), f.at("f").get<BrBit>());
  if (!j.at("witness").is_null()) v.witness = j.at("witness").at("mask").get<std::uint32_t>();
  return v;
}

Json report_to_json(const Report& r) {
  Json j;
  j["seed"] = r.seed;
  j["instance"] = instance_to_json(r.instance);
  j["verdict"] = verdict_to_json(r.verdict);
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  try {
    r.seed = j.at("seed").get<std::uint64_t>();
    r.instance = instance_from_json(j.at("instance"));
    r.verdict = verdict_from_json(j.at("verdict"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("report: ") + e.what());
  }
  return r;
}

std::string render_local_text(const LocalVerdict& lv) {
  std::ostringstream os;
  os << lv.place.str() << "  " << (lv.embeddable ? "true " : "false") << "  " << lv.rule;
  for (const auto& [k, v] : lv.data) os << "  " << k << "=" << v;
  return os.str();
}

std::string render_sha_text(const ShaGroup& g) {
  std::ostringstream os;
  os << "order " << g.order() << "\n";
  os << "basis";
  if (g.basis.empty()) os << " (trivial)";
  for (std::uint32_t x : g.basis) os << " " << partition_str(x, g.m);
  os << "\n";
  return os.str();
}

std::string render_text(const Report& r) {
  const Verdict& v = r.verdict;
  std::ostringstream os;
  os << "instance   " << etale_to_json(r.instance.E).dump() << "\n";
  os << "algebra    " << algebra_to_json(r.instance.A).dump() << "\n";
  os << "seed       " << r.seed << "\n";
  os << "hash       " << std::hex << instance_hash(r.instance) << std::dec << "\n\n";

  os << "necessary conditions\n";
  for (const NecessaryCheck& c : v.necessary.checks)
    os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";

  os << "local verdicts\n";
  for (const LocalVerdict& lv : v.locals) os << "  " << render_local_text(lv) << "\n";
  if (!v.orientation_places.empty()) os << "orientation required at " << join_places(v.orientation_places) << "\n";

  if (v.sha) {
    os << "sha        order " << v.sha->order() << ", basis";
    if (v.sha->basis.empty()) os << " (trivial)";
    for (std::uint32_t x : v.sha->basis) os << " " << partition_str(x, v.sha->m);
    os << "\n";
  }
  if (v.datum) {
    os << "datum      support " << join_places(v.datum->support) << "\n";
    for (std::size_t i = 0; i < v.datum->bits.size(); ++i) {
      os << "  E" << i + 1 << " ";
      for (BrBit b : v.datum->bits[i]) os << ' ' << int(b);
      os << "\n";
    }
  }
  if (!v.f_basis.empty()) {
    os << "f on basis\n";
    for (const auto& [x, f] : v.f_basis) os << "  f" << partition_str(x, v.sha->m) << " = " << int(f) << "\n";
  }
  os << "\nverdict    " << to_string(v.outcome) << " (exit " << exit_code(v.outcome) << ")\n";
  if (v.witness) os << "witness    " << partition_str(*v.witness, v.sha->m) << "\n";
  os << "reason     " << v.reason << "\n";
  return os.str();
}

}  // namespace torembed

#include "torembed/instance.hpp"

#include <fstream>
#include <sstream>

#include "torembed/errors.hpp"

namespace torembed {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::Schema, path + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, std::string("missing field '") + key + "'");
  return *it;
}

unsigned json_unsigned(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema(path, "expected a non-negative integer");
  return j.get<unsigned>();
}

Case parse_case(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  const auto s = j.get<std::string>();
  if (s == "orthogonal") return Case::Orthogonal;
  if (s == "symplectic") return Case::Symplectic;
  if (s == "unitary") return Case::Unitary;
  schema(path, "unknown case '" + s + "'");
}

Json sig_json(const Signature& s) { return Json::array({s.pos, s.neg}); }

Signature json_sig(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema(path, "expected [positives, negatives]");
  return {json_unsigned(j[0], path + "[0]"), json_unsigned(j[1], path + "[1]")};
}

std::vector<Place> json_places(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of places");
  std::vector<Place> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(json_place(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Json places_json(const std::vector<Place>& vs) {
  Json out = Json::array();
  for (const Place& v : vs) out.push_back(place_json(v));
  return out;
}

std::vector<Rat> json_rats(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a nonempty array of rationals");
  std::vector<Rat> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(json_rat(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Json rats_json(const std::vector<Rat>& xs) {
  Json out = Json::array();
  for (const Rat& x : xs) out.push_back(rat_json(x));
  return out;
}

}  // namespace

Int json_int(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Int(j.dump());
  if (j.is_string()) {
    Int n;
    if (n.set_str(j.get<std::string>(), 10) != 0) schema(path, "not an integer: '" + j.get<std::string>() + "'");
    return n;
  }
  schema(path, "expected an integer");
}

Rat json_rat(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(Int(j.dump()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
      schema(path, "not a rational: '" + j.get<std::string>() + "'");
    }
  }
  schema(path, "expected an integer or a \"p/q\" string");
}

Place json_place(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return Place::parse(j.get<std::string>());
    if (j.is_number_integer()) return Place::prime(Int(j.dump()));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    schema(path, e.what());
  }
  schema(path, "expected a prime or \"real\"");
}

Json int_json(const Int& n) {
  if (n.fits_slong_p()) return Json(n.get_si());
  return Json(n.get_str());
}

Json rat_json(const Rat& q) {
  if (q.get_den() == 1) return int_json(q.get_num());
  return Json(q.get_str());
}

Json place_json(const Place& v) { return v.is_real() ? Json("real") : int_json(v.p()); }

Json etale_to_json(const EtaleAlgebra& E) {
  Json j;
  j["case"] = to_string(E.kase);
  if (E.kase == Case::Unitary) j["delta"] = int_json(E.delta);
  Json comps = Json::array();
  for (const Component& c : E.components) {
    Json cj;
    cj["F"] = c.F.is_rational() ? Json("Q") : Json{{"sqrt", int_json(c.F.m)}};
    cj["kind"] = to_string(c.kind);
    if (c.kind == ComponentKind::Quad) cj["d"] = int_json(c.d);
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j;
}

EtaleAlgebra etale_from_json(const Json& j, const std::string& path) {
  EtaleAlgebra E;
  E.kase = parse_case(field(j, "case", path), path + ".case");
  if (E.kase == Case::Unitary) E.delta = json_int(field(j, "delta", path), path + ".delta");
  const Json& comps = field(j, "components", path);
  if (!comps.is_array() || comps.empty()) schema(path + ".components", "expected a nonempty array");
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const std::string cp = path + ".components[" + std::to_string(k) + "]";
    const Json& cj = comps[k];
    Component c;
    const Json& f = field(cj, "F", cp);
    if (f.is_string() && f.get<std::string>() == "Q") {
      c.F.m = 1;
    } else if (f.is_object()) {
      c.F.m = json_int(field(f, "sqrt", cp + ".F"), cp + ".F.sqrt");
    } else {
      schema(cp + ".F", "expected \"Q\" or {\"sqrt\": m}");
    }
    const Json& kind = field(cj, "kind", cp);
    const std::string ks = kind.is_string() ? kind.get<std::string>() : "";
    if (ks == "quad") {
      c.kind = ComponentKind::Quad;
      const Rat d = json_rat(field(cj, "d", cp), cp + ".d");
      if (d == 0) schema(cp + ".d", "must be nonzero");
      c.d = integral_rep(d);
    } else if (ks == "split") {
      c.kind = ComponentKind::SplitPair;
    } else if (ks == "trivial") {
      c.kind = ComponentKind::Trivial;
    } else {
      schema(cp + ".kind", "expected quad, split or trivial");
    }
    E.components.push_back(c);
  }
  return E;
}

Json algebra_to_json(const InvolutionAlgebra& A) {
  Json j;
  if (const auto* a = std::get_if<OrthSplit>(&A.v)) {
    j["variant"] = "orth_split";
    j["q"] = rats_json(a->q.coeffs);
  } else if (const auto* a = std::get_if<OrthNonSplit>(&A.v)) {
    j["variant"] = "orth_nonsplit";
    j["ram"] = places_json(a->ram);
    j["r"] = a->r;
    j["disc"] = int_json(a->disc);
    Json prof = Json::object();
    for (const auto& [v, p] : a->profiles) {
      Json pj;
      pj["hasse"] = p.hasse;
      if (p.sig) pj["sig"] = sig_json(*p.sig);
      prof[v.str()] = pj;
    }
    j["profiles"] = prof;
  } else if (const auto* a = std::get_if<Sympl>(&A.v)) {
    j["variant"] = "sympl";
    j["n"] = a->n;
    j["ram"] = places_json(a->ram);
    if (a->sig) j["sig"] = sig_json(*a->sig);
  } else {
    const auto& u = std::get<UnitSplit>(A.v);
    j["variant"] = "unit_split";
    j["delta"] = int_json(u.delta);
    j["h"] = rats_json(u.h);
  }
  return j;
}

InvolutionAlgebra algebra_from_json(const Json& j, const std::string& path) {
  const Json& vj = field(j, "variant", path);
  const std::string variant = vj.is_string() ? vj.get<std::string>() : "";
  if (variant == "orth_split") {
    try {
      return InvolutionAlgebra{OrthSplit{DiagonalForm(json_rats(field(j, "q", path), path + ".q"))}};
    } catch (const std::invalid_argument& e) {
      schema(path + ".q", e.what());
    }
  }
  if (variant == "orth_nonsplit") {
    OrthNonSplit a;
    a.ram = json_places(field(j, "ram", path), path + ".ram");
    a.r = json_unsigned(field(j, "r", path), path + ".r");
    a.disc = json_int(field(j, "disc", path), path + ".disc");
    if (auto it = j.find("profiles"); it != j.end()) {
      if (!it->is_object()) schema(path + ".profiles", "expected an object keyed by place");
      for (const auto& [key, pj] : it->items()) {
        const std::string pp = path + ".profiles." + key;
        Place v = json_place(Json(key), pp);
        SplitPlaceProfile prof;
        if (auto h = pj.find("hasse"); h != pj.end()) {
          const unsigned bit = json_unsigned(*h, pp + ".hasse");
          if (bit > 1) schema(pp + ".hasse", "expected 0 or 1");
          prof.hasse = static_cast<BrBit>(bit);
        }
        if (auto s = pj.find("sig"); s != pj.end()) prof.sig = json_sig(*s, pp + ".sig");
        a.profiles[v] = prof;
      }
    }
    return InvolutionAlgebra{a};
  }
  if (variant == "sympl") {
    Sympl a;
    a.n = json_unsigned(field(j, "n", path), path + ".n");
    if (auto it = j.find("ram"); it != j.end()) a.ram = json_places(*it, path + ".ram");
    if (auto it = j.find("sig"); it != j.end()) a.sig = json_sig(*it, path + ".sig");
    return InvolutionAlgebra{a};
  }
  if (variant == "unit_split") {
    UnitSplit a;
    a.delta = json_int(field(j, "delta", path), path + ".delta");
    a.h = json_rats(field(j, "h", path), path + ".h");
    return InvolutionAlgebra{a};
  }
  schema(path + ".variant", "expected orth_split, orth_nonsplit, sympl or unit_split");
}

namespace {

Json budget_json(const Budget& b) {
  return Json{{"factor_guard_bits", b.factor_guard_bits}, {"pattern_cap", b.pattern_cap},
              {"component_cap", b.component_cap},         {"real_slot_cap", b.real_slot_cap},
              {"witness_scan", b.witness_scan},           {"prime_scan", b.prime_scan},
              {"threads", b.threads}};
}

Budget json_budget(const Json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  Budget b = budget();
  for (const auto& [key, val] : j.items()) {
    const std::string p = path + "." + key;
    if (!val.is_number_integer()) schema(p, "expected an integer");
    if (key == "factor_guard_bits") b.factor_guard_bits = json_unsigned(val, p);
    else if (key == "pattern_cap") b.pattern_cap = json_unsigned(val, p);
    else if (key == "component_cap") b.component_cap = json_unsigned(val, p);
    else if (key == "real_slot_cap") b.real_slot_cap = json_unsigned(val, p);
    else if (key == "witness_scan") b.witness_scan = val.get<std::uint64_t>();
    else if (key == "prime_scan") b.prime_scan = val.get<std::uint64_t>();
    else if (key == "threads") b.threads = val.get<int>();
    else schema(p, "unknown budget field");
  }
  return b;
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json j;
  j["version"] = inst.version;
  j["etale"] = etale_to_json(inst.E);
  j["algebra"] = algebra_to_json(inst.A);
  Json o;
  o["seed"] = inst.options.seed;
  o["parallel"] = inst.options.parallel;
  if (inst.options.budget) o["budget"] = budget_json(*inst.options.budget);
  j["options"] = o;
  return j;
}

Instance instance_from_json(const Json& j) {
  Instance inst;
  if (!j.is_object()) schema("$", "expected an object");
  const Json& ver = field(j, "version", "$");
  if (!ver.is_number_integer() || ver.get<int>() != kInstanceVersion)
    schema("version", "unsupported version (expected " + std::to_string(kInstanceVersion) + ")");
  inst.E = validate(etale_from_json(field(j, "etale", "$")));
  inst.A = validate_algebra(algebra_from_json(field(j, "algebra", "$")));
  if (auto it = j.find("options"); it != j.end()) {
    if (!it->is_object()) schema("options", "expected an object");
    if (auto s = it->find("seed"); s != it->end()) {
      if (!s->is_number_unsigned()) schema("options.seed", "expected a non-negative integer");
      inst.options.seed = s->get<std::uint64_t>();
    }
    if (auto p = it->find("parallel"); p != it->end()) {
      if (!p->is_boolean()) schema("options.parallel", "expected a boolean");
      inst.options.parallel = p->get<bool>();
    }
    if (auto b = it->find("budget"); b != it->end()) inst.options.budget = json_budget(*b, "options.budget");
  }
  return inst;
}

Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // report the line of the failing byte
    std::size_t line = 1;
    for (std::size_t k = 0; k < e.byte && k < text.size(); ++k)
      if (text[k] == '\n') ++line;
    throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ": " + e.what());
  }
  return instance_from_json(j);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string canonical_text(const Instance& inst) {
  Json j = instance_to_json(inst);
  j.erase("options");  // the hash identifies the mathematical content only
  return j.dump();
}

std::uint64_t instance_hash(const Instance& inst) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text(inst)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace torembed

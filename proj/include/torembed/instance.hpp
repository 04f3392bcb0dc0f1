#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "torembed/budget.hpp"
#include "torembed/csa.hpp"
#include "torembed/etale.hpp"

namespace torembed {

using Json = nlohmann::ordered_json;

inline constexpr int kInstanceVersion = 1;

struct InstanceOptions {
  std::uint64_t seed = 0;
  bool parallel = false;
  std::optional<Budget> budget;  // overrides applied by the CLI
  friend bool operator==(const InstanceOptions&, const InstanceOptions&) = default;
};

struct Instance {
  int version = kInstanceVersion;
  EtaleAlgebra E;
  InvolutionAlgebra A{OrthSplit{}};
  InstanceOptions options;
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Field-level codecs; errors are ErrorKind::Schema with a JSON path prefix.
Int json_int(const Json& j, const std::string& path);
Rat json_rat(const Json& j, const std::string& path);
Place json_place(const Json& j, const std::string& path);
Json int_json(const Int& n);   // number when it fits, else string
Json rat_json(const Rat& q);
Json place_json(const Place& v);

Json etale_to_json(const EtaleAlgebra& E);
EtaleAlgebra etale_from_json(const Json& j, const std::string& path = "etale");
Json algebra_to_json(const InvolutionAlgebra& A);
InvolutionAlgebra algebra_from_json(const Json& j, const std::string& path = "algebra");

Json instance_to_json(const Instance& inst);
/// Parses and validates; validation failures keep their own error kinds.
Instance instance_from_json(const Json& j);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Canonical serialization of the normalized instance and its FNV-1a hash.
std::string canonical_text(const Instance& inst);
std::uint64_t instance_hash(const Instance& inst);

}  // namespace torembed

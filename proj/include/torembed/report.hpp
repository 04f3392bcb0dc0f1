#pragma once

#include <cstdint>
#include <string>

#include "torembed/embed.hpp"
#include "torembed/instance.hpp"

namespace torembed {

struct Report {
  Instance instance;  // normalized echo
  Verdict verdict;
  std::uint64_t seed = 0;
  friend bool operator==(const Report&, const Report&) = default;
};

Report make_report(const Instance& inst);

Json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);
Json sha_to_json(const ShaGroup& g);
ShaGroup sha_from_json(const Json& j);
Json local_to_json(const LocalVerdict& lv);
LocalVerdict local_from_json(const Json& j);

Json report_to_json(const Report& r);
Report report_from_json(const Json& j);

std::string render_text(const Report& r);
std::string render_local_text(const LocalVerdict& lv);
std::string render_sha_text(const ShaGroup& g);

}  // namespace torembed

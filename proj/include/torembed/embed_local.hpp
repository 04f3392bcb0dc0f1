#pragma once

#include <map>
#include <string>
#include <vector>

#include "torembed/csa.hpp"
#include "torembed/etale.hpp"

namespace torembed {

struct LocalVerdict {
  Place place = Place::real();
  bool embeddable = false;
  std::string rule;                          // which local clause decided
  std::map<std::string, std::string> data;   // the clause's witnesses
  friend bool operator==(const LocalVerdict&, const LocalVerdict&) = default;
};

/// Throws CaseMismatch / DegreeMismatch when E and A cannot be compared at all.
void check_compatible(const EtaleAlgebra& E, const InvolutionAlgebra& A);

/// Index of the first component whose field factors fail to split A at v, or -1.
int factor_obstruction(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v);

LocalVerdict local_embeddable(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v);

/// Real, 2 and every prime where E or A carries ramification or nontrivial invariants.
std::vector<Place> bad_places(const EtaleAlgebra& E, const InvolutionAlgebra& A);

/// Verdict at a place outside the bad set, tagged as generic after the check.
LocalVerdict generic_certificate(const EtaleAlgebra& E, const InvolutionAlgebra& A, const Place& v);

std::vector<LocalVerdict> local_scan_serial(const EtaleAlgebra& E, const InvolutionAlgebra& A);
std::vector<LocalVerdict> local_scan_parallel(const EtaleAlgebra& E, const InvolutionAlgebra& A);
std::vector<LocalVerdict> local_scan(const EtaleAlgebra& E, const InvolutionAlgebra& A, bool parallel = true);

}  // namespace torembed

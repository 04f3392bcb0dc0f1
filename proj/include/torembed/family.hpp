#pragma once

#include <optional>
#include <vector>

#include "torembed/embed.hpp"
#include "torembed/instance.hpp"

namespace torembed {

/// a nonsquare and b square at each of four places.
struct NonsplitPair {
  Int a;
  Int b;
};

/// Smallest squarefree a > 1 prime to the places and nonsquare at each of them;
/// then the smallest prime b prime to the places, square at each of them, with (b/a) = -1.
NonsplitPair local_global_pair(const std::vector<Place>& places, const Int& bound = Int(1000000));
/// E = Q(sqrt a, sqrt b) over F = Q(sqrt ab); A = M_2(H) with H ramified at the four places.
Instance local_global_instance(const std::vector<Place>& places, const Int& bound = Int(1000000));
/// Checks the four-symbol table for (a, b) at the places.
bool local_global_table_holds(const std::vector<Place>& places, const Int& a, const Int& b);

/// Components (Q(sqrt a), b), (Q(sqrt b), a), (Q(sqrt ab), a).
EtaleAlgebra three_subfield_etale(const Int& a, const Int& b);
/// Diagonalized trace form with its first two coefficients scaled by c.
DiagonalForm twisted_trace_form(const EtaleAlgebra& E, const Rat& c);

struct TwistResult {
  Instance instance;
  Int c;
  Verdict verdict;
};

/// First squarefree c > 1 whose twist is locally embeddable everywhere but obstructed.
TwistResult three_subfield_instance(const Int& a = Int(17), const Int& b = Int(89), const Int& c_bound = Int(2000));

}  // namespace torembed

#pragma once

#include <algorithm>
#include <vector>

#include "urm/subcubic/pattern.hpp"

namespace urm::subcubic {

// Every case template is rooted at a 4-cycle c, a1, b1, a2 with c, b1 on
// side B. In the Case 2 templates a1 is the degree-3 vertex.

/// The six reduction patterns; open vertices are the kept boundary.
inline const std::vector<Pattern>& reduction_patterns() {
  static const std::vector<Pattern> table = [] {
    std::vector<Pattern> t;
    t.push_back(make_pattern("R.1", "reduction", "c:B b1:B b2:B a1:A a2:A a3:A+ a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3 b2-a1* b2-a4 b2-a3"));
    t.push_back(make_pattern("R.2", "reduction", "c:B b1:B b3:B a1:A+ a2:A a3:A a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3 b3-a4 b3-a3*"));
    t.push_back(make_pattern("R.3", "reduction",
                             "c:B b1:B b2:B b3:B a1:A+ a2:A a3:A a4:A a5:A a6:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* a4-b2 a3-b3 b3-a5 b3-a6 "
                             "b2-a5* b2-a6"));
    t.push_back(make_pattern("R.4", "reduction", "c:B b1:B b2:B a1:A a2:A a3:A+ a4:A+",
                             "c-a1 c-a2 c-a4 b1-a1 b1-a2* b1-a3 b2-a1* b2-a4 b2-a3"));
    t.push_back(make_pattern("R.5", "reduction", "c:B b1:B b2:B+ b3:B a1:A+ a2:A a3:A a4:A",
                             "c-a1 c-a2 c-a4* b1-a1 b1-a2 b1-a3* b2-a4 b2-a3 b3-a4 b3-a3"));
    t.push_back(make_pattern("R.6", "reduction", "c:B b1:B b2:B+ b3:B+ a1:A+ a2:A a3:A a4:A",
                             "c-a1 c-a2 c-a4* b1-a1 b1-a2 b1-a3* b2-a4 b2-a3 b3-a4 b3-a3"));
    return t;
  }();
  return table;
}

/// Templates for a 4-cycle with A-degrees (3, 2), in scan order. Closed and
/// more specific templates come before the ones they refine; (xvii) and
/// the catch-all (i) of the third case come last.
inline const std::vector<Pattern>& case2_patterns() {
  static const std::vector<Pattern> table = [] {
    const char* k6 = "c-a1 c-a2 c-a4 b1-a1 b1-a2 b1-a3";
    auto with = [](const char* base, const char* more) { return std::string(base) + " " + more; };
    std::vector<Pattern> t;
    // Shared B neighborhood.
    t.push_back(make_pattern("case2_1.ii", "case2_1",
                             "c:B b1:B a1:A a2:A ac:B ab1:B aa1:A+ aa2:A",
                             "c-a1 c-a2* b1-a1 b1-a2 ac-aa1 ac-aa2 ab1-aa1 ab1-aa2* a1-ac*"));
    t.push_back(make_pattern("case2_1.i", "case2_1", "c:B b1:B a1:A+ a2:A", "c-a1 c-a2* b1-a1 b1-a2"));
    // One private A vertex.
    t.push_back(make_pattern("case2_2.ii", "case2_2", "c:B b1:B a1:A a2:A a3:A+ b2:B",
                             "c-a1 c-a2* b1-a1 b1-a2 b1-a3* b2-a1 b2-a3"));
    t.push_back(make_pattern("case2_2.i", "case2_2", "c:B b1:B a1:A+ a2:A a3:A+",
                             "c-a1 c-a2* b1-a1 b1-a2 b1-a3*"));
    // Two private A vertices: excluded shapes first so they are counted.
    t.push_back(make_pattern("case2_3.iv", "case2_3", "c:B b1:B b2:B a1:A a2:A a3:A+ a4:A",
                             with(k6, "b2-a1 b2-a4 b2-a3"), true));
    t.push_back(make_pattern("case2_3.v", "case2_3", "c:B b1:B b2:B a1:A a2:A a3:A+ a4:A+",
                             with(k6, "b2-a1 b2-a4 b2-a3"), true));
    t.push_back(make_pattern("case2_3.vi", "case2_3", "c:B b1:B b3:B a1:A+ a2:A a3:A a4:A",
                             with(k6, "b3-a4 b3-a3"), true));
    t.push_back(make_pattern("case2_3.ix", "case2_3", "c:B b1:B b2:B+ b3:B a1:A+ a2:A a3:A a4:A",
                             with(k6, "b2-a4 b2-a3 b3-a4 b3-a3"), true));
    t.push_back(make_pattern("case2_5.xviii", "case2_5",
                             "c:B b1:B a1:A+ a2:A a3:A a4:A b2:B b3:B a5:A a6:A+",
                             with(k6, "a4-b2 a3-b3 b3-a5 b3-a6 b2-a5 b2-a6"), true));
    t.push_back(make_pattern("case2_3.ii", "case2_3", "c:B b1:B b2:B b3:B a1:A a2:A a3:A a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3 b2-a1* b2-a4 b2-a3 b3-a4 b3-a3*"));
    t.push_back(make_pattern("case2_3.iii", "case2_3", "c:B b1:B b2:B a1:A a2:A a3:A a4:A",
                             "c-a1* c-a2 c-a4 b1-a1 b1-a2 b1-a3 b2-a1 b2-a4 b2-a3*"));
    t.push_back(make_pattern("case2_3.x", "case2_3", "c:B b1:B b2:B b3:B a1:A a2:A a3:A a4:A",
                             "c-a1 c-a2 c-a4 b1-a1 b1-a2* b1-a3 b2-a1 b2-a3* b3-a4* b3-a3"));
    t.push_back(make_pattern("case2_3.xi", "case2_3", "c:B b1:B b2:B b3:B a1:A a2:A a3:A a4:A+",
                             "c-a1 c-a2 c-a4 b1-a1 b1-a2* b1-a3 b2-a1 b2-a3* b3-a4* b3-a3"));
    t.push_back(make_pattern("case2_3.xii", "case2_3", "c:B b1:B b2:B a1:A a2:A a3:A+ a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* b2-a1 b2-a4*"));
    t.push_back(make_pattern("case2_3.xiii", "case2_3", "c:B b1:B b2:B a1:A a2:A a3:A+ a4:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* b2-a1 b2-a4*"));
    // A 4-cycle hanging off a1.
    t.push_back(make_pattern("case2_4.xiv", "case2_4",
                             "c:B b1:B a1:A a2:A a3:A+ a4:A+ b5:B b6:B a7:A+ a8:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* a1-b5* a7-b5 a8-b5 a7-b6 a8-b6*"));
    t.push_back(make_pattern("case2_4.xv", "case2_4",
                             "c:B b1:B a1:A a2:A a3:A+ a4:A+ b5:B b6:B a7:A+ a8:A a9:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* a1-b5* a7-b5 a8-b5 a7-b6 a8-b6* "
                             "b6-a9"));
    t.push_back(make_pattern("case2_5.xvi", "case2_5",
                             "c:B b1:B a1:A a2:A a3:A a4:A+ b2:B b3:B a5:A a6:A+",
                             "c-a1 c-a2 c-a4* b1-a1 b1-a2* b1-a3 a1-b2* a3-b3* b3-a5 b3-a6 b2-a5 "
                             "b2-a6"));
    t.push_back(make_pattern("case2_3.vii", "case2_3", "c:B b1:B b3:B a1:A+ a2:A a3:A+ a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3 b3-a4* b3-a3"));
    t.push_back(make_pattern("case2_3.viii", "case2_3", "c:B b1:B b3:B a1:A+ a2:A a3:A+ a4:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3 b3-a4* b3-a3"));
    t.push_back(make_pattern("case2_5.xvii", "case2_5",
                             "c:B b1:B a1:A+ a2:A a3:A a4:A+ b2:B b3:B a5:A a6:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* a4-b2 a3-b3 b3-a5* b3-a6 b2-a5 "
                             "b2-a6"));
    t.push_back(make_pattern("case2_3.i", "case2_3", "c:B b1:B a1:A+ a2:A a3:A+ a4:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3*"));
    return t;
  }();
  return table;
}

/// Templates for a 4-cycle with A-degrees (3, 3), in scan order.
inline const std::vector<Pattern>& case3_patterns() {
  static const std::vector<Pattern> table = [] {
    std::vector<Pattern> t;
    // Shared B neighborhood, dispatched on the labels of the U-neighbors.
    // A ⊥ neighbor is treated like a ⊢ one (requirement "=D").
    t.push_back(make_pattern("case3_1.iv", "case3_1", "c:B b1:B a1:A+ a2:A+ s:A=D",
                             "c-a1 c-a2 b1-a1 b1-a2 s-c* s-b1"));
    t.push_back(make_pattern("case3_1.i.common", "case3_1", "c:B b1:B a1:A+ a2:A+ s:A=T",
                             "c-a1 c-a2* b1-a1 b1-a2 s-c s-b1"));
    t.push_back(make_pattern("case3_1.i", "case3_1", "c:B b1:B a1:A+ a2:A+ s1:A=T s2:A=T",
                             "c-a1 c-a2* b1-a1 b1-a2 s1-c s2-b1"));
    t.push_back(make_pattern("case3_1.ii", "case3_1", "c:B b1:B a1:A+ a2:A+ s1:A=T s2:A=D",
                             "c-a1 c-a2* b1-a1 b1-a2 s1-c s2-b1*"));
    t.push_back(make_pattern("case3_1.iii", "case3_1", "c:B b1:B a1:A+ a2:A+ s1:A=D s2:A=D",
                             "c-a1 c-a2 b1-a1 b1-a2 s1-c* s2-b1*"));
    // One private A vertex.
    t.push_back(make_pattern("case3_2", "case3_2", "c:B b1:B a1:A+ a2:A+ a3:A+",
                             "c-a1* c-a2 b1-a1 b1-a2 b1-a3*"));
    // Two private A vertices.
    t.push_back(make_pattern("case3_3.iii", "case3_3", "c:B b1:B b2:B a1:A a2:A+ a3:A a4:A",
                             "c-a1 c-a2 c-a4 b1-a1 b1-a2 b1-a3 b2-a1 b2-a4 b2-a3", true));
    t.push_back(make_pattern("case3_3.ii", "case3_3", "c:B b1:B b2:B b3:B a1:A a2:A a3:A a4:A",
                             "c-a1 c-a2 c-a4 b1-a1 b1-a2 b1-a3 b2-a1 b2-a4 b2-a3 b3-a4 b3-a3 "
                             "b3-a2"));
    t.push_back(make_pattern("case3_3.v", "case3_3", "c:B b1:B b2:B b3:B a1:A a2:A a3:A a4:A",
                             "c-a1 c-a2 c-a4* b1-a1* b1-a2 b1-a3 b2-a1 b2-a4 b2-a3 b3-a2 b3-a3*"));
    t.push_back(make_pattern("case3_3.ix", "case3_3", "c:B b1:B b2:B b3:B a1:A+ a2:A a3:A a4:A",
                             "c-a1 c-a2 c-a4* b1-a1* b1-a2 b1-a3 b2-a4 b2-a3 b3-a2 b3-a3*"));
    t.push_back(make_pattern("case3_3.iv", "case3_3", "c:B b1:B b2:B a1:A a2:A+ a3:A+ a4:A",
                             "c-a1 c-a2 c-a4* b1-a1* b1-a2 b1-a3 b2-a1 b2-a4 b2-a3"));
    t.push_back(make_pattern("case3_3.vi", "case3_3", "c:B b1:B b2:B b3:B a1:A a2:A+ a3:A a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3 b2-a1* b2-a4 b2-a3 b3-a4 b3-a3*"));
    t.push_back(make_pattern("case3_3.vii", "case3_3", "c:B b1:B b2:B a1:A a2:A+ a3:A+ a4:A",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3* b2-a1* b2-a4"));
    t.push_back(make_pattern("case3_3.viii", "case3_3", "c:B b1:B b2:B a1:A+ a2:A+ a3:A a4:A",
                             "c-a1 c-a2 c-a4* b1-a1 b1-a2 b1-a3* b2-a3 b2-a4"));
    t.push_back(make_pattern("case3_3.i", "case3_3", "c:B b1:B a1:A+ a2:A+ a3:A+ a4:A+",
                             "c-a1 c-a2* c-a4 b1-a1 b1-a2 b1-a3*"));
    return t;
  }();
  return table;
}

/// Largest template size over the case catalogue; the brute-force threshold.
inline std::size_t largest_pattern_size() {
  std::size_t best = 0;
  for (const auto* table : {&case2_patterns(), &case3_patterns()}) {
    for (const auto& p : *table) best = std::max(best, p.size());
  }
  return best;
}

} // namespace urm::subcubic

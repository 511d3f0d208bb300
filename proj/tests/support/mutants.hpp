#pragma once
// One topology mutant per architecture constraint: a valid topology with a
// single injected breach and the constraint id it must trip.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

namespace nbsim::test {

struct Mutant {
  std::string name;
  std::string constraint;
  std::function<Topology()> build;
};

inline Cell& cell_of(Topology& t, int id) {
  for (auto& c : t.cells) {
    if (c.id == id) return c;
  }
  throw std::out_of_range("no cell");
}

inline std::vector<Mutant> topology_mutants() {
  return {
      {"arch1 small cell without S1", "arch1.own-s1",
       [] {
         auto t = arch1_topology();
         t.s1_links.erase(2);
         return t;
       }},
      {"arch1 small cell without MIB/SIB", "arch1.own-mib-sib",
       [] {
         auto t = arch1_topology();
         cell_of(t, 2).system_info = false;
         return t;
       }},
      {"arch1 small cell without access resources", "arch1.complete-cell",
       [] {
         auto t = arch1_topology();
         cell_of(t, 2).prach_paging = false;
         return t;
       }},
      {"arch2 non-anchor holding S1", "arch2.only-anchor-s1",
       [] {
         auto t = arch2_topology();
         t.s1_links.insert(2);
         return t;
       }},
      {"arch2 anchor without S1", "arch2.anchor-s1",
       [] {
         auto t = arch2_topology();
         t.s1_links.erase(1);
         return t;
       }},
      {"arch2 non-anchor without X2", "arch2.non-anchor-x2",
       [] {
         auto t = arch2_topology();
         t.x2_links.erase({1, 3});
         return t;
       }},
      {"arch2 non-anchor broadcasting MIB/SIB", "arch2.non-anchor-no-mib-sib",
       [] {
         auto t = arch2_topology();
         cell_of(t, 2).system_info = true;
         return t;
       }},
      {"arch2 small cell as anchor", "arch2.anchor-is-macro",
       [] {
         auto t = arch2_topology();
         auto& c = cell_of(t, 2);
         c.role = CellRole::Anchor;
         c.anchor_prb = 0;
         return t;
       }},
      {"arch3 mismatched cell identity", "arch3.shared-cell-identity",
       [] {
         auto t = arch3_topology();
         cell_of(t, 3).cell_identity = 99;
         return t;
       }},
      {"arch3 small cell with PRACH and paging", "arch3.no-small-cell-prach-paging",
       [] {
         auto t = arch3_topology();
         cell_of(t, 2).prach_paging = true;
         return t;
       }},
      {"arch3 small cell holding S1", "arch3.only-macro-s1",
       [] {
         auto t = arch3_topology();
         t.s1_links.insert(2);
         return t;
       }},
      {"arch3 small cell broadcasting MIB/SIB", "arch3.no-small-cell-mib-sib",
       [] {
         auto t = arch3_topology();
         cell_of(t, 2).system_info = true;
         return t;
       }},
      {"arch3 small cell without X2 to macro", "arch3.x2-to-macro",
       [] {
         auto t = arch3_topology();
         t.x2_links.erase({1, 2});
         return t;
       }},
      {"arch3 macro without S1", "arch3.macro-s1",
       [] {
         auto t = arch3_topology();
         t.s1_links.erase(1);
         return t;
       }},
  };
}

inline std::vector<std::pair<std::string, Topology>> clean_topologies() {
  return {{"arch1", arch1_topology({{200, 0}, {-150, 90}})},
          {"arch1 macro only", arch1_topology({})},
          {"arch2", arch2_topology()},
          {"arch3", arch3_topology()}};
}

}  // namespace nbsim::test

// Three muddy children with child i of depth 2 - i: run phi_3 under each
// semantics and print what happens.
#include <iostream>

#include "dbel/dbel.hpp"

int main() {
  using namespace dbel;
  MuddyInstance inst = build_muddy(3, 3, canonical_depths(3));
  Formula f = phi_k(3);
  std::cout << "phi_3 = " << f << " (depth " << f.modal_depth() << ")\n";
  for (Semantics kind : all_announcement_semantics) {
    std::cout << to_string(kind) << ": phi_3 " << (check(inst.model, inst.initial, f, kind) ? "holds" : "fails");
    auto steps = announcement_steps(inst.model, inst.initial, f, kind);
    std::cout << ", final model has " << steps.back().model.num_states() << " states\n";
  }
  for (const auto& row : amnesia_leakage_matrix())
    std::cout << row.name << " under " << to_string(row.kind) << ": " << (row.actual ? "true" : "false") << "\n";
}

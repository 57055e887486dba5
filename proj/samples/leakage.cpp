// Three worlds where a shallow agent picks up knowledge it never perceived
// under the asymmetric update.
#include <iostream>

#include "dbel/dbel.hpp"

int main() {
  using namespace dbel;
  // agents a=0 and c=2 see only their own world; b=1 links 0-1 and 1-2
  Model m = Model::reflexive({"0", "1", "2"}, {{"p0"}, {"p0"}, {}}, {{{}, {}, {}}, {{1}, {0, 2}, {1}}, {{}, {}, {}}},
                             {{1, 1, 1}, {0, 2, 0}, {2, 2, 2}});
  Formula phi = parse("K[2] K[2] p0");
  Formula k_psi = parse("K[0] K[1] p0");
  std::cout << "K_a K_b p0 at 1: " << check(m, 1, k_psi, Semantics::adpal) << "\n";
  std::cout << "[phi]K_a K_b p0 at 1: " << check(m, 1, announce(phi, k_psi), Semantics::adpal) << "\n";
  std::cout << "F_phi(K_a K_b p0) at 1: " << check(m, 1, f_transform(phi, k_psi), Semantics::adpal) << "\n";
  std::cout << save_model(update_adpal(m, phi).model);
}

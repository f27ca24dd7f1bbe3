// Refines (b - a) + a = b + 0 over the chain a < b and interpolates
// between {0, a} and {b, 2a}.
#include <iostream>

#include "dimgroup/dimgroup.hpp"

int main() {
  using namespace dimgroup;
  const std::vector<std::string> names{"a", "b"};
  const std::vector<std::pair<std::string, std::string>> order{{"a", "b"}};
  const Poset chain = Poset::build(names, order);

  auto e = [&](const char* text) { return parse_expr(chain, text); };
  const RefinementProblem prob(e("b - a"), e("a"), e("b"), e("0"));
  const RefinementMatrix z = refine(prob);
  std::cout << "[" << format_expr(z.z11) << ", " << format_expr(z.z12) << "]\n"
            << "[" << format_expr(z.z21) << ", " << format_expr(z.z22) << "]\n";
  std::cout << "valid: " << std::boolalpha << check_refinement(prob, z) << "\n";

  const GroupElement mid = interpolate(e("0"), e("a"), e("b"), e("2*a"));
  std::cout << "interpolant: " << format_expr(mid) << "\n";
  return 0;
}

#include <stdexcept>

#include "binoether/system.hpp"

namespace binoether {

namespace {

ScalarExpr q(int i) { return ScalarExpr::variable(i); }

SystemSpec dissipative(const PhaseSpace& space, bool squared_generator) {
  const int n = space.dof();
  SystemSpec s{squared_generator ? "dissipative" : "broken-generator", space, MultiVectorField(space, 2), ScalarExpr(),
               MultiVectorField(space, 1)};
  for (int i = 0; i < n; ++i) {
    const ScalarExpr qi = q(i);
    const ScalarExpr pi = q(n + i);
    s.W.set(i, n + i, -pi);
    s.h += pi + qi;
    s.E.set(i, squared_generator ? pow(pi + qi, 2) : pi + qi);
  }
  return s;
}

SystemSpec canonical_noether(const PhaseSpace& space) {
  const int n = space.dof();
  SystemSpec s{"canonical-noether", space, MultiVectorField(space, 2), ScalarExpr(), MultiVectorField(space, 1)};
  for (int i = 0; i < n; ++i) {
    s.W.set(n + i, i, ScalarExpr::constant(1.0));
    s.h += (pow(q(i), 2) + pow(q(n + i), 2)) / ScalarExpr::constant(2.0);
  }
  const ScalarExpr f = (pow(q(0), 2) + pow(q(n), 2)) / ScalarExpr::constant(2.0);
  s.E = hamiltonian_vf(s.W, f);
  return s;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"dissipative", "canonical-noether", "broken-generator"}; }

SystemSpec builtin(const std::string& name, int n) {
  if (n < 1 || n > kMaxDof)
    throw std::invalid_argument("built-in systems support 1 to " + std::to_string(kMaxDof) +
                                " degrees of freedom, got " + std::to_string(n));
  const PhaseSpace space(n);
  SystemSpec s = [&] {
    if (name == "dissipative") return dissipative(space, true);
    if (name == "broken-generator") return dissipative(space, false);
    if (name == "canonical-noether") return canonical_noether(space);
    throw std::invalid_argument("unknown built-in system '" + name +
                                "'; expected dissipative, canonical-noether or broken-generator");
  }();
  s.name += "-n" + std::to_string(n);
  return s;
}

}  // namespace binoether

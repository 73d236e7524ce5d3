#ifndef HOLOMOD_PRESETS_HPP
#define HOLOMOD_PRESETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "holomod/lie_poisson.hpp"

namespace holomod {

// Named Poisson structures used by manifests and the verification suites.
namespace presets {

// Constant symplectic structure on R^2.
inline BivectorField symplectic2() {
  return BivectorField::from_entries(2, {{0, 1, Polynomial::constant(2, 1.0)}});
}

// Regular rank-2 structure on R^3: Pi^{12} = 1 + x3^2, leaves x3 = const.
inline BivectorField regular3() {
  Polynomial p = Polynomial::constant(3, 1.0) +
                 Polynomial::variable(3, 2) * Polynomial::variable(3, 2);
  return BivectorField::from_entries(3, {{0, 1, p}});
}

inline std::vector<std::string> names() {
  return {"abelian2", "aff1", "so3", "sl2", "h3", "symplectic2", "regular3"};
}

inline bool is_lie_poisson(const std::string& name) {
  return name == "abelian2" || name == "aff1" || name == "so3" || name == "sl2" ||
         name == "h3";
}

inline LieAlgebraPresentation algebra(const std::string& name) {
  if (name == "abelian2") return lie::abelian2();
  if (name == "aff1") return lie::aff1();
  if (name == "so3") return lie::so3();
  if (name == "sl2") return lie::sl2();
  if (name == "h3") return lie::h3();
  throw Error("presets: '" + name + "' is not a Lie-Poisson preset");
}

inline BivectorField bivector(const std::string& name) {
  if (is_lie_poisson(name)) return lie_poisson_bivector(algebra(name));
  if (name == "symplectic2") return symplectic2();
  if (name == "regular3") return regular3();
  throw Error("presets: unknown preset '" + name + "'");
}

}  // namespace presets
}  // namespace holomod

#endif

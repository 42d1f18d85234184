#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "klab/arith.hpp"

namespace klab {

/// Decomposition of (Z/qZ)* into cyclic factors with discrete-log tables.
/// Odd prime powers contribute one cyclic factor (primitive root); 4 contributes
/// <-1>; 2^e with e >= 3 contributes <-1> x <5>.
class UnitGroup {
 public:
  struct Component {
    i64 modulus;    // prime power carrying this factor
    i64 generator;  // generator modulo `modulus`
    i64 order;
  };

  explicit UnitGroup(i64 modulus);

  i64 modulus() const { return modulus_; }
  i64 order() const { return order_; }
  /// Exponent of the group (lcm of component orders).
  i64 exponent() const { return exponent_; }
  const std::vector<Component>& components() const { return components_; }

  bool is_unit(i64 x) const { return unit_[index(x)]; }
  /// Discrete log of x in component j; -1 for non-units.
  i64 log(i64 x, std::size_t j) const { return logs_[index(x)][j]; }
  /// e(t / exponent()) from the cached table.
  std::complex<double> root(i64 t) const { return roots_[static_cast<std::size_t>(mod_floor(t, exponent_))]; }

 private:
  std::size_t index(i64 x) const { return static_cast<std::size_t>(mod_floor(x, modulus_)); }

  i64 modulus_;
  i64 order_ = 1;
  i64 exponent_ = 1;
  std::vector<Component> components_;
  std::vector<std::vector<i64>> logs_;
  std::vector<bool> unit_;
  std::vector<std::complex<double>> roots_;
};

/// χ(x) = Π_j e(k_j · log_j(x) / order_j), zero off the units.
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<i64> indices);

  /// The principal character modulo q.
  static DirichletCharacter principal(i64 modulus);

  i64 modulus() const { return group_->modulus(); }
  const std::vector<i64>& indices() const { return indices_; }
  bool is_principal() const;
  std::complex<double> operator()(i64 x) const;

  friend bool operator==(const DirichletCharacter& lhs, const DirichletCharacter& rhs) {
    return lhs.modulus() == rhs.modulus() && lhs.indices_ == rhs.indices_;
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<i64> indices_;
  std::vector<i64> weights_;  // exponent / order_j, for integer phase accumulation
};

inline constexpr i64 kCharacterModulusLimit = 10'000;

/// All φ(q) characters modulo q, sharing one UnitGroup.
std::vector<DirichletCharacter> characters_mod(i64 modulus);

}  // namespace klab

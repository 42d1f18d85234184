#include "klab/characters.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "klab/ksum.hpp"

namespace klab {

namespace {

i64 primitive_root_mod_prime(i64 p) {
  if (p == 2) return 1;
  const auto fac = factorize(static_cast<u64>(p - 1));
  for (i64 g = 2;; ++g) {
    bool ok = true;
    for (const auto& pp : fac.factors) {
      if (powmod(g, static_cast<u64>(p - 1) / pp.prime, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

// A primitive root mod p that stays primitive mod every p^e.
i64 primitive_root_mod_prime_power(i64 p, int e) {
  i64 g = primitive_root_mod_prime(p);
  if (e >= 2 && powmod(g, static_cast<u64>(p - 1), p * p) == 1) g += p;
  return g;
}

}  // namespace

UnitGroup::UnitGroup(i64 modulus) : modulus_(modulus) {
  if (modulus < 1) throw std::invalid_argument("UnitGroup: modulus must be positive");
  const auto fac = factorize(static_cast<u64>(modulus));
  for (const auto& pp : fac.factors) {
    const i64 q = static_cast<i64>(pp.value());
    const i64 p = static_cast<i64>(pp.prime);
    if (p == 2) {
      if (pp.exponent >= 2) components_.push_back({q, q - 1, 2});
      if (pp.exponent >= 3) components_.push_back({q, 5, q / 4});
    } else {
      components_.push_back({q, primitive_root_mod_prime_power(p, pp.exponent), q / p * (p - 1)});
    }
  }
  for (const auto& comp : components_) exponent_ = std::lcm(exponent_, comp.order);
  order_ = static_cast<i64>(fac.euler_phi());

  const auto n = static_cast<std::size_t>(modulus);
  unit_.assign(n, false);
  logs_.assign(n, std::vector<i64>(components_.size(), -1));
  for (std::size_t x = 0; x < n; ++x) unit_[x] = std::gcd(static_cast<i64>(x), modulus) == 1;

  // Per-component log tables over residues mod the component's prime power.
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto& comp = components_[j];
    std::vector<i64> table(static_cast<std::size_t>(comp.modulus), -1);
    const bool two_power_pair = comp.modulus % 2 == 0 && comp.modulus >= 8;
    if (two_power_pair && comp.generator == comp.modulus - 1) {
      // x ≡ ±5^t: the <-1> coordinate is 0 for x ≡ 1 mod 4, else 1.
      for (i64 x = 1; x < comp.modulus; x += 2) table[static_cast<std::size_t>(x)] = (x % 4 == 1) ? 0 : 1;
    } else if (two_power_pair) {
      i64 power = 1;
      for (i64 t = 0; t < comp.order; ++t) {
        table[static_cast<std::size_t>(power)] = t;
        table[static_cast<std::size_t>(comp.modulus - power)] = t;
        power = mulmod(power, 5, comp.modulus);
      }
    } else {
      i64 power = 1;
      for (i64 t = 0; t < comp.order; ++t) {
        table[static_cast<std::size_t>(power)] = t;
        power = mulmod(power, comp.generator, comp.modulus);
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (unit_[x]) logs_[x][j] = table[static_cast<std::size_t>(static_cast<i64>(x) % comp.modulus)];
    }
  }

  roots_.resize(static_cast<std::size_t>(exponent_));
  for (i64 t = 0; t < exponent_; ++t) roots_[static_cast<std::size_t>(t)] = unit_phase(t, exponent_);
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<i64> indices)
    : group_(std::move(group)), indices_(std::move(indices)) {
  const auto& comps = group_->components();
  if (indices_.size() != comps.size()) throw std::invalid_argument("DirichletCharacter: index count mismatch");
  weights_.reserve(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j) {
    indices_[j] = mod_floor(indices_[j], comps[j].order);
    weights_.push_back(group_->exponent() / comps[j].order);
  }
}

DirichletCharacter DirichletCharacter::principal(i64 modulus) {
  auto group = std::make_shared<const UnitGroup>(modulus);
  std::vector<i64> zeros(group->components().size(), 0);
  return DirichletCharacter(std::move(group), std::move(zeros));
}

bool DirichletCharacter::is_principal() const {
  return std::all_of(indices_.begin(), indices_.end(), [](i64 k) { return k == 0; });
}

std::complex<double> DirichletCharacter::operator()(i64 x) const {
  if (!group_->is_unit(x)) return {0.0, 0.0};
  i64 phase = 0;
  const i64 lambda = group_->exponent();
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    phase = (phase + mulmod(mulmod(indices_[j], group_->log(x, j), lambda), weights_[j], lambda)) % lambda;
  }
  return group_->root(phase);
}

std::vector<DirichletCharacter> characters_mod(i64 modulus) {
  if (modulus < 1) throw std::invalid_argument("characters_mod: modulus must be positive");
  if (modulus > kCharacterModulusLimit) throw std::length_error("characters_mod: modulus exceeds table limit");
  auto group = std::make_shared<const UnitGroup>(modulus);
  const auto& comps = group->components();
  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<std::size_t>(group->order()));
  std::vector<i64> idx(comps.size(), 0);
  while (true) {
    out.emplace_back(group, idx);
    std::size_t j = 0;
    for (; j < comps.size(); ++j) {
      if (++idx[j] < comps[j].order) break;
      idx[j] = 0;
    }
    if (j == comps.size()) break;
  }
  return out;
}

}  // namespace klab

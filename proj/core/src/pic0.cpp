#include "cllab/pic0.hpp"

#include <numeric>

#include "cllab/error.hpp"
#include "cllab/smith.hpp"

namespace cllab {

std::int64_t DivisorClassGroup::cl_order() const {
  std::int64_t h = 1;
  for (auto d : cl_invariants) h *= d;
  return h;
}

std::int64_t DivisorClassGroup::element_order(const std::vector<std::int64_t>& coords) const {
  std::int64_t ord = 1;
  for (std::size_t i = 0; i < invariants.size(); ++i) {
    const std::int64_t d = invariants[i];
    const std::int64_t x = ((coords.at(i) % d) + d) % d;
    ord = std::lcm(ord, d / std::gcd(d, x));
  }
  return ord;
}

Pic0::Pic0(const Curve& c, Options opts) : curve_(c), ff_(c) { build(opts); }

std::string Pic0::key(const Divisor& e) const {
  std::string out;
  for (const auto& [p, n] : e.terms()) {
    out += std::to_string(static_cast<int>(p.kind));
    out += ':';
    out += std::to_string(poly_index(p.u, curve_.q));
    out += ':';
    out += std::to_string(poly_index(p.v, curve_.q));
    out += ':';
    out += std::to_string(p.branch);
    out += '*';
    out += std::to_string(n);
    out += ';';
  }
  return out;
}

int Pic0::rep_multiple(const Divisor& e) const { return e.degree() / base_degree_; }

Divisor Pic0::reduce(const Divisor& d0) const {
  if (d0.degree() != 0) throw Error("Pic0: divisor class must have degree 0");
  const Divisor b = Divisor::of(base_, 1);
  const int g = curve_.genus;
  if (base_degree_ == 1) {
    // Generic class: L(D + gB) is one-dimensional and its divisor is canonical.
    const Divisor top = d0 + b * g;
    auto basis = ff_.riemann_roch_space(top);
    if (basis.size() == 1) return ff_.divisor_of(basis[0]) + top;
    if (basis.empty()) throw InvariantViolation("Pic0: L(D + gB) is empty");
    for (int m = 0; m < g; ++m) {
      const Divisor dm = d0 + b * m;
      auto bm = ff_.riemann_roch_space(dm);
      if (bm.empty()) continue;
      if (bm.size() != 1) throw InvariantViolation("Pic0: dimension jumped by more than one at " + dm.to_string() + " dim " + std::to_string(bm.size()));
      return ff_.divisor_of(bm[0]) + dm;
    }
    throw InvariantViolation("Pic0: no effective representative found");
  }
  // Base of higher degree: least m with L(D + mB) != 0, then the least
  // effective divisor (in key order) of the linear system.
  for (int m = 0; m <= 2 * g + 2; ++m) {
    const Divisor dm = d0 + b * m;
    auto basis = ff_.riemann_roch_space(dm);
    if (basis.empty()) continue;
    const std::size_t dim = basis.size();
    const std::uint32_t q = curve_.q;
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < dim; ++i) combos *= q;
    Divisor best;
    std::string best_key;
    bool have = false;
    for (std::uint64_t idx = 1; idx < combos; ++idx) {
      std::vector<std::uint32_t> c(dim);
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < dim; ++i) c[i] = static_cast<std::uint32_t>(t % q), t /= q;
      std::size_t lead = 0;
      while (c[lead] == 0) ++lead;
      if (c[lead] != 1) continue;  // one representative per projective point
      Function h;
      h.w = basis[0].w;
      for (std::size_t i = 0; i < dim; ++i) {
        h.a = add(ff_.field(), h.a, scale(ff_.field(), basis[i].a, c[i]));
        h.b = add(ff_.field(), h.b, scale(ff_.field(), basis[i].b, c[i]));
      }
      Divisor e = ff_.divisor_of(h) + dm;
      std::string k = key(e);
      if (!have || k < best_key) best = std::move(e), best_key = std::move(k), have = true;
    }
    return best;
  }
  throw InvariantViolation("Pic0: no effective representative found");
}

Divisor Pic0::sum(const Divisor& e1, const Divisor& e2) const {
  const Divisor b = Divisor::of(base_, 1);
  return reduce(e1 + e2 - b * (rep_multiple(e1) + rep_multiple(e2)));
}

Divisor Pic0::canonical_representative(const Divisor& d) const { return reduce(d); }

std::vector<std::int64_t> Pic0::to_invariant(const std::vector<std::int64_t>& poly_coords) const {
  std::vector<std::int64_t> out;
  for (std::size_t col : invariant_columns_) {
    __int128 x = 0;
    for (std::size_t k = 0; k < poly_coords.size(); ++k) x += __int128(poly_coords[k]) * transform_[k][col];
    const std::int64_t d = group_.invariants[out.size()];
    std::int64_t r = static_cast<std::int64_t>(x % d);
    if (r < 0) r += d;
    out.push_back(r);
  }
  return out;
}

std::vector<std::int64_t> Pic0::coordinates(const Divisor& d) const {
  auto it = index_.find(key(reduce(d)));
  if (it == index_.end()) throw InvariantViolation("Pic0: class not in the element table");
  return to_invariant(elements_[it->second].poly_coords);
}

void Pic0::build(const Options& opts) {
  l1_ = l_polynomial(curve_).at_one();
  if (l1_ > opts.max_order) {
    throw CapExceeded("Pic0: L(1) = " + std::to_string(l1_) + " exceeds the budget " + std::to_string(opts.max_order));
  }
  const int g = curve_.genus;
  const auto places = places_up_to_degree(curve_, std::max(g + 1, 1));
  const auto inf = infinite_places(curve_);

  std::vector<Divisor> candidates;
  auto diff = [](const Place& p, const Place& b) {
    const int gg = std::gcd(p.degree, b.degree);
    return Divisor::of(p, b.degree / gg) - Divisor::of(b, p.degree / gg);
  };
  switch (curve_.model) {
    case Model::Split:
      base_ = inf[0];
      candidates.push_back(Divisor::of(inf[0]) - Divisor::of(inf[1]));
      for (const auto& p : places) {
        if (p.is_affine()) candidates.push_back(diff(p, base_));
      }
      break;
    case Model::Ramified:
      base_ = inf[0];
      for (const auto& p : places) {
        if (p.is_affine()) candidates.push_back(diff(p, base_));
      }
      break;
    case Model::Inert: {
      const Place* rational = nullptr;
      for (const auto& p : places) {
        if (p.is_affine() && p.degree == 1) {
          rational = &p;
          break;
        }
      }
      if (rational) {
        base_ = *rational;
        for (const auto& p : places) {
          if (p != base_) candidates.push_back(diff(p, base_));
        }
        if (inf[0].degree > std::max(g + 1, 1)) candidates.push_back(diff(inf[0], base_));
      } else {
        group_.fallback_base = true;
        base_ = inf[0];
        for (const auto& p : places) {
          if (p.degree < base_.degree) base_ = p;
        }
        for (const auto& p : places) {
          if (p != base_) candidates.push_back(diff(p, base_));
        }
        for (std::size_t i = 0; i < places.size(); ++i) {
          for (std::size_t j = i + 1; j < places.size(); ++j) {
            if (places[i] != base_ && places[j] != base_) candidates.push_back(diff(places[i], places[j]));
          }
        }
      }
      break;
    }
  }
  base_degree_ = base_.degree;
  group_.base = Divisor::of(base_);

  {
    Divisor zero = reduce(Divisor());
    index_.emplace(key(zero), 0);
    elements_.push_back(Element{std::move(zero), {}});
  }
  std::vector<std::vector<std::int64_t>> relations;
  std::vector<Divisor> tried;

  for (const auto& gen : candidates) {
    if (static_cast<std::int64_t>(elements_.size()) == l1_) break;
    tried.push_back(gen);
    const Divisor eg = reduce(gen);
    if (index_.count(key(eg))) continue;
    const std::size_t k = relative_orders_.size();
    const std::size_t old = elements_.size();
    Divisor cur = eg;
    std::int64_t j = 1;
    while (!index_.count(key(cur))) {
      for (std::size_t i = 0; i < old; ++i) {
        Divisor y = i == 0 ? cur : sum(elements_[i].rep, cur);
        std::vector<std::int64_t> coords = elements_[i].poly_coords;
        coords.resize(k, 0);
        coords.push_back(j);
        const std::string ky = key(y);
        if (!index_.emplace(ky, elements_.size()).second) {
          throw InvariantViolation("Pic0: coset element already present");
        }
        elements_.push_back(Element{std::move(y), std::move(coords)});
      }
      if (static_cast<std::int64_t>(elements_.size()) > l1_) {
        throw InvariantViolation("Pic0: more classes than L(1) = " + std::to_string(l1_));
      }
      cur = sum(cur, eg);
      ++j;
    }
    std::vector<std::int64_t> row = elements_[index_.at(key(cur))].poly_coords;
    row.resize(k, 0);
    for (auto& x : row) x = -x;
    row.push_back(j);
    relations.push_back(std::move(row));
    relative_orders_.push_back(j);
  }
  if (static_cast<std::int64_t>(elements_.size()) != l1_) {
    throw InvariantViolation("Pic0: generated subgroup has order " + std::to_string(elements_.size()) +
                             " but L(1) = " + std::to_string(l1_) + " for " + curve_.to_string());
  }

  const std::size_t kk = relative_orders_.size();
  group_.order = l1_;
  if (kk > 0) {
    IntMatrix rel(kk, kk);
    for (std::size_t r = 0; r < kk; ++r) {
      for (std::size_t c = 0; c < relations[r].size(); ++c) rel(r, c) = relations[r][c];
    }
    const SmithResult snf = smith_normal_form(rel);
    transform_.assign(kk, std::vector<std::int64_t>(kk, 0));
    for (std::size_t r = 0; r < kk; ++r) {
      for (std::size_t c = 0; c < kk; ++c) transform_[r][c] = snf.column_transform(r, c);
    }
    std::int64_t prod = 1;
    for (std::size_t c = 0; c < kk; ++c) {
      const std::int64_t d = snf.diagonal[c];
      if (d == 0) throw InvariantViolation("Pic0: infinite relation module");
      prod *= d;
      if (d > 1) {
        invariant_columns_.push_back(c);
        group_.invariants.push_back(d);
      }
    }
    if (prod != l1_) throw InvariantViolation("Pic0: Smith form order differs from L(1)");
  }

  group_.generators = tried;
  for (const auto& gen : tried) group_.generator_coords.push_back(coordinates(gen));

  if (curve_.model == Model::Split) {
    auto dc = coordinates(Divisor::of(inf[0]) - Divisor::of(inf[1]));
    group_.regulator = group_.element_order(dc);
    const std::size_t r = group_.invariants.size();
    if (r == 0) {
      group_.cl_invariants = {};
    } else {
      IntMatrix rel(r + 1, r);
      for (std::size_t i = 0; i < r; ++i) {
        rel(i, i) = group_.invariants[i];
        rel(r, i) = dc[i];
      }
      group_.cl_invariants = invariant_factors(rel);
    }
    group_.delta_coords = std::move(dc);
  }
}

std::vector<std::int64_t> delta_class(const Curve& c) {
  if (c.model != Model::Split) throw Error("delta_class: curve is not split at infinity");
  return *Pic0(c).group().delta_coords;
}

}  // namespace cllab

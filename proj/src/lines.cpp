#include "orbitlab/lines.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

bool is_identity(const LineSpec::Coordinate& c) {
  const auto* l = std::get_if<LineSpec::Linked>(&c);
  return l && l->sigma == LinearMap::identity();
}

std::size_t bit_size(const Rational& x) {
  return std::max(mpz_sizeinbase(x.get_num_mpz_t(), 2), mpz_sizeinbase(x.get_den_mpz_t(), 2));
}

RatPoly checked_iterate(const RatPoly& f, unsigned long m) {
  Integer deg;
  mpz_ui_pow_ui(deg.get_mpz_t(), static_cast<unsigned long>(std::max(f.degree(), 1)), m);
  if (deg > kMaxExpandedDegree) throw BudgetExceeded("iterate degree exceeds the expansion cap", 0);
  return iterate(f, m);
}

}  // namespace

LineSpec::LineSpec(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("a line needs at least one coordinate");
  if (!is_identity(coords_[0])) {
    throw DomainError("coordinate 1 of a line must be Linked(identity); constant lines are single points");
  }
}

LineSpec LineSpec::diagonal(std::size_t d) {
  return LineSpec(std::vector<Coordinate>(d, Linked{LinearMap::identity()}));
}

LineSpec LineSpec::through(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  if (p.size() != q.size() || p.empty()) throw DomainError("points of different dimensions");
  if (p == q) throw DomainError("a line needs two distinct points");
  const Rational d1 = q[0] - p[0];
  if (sgn(d1) == 0) throw DomainError("first coordinate is constant along the line; reorder coordinates");
  std::vector<Coordinate> coords;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Rational di = q[i] - p[i];
    if (sgn(di) == 0) {
      coords.push_back(Constant{p[i]});
    } else {
      Rational slope = di / d1;
      coords.push_back(Linked{LinearMap(slope, p[i] - slope * p[0])});
    }
  }
  return LineSpec(std::move(coords));
}

bool LineSpec::contains(const std::vector<Rational>& point) const {
  if (point.size() != coords_.size()) throw DomainError("dimension mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (const auto* c = std::get_if<Constant>(&coords_[i])) {
      if (point[i] != c->z) return false;
    } else if (point[i] != std::get<Linked>(coords_[i]).sigma(point[0])) {
      return false;
    }
  }
  return true;
}

std::string LineSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += "; ";
    if (const auto* c = std::get_if<Constant>(&coords_[i])) {
      out += "=" + orbitlab::to_string(c->z);
    } else {
      out += std::get<Linked>(coords_[i]).sigma.to_string();
    }
  }
  return out;
}

bool line_invariant_check(const std::vector<RatPoly>& fs, const std::vector<unsigned long>& ms,
                          const LineSpec& line) {
  if (fs.size() != line.dimension() || ms.size() != line.dimension()) {
    throw DomainError("dimension mismatch between maps, exponents and line");
  }
  if (std::all_of(ms.begin(), ms.end(), [](unsigned long m) { return m == 0; })) {
    throw DomainError("at least one exponent must be positive");
  }
  std::optional<RatPoly> f1m;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (const auto* c = std::get_if<LineSpec::Constant>(&line[i])) {
      if (ms[i] != 0 && checked_iterate(fs[i], ms[i])(c->z) != c->z) return false;
      continue;
    }
    if (i == 0) continue;  // identity link
    if (!f1m) f1m = checked_iterate(fs[0], ms[0]);
    const RatPoly sigma = std::get<LineSpec::Linked>(line[i]).sigma.as_poly();
    if (compose(sigma, *f1m) != compose(checked_iterate(fs[i], ms[i]), sigma)) return false;
  }
  return true;
}

std::optional<std::vector<unsigned long>> find_invariant_exponents(const std::vector<RatPoly>& fs,
                                                                   const LineSpec& line,
                                                                   unsigned long bound) {
  if (fs.size() != line.dimension()) throw DomainError("dimension mismatch between maps and line");
  for (const auto& f : fs) {
    if (f.degree() < 2) throw DomainError("invariant exponents need degrees >= 2");
  }
  const std::size_t d = fs.size();
  // Per linked coordinate: (sigma f_1 sigma^-1)^(a_i) = f_i^(b_i).
  std::vector<std::pair<unsigned long, unsigned long>> found(d, {0, 0});
  unsigned long M1 = 1;
  for (std::size_t i = 1; i < d; ++i) {
    const auto* link = std::get_if<LineSpec::Linked>(&line[i]);
    if (!link) continue;
    auto ci = common_iterate(conjugate(fs[0], link->sigma), fs[i], bound);
    if (ci.verdict != CommonIterateResult::Verdict::Found) return std::nullopt;
    found[i] = {ci.m1, ci.m2};
    M1 = std::lcm(M1, ci.m1);
  }
  std::vector<unsigned long> ms(d, 0);
  ms[0] = M1;
  for (std::size_t i = 1; i < d; ++i) {
    if (found[i].first != 0) ms[i] = found[i].second * (M1 / found[i].first);
  }
  try {
    if (!line_invariant_check(fs, ms, line)) return std::nullopt;
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
  return ms;
}

LineIntersection intersection_cosets(const std::vector<RatPoly>& fs, const std::vector<Rational>& alpha,
                                     const LineSpec& line, const LineBudget& budget) {
  const std::size_t d = line.dimension();
  if (fs.size() != d || alpha.size() != d) throw DomainError("dimension mismatch between maps, point and line");
  if (budget.max_exponent == 0 || budget.max_bits == 0) throw DomainError("line budget must be positive");
  LineIntersection out;
  out.invariant_exponents = find_invariant_exponents(fs, line);

  if (d == 2 && std::holds_alternative<LineSpec::Linked>(line[1])) {
    // X_2 = sigma(X_1) reduces to the orbits of sigma f_1 sigma^-1 and f_2.
    const LinearMap& sigma = std::get<LineSpec::Linked>(line[1]).sigma;
    IntersectionReport rep = orbit_intersection(conjugate(fs[0], sigma), fs[1], sigma(alpha[0]), alpha[1],
                                                {budget.max_exponent, budget.max_bits});
    if (rep.completeness == Completeness::Proven && !rep.degenerate) {
      out.completeness = Completeness::Proven;
      if (const auto& fam = rep.infinite_family) {
        out.cosets.entries.push_back({{fam->m0, fam->n0}, {fam->dm, fam->dn}});
      }
      for (const auto& h : rep.finite_points) out.extras.push_back({h.m, h.n});
      std::sort(out.extras.begin(), out.extras.end());
      return out;
    }
  }

  // Per-coordinate orbits, then exact membership along the line.
  std::vector<std::vector<Rational>> orbits(d);
  std::vector<std::map<Rational, std::vector<unsigned long>>> index(d);
  for (std::size_t i = 0; i < d; ++i) {
    Rational z = alpha[i];
    for (unsigned long u = 0; u <= budget.max_exponent; ++u) {
      if (bit_size(z) > budget.max_bits) {
        out.truncated = true;
        break;
      }
      index[i][z].push_back(u);
      orbits[i].push_back(z);
      if (u < budget.max_exponent) z = fs[i](z);
    }
  }
  std::vector<std::vector<unsigned long>> hits;
  for (unsigned long u1 = 0; u1 < orbits[0].size(); ++u1) {
    std::vector<std::vector<unsigned long>> partial{{u1}};
    for (std::size_t i = 1; i < d && !partial.empty(); ++i) {
      Rational target = std::holds_alternative<LineSpec::Constant>(line[i])
                            ? std::get<LineSpec::Constant>(line[i]).z
                            : std::get<LineSpec::Linked>(line[i]).sigma(orbits[0][u1]);
      auto it = index[i].find(target);
      std::vector<std::vector<unsigned long>> next;
      if (it != index[i].end()) {
        for (const auto& p : partial) {
          for (unsigned long u : it->second) {
            next.push_back(p);
            next.back().push_back(u);
          }
        }
      }
      partial = std::move(next);
    }
    hits.insert(hits.end(), partial.begin(), partial.end());
  }
  std::sort(hits.begin(), hits.end());

  if (!out.invariant_exponents) {
    out.extras = std::move(hits);
    return out;
  }
  // A hit starts a coset unless stepping back by the period lands on another hit.
  const auto& m = *out.invariant_exponents;
  for (const auto& h : hits) {
    bool minimal = false;
    std::vector<unsigned long> prev(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (h[i] < m[i]) minimal = true;
      else prev[i] = h[i] - m[i];
    }
    if (!minimal && !std::binary_search(hits.begin(), hits.end(), prev)) minimal = true;
    if (minimal) out.cosets.entries.push_back({h, m});
  }
  return out;
}

}  // namespace orbitlab

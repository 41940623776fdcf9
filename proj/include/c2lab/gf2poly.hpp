#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace c2lab {

// Multilinear polynomial over GF(2); each monomial is a 64-bit variable mask.
class Gf2Poly {
public:
  Gf2Poly() = default;
  explicit Gf2Poly(std::vector<uint64_t> terms) : t_(std::move(terms)) { normalize(); }

  static Gf2Poly zero() { return Gf2Poly(); }
  static Gf2Poly one() { return Gf2Poly({0}); }

  const std::vector<uint64_t>& terms() const { return t_; }
  size_t term_count() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }

  void toggle(uint64_t m) { pending_.push_back(m); }
  void flush() {
    if (pending_.empty()) return;
    t_.insert(t_.end(), pending_.begin(), pending_.end());
    pending_.clear();
    normalize();
  }

  bool has_term(uint64_t m) const { return std::binary_search(t_.begin(), t_.end(), m); }

  uint64_t support() const {
    uint64_t s = 0;
    for (uint64_t m : t_) s |= m;
    return s;
  }

  int degree() const {
    int d = t_.empty() ? -1 : 0;
    for (uint64_t m : t_) d = std::max(d, std::popcount(m));
    return d;
  }

  // Value at a 0/1 point given as the mask of variables set to 1.
  int eval_at(uint64_t ones) const {
    int acc = 0;
    for (uint64_t m : t_) acc ^= ((m & ~ones) == 0);
    return acc;
  }

  int full_monomial_coefficient(int nvars) const {
    uint64_t full = nvars >= 64 ? ~uint64_t{0} : (uint64_t{1} << nvars) - 1;
    return has_term(full) ? 1 : 0;
  }

  friend Gf2Poly operator+(const Gf2Poly& a, const Gf2Poly& b) {
    std::vector<uint64_t> out;
    std::set_symmetric_difference(a.t_.begin(), a.t_.end(), b.t_.begin(), b.t_.end(),
                                  std::back_inserter(out));
    Gf2Poly r;
    r.t_ = std::move(out);
    return r;
  }

  // Product of polynomials on disjoint variable sets (tree/forest factors are
  // always variable-disjoint; anything else would square a variable).
  friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
    if (a.support() & b.support())
      throw std::invalid_argument("gf2 product would not be squarefree: operands share variables");
    std::vector<uint64_t> out;
    out.reserve(a.t_.size() * b.t_.size());
    for (uint64_t x : a.t_)
      for (uint64_t y : b.t_) out.push_back(x | y);
    return Gf2Poly(std::move(out));
  }

  bool operator==(const Gf2Poly& o) const { return t_ == o.t_; }

  // One monomial per line as sorted variable indices ("1" for the empty monomial).
  void dump(std::ostream& os) const {
    for (uint64_t m : t_) {
      if (!m) {
        os << "1\n";
        continue;
      }
      bool first = true;
      for (int i = 0; i < 64; ++i)
        if (m >> i & 1) {
          if (!first) os << ' ';
          os << i;
          first = false;
        }
      os << '\n';
    }
  }

private:
  void normalize() {
    std::sort(t_.begin(), t_.end());
    // mod-2 cancellation: drop pairs
    std::vector<uint64_t> out;
    for (size_t i = 0; i < t_.size();) {
      size_t j = i;
      while (j < t_.size() && t_[j] == t_[i]) ++j;
      if ((j - i) % 2) out.push_back(t_[i]);
      i = j;
    }
    t_ = std::move(out);
  }

  std::vector<uint64_t> t_;
  std::vector<uint64_t> pending_;
};

// Coefficient of the all-variables monomial in f*g without forming the product:
// pairs of terms with disjoint union equal to the full mask, counted mod 2.
inline int full_coeff_of_product(const Gf2Poly& f, const Gf2Poly& g, int nvars) {
  uint64_t full = nvars >= 64 ? ~uint64_t{0} : (uint64_t{1} << nvars) - 1;
  int acc = 0;
  for (uint64_t m : f.terms()) acc ^= g.has_term(full & ~m);
  return acc;
}

// Values of f on all of {0,1}^nvars, bit-packed, index = point mask.
inline std::vector<uint64_t> eval_table_gf2(const Gf2Poly& f, int nvars) {
  if (nvars < 0 || nvars > 32) throw std::invalid_argument("eval_table_gf2: bad variable count");
  size_t bits = size_t{1} << nvars;
  std::vector<uint64_t> w((bits + 63) / 64, 0);
  for (uint64_t m : f.terms()) w[m / 64] ^= uint64_t{1} << (m % 64);
  for (int i = 0; i < nvars; ++i) {
    uint64_t s = uint64_t{1} << i;
    if (s >= 64) {
      size_t ws = s / 64;
      for (size_t base = 0; base < w.size(); base += 2 * ws)
        for (size_t k = 0; k < ws; ++k) w[base + ws + k] ^= w[base + k];
    } else {
      uint64_t low = 0;
      for (int pos = 0; pos < 64; ++pos)
        if (!(pos & s)) low |= uint64_t{1} << pos;
      for (auto& word : w) word ^= (word & low) << s;
    }
  }
  return w;
}

inline int table_bit(const std::vector<uint64_t>& t, uint64_t idx) {
  return t[idx / 64] >> (idx % 64) & 1;
}

}  // namespace c2lab

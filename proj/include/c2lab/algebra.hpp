#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace c2lab {

// Dense square matrix over F_p, p a small prime. Entries live in [0, p).
struct FpMatrix {
  int p = 2;
  int n = 0;
  std::vector<uint8_t> a;

  FpMatrix() = default;
  FpMatrix(int prime, int size) : p(prime), n(size), a(static_cast<size_t>(size) * size, 0) {
    if (prime < 2 || prime > 251) throw std::invalid_argument("FpMatrix: prime out of range");
  }
  uint8_t& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
  uint8_t at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
  void set(int r, int c, int64_t value) {
    int64_t v = value % p;
    if (v < 0) v += p;
    at(r, c) = static_cast<uint8_t>(v);
  }
};

namespace detail {

inline uint32_t pow_mod(uint32_t base, uint32_t exp, uint32_t mod) {
  uint64_t acc = 1, b = base % mod;
  while (exp) {
    if (exp & 1) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<uint32_t>(acc);
}

inline uint32_t inv_mod(uint32_t x, uint32_t p) { return pow_mod(x, p - 2, p); }

// Determinant over F_2 with rows packed into single 64-bit words.
inline int det_gf2(std::vector<uint64_t> rows) {
  size_t n = rows.size();
  for (size_t c = 0; c < n; ++c) {
    uint64_t bit = uint64_t{1} << c;
    size_t pivot = c;
    while (pivot < n && !(rows[pivot] & bit)) ++pivot;
    if (pivot == n) return 0;
    std::swap(rows[c], rows[pivot]);
    for (size_t r = c + 1; r < n; ++r)
      if (rows[r] & bit) rows[r] ^= rows[c];
  }
  return 1;
}

}  // namespace detail

inline int det_fp(FpMatrix m) {
  int n = m.n, p = m.p;
  if (p == 2) {
    if (n > 64) throw std::invalid_argument("det_fp: F_2 path limited to 64 columns");
    std::vector<uint64_t> rows(n, 0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (m.at(r, c)) rows[r] |= uint64_t{1} << c;
    return detail::det_gf2(std::move(rows));
  }
  int64_t det = 1;
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (m.at(r, c)) { pivot = r; break; }
    if (pivot < 0) return 0;
    if (pivot != c) {
      for (int k = 0; k < n; ++k) std::swap(m.at(c, k), m.at(pivot, k));
      det = -det;
    }
    uint32_t inv = detail::inv_mod(m.at(c, c), p);
    det = det * m.at(c, c) % p;
    for (int r = c + 1; r < n; ++r) {
      if (!m.at(r, c)) continue;
      uint32_t f = static_cast<uint32_t>(m.at(r, c)) * inv % p;
      for (int k = c; k < n; ++k)
        m.at(r, k) = static_cast<uint8_t>((m.at(r, k) + static_cast<uint32_t>(p - f) * m.at(c, k)) % p);
    }
  }
  det %= p;
  if (det < 0) det += p;
  return static_cast<int>(det);
}

// Row rank of an arbitrary (not necessarily square) matrix mod p.
inline int rank_fp(int p, int rows, int cols, const std::vector<int>& entries) {
  std::vector<std::vector<uint32_t>> m(rows, std::vector<uint32_t>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int64_t v = entries[static_cast<size_t>(r) * cols + c] % p;
      if (v < 0) v += p;
      m[r][c] = static_cast<uint32_t>(v);
    }
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][c]) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    uint32_t inv = detail::inv_mod(m[rank][c], p);
    for (int r = rank + 1; r < rows; ++r) {
      if (!m[r][c]) continue;
      uint32_t f = m[r][c] * inv % p;
      for (int k = c; k < cols; ++k) m[r][k] = (m[r][k] + (p - f) * m[rank][k]) % p;
    }
    ++rank;
  }
  return rank;
}

// Fraction-free integer determinant (Bareiss); fine for the small matrices used here.
inline int64_t det_int64(std::vector<std::vector<int64_t>> m) {
  int n = static_cast<int>(m.size());
  int64_t sign = 1, prev = 1;
  for (int c = 0; c < n - 1; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (m[r][c] != 0) { pivot = r; break; }
    if (pivot < 0) return 0;
    if (pivot != c) {
      std::swap(m[c], m[pivot]);
      sign = -sign;
    }
    for (int r = c + 1; r < n; ++r) {
      for (int k = c + 1; k < n; ++k)
        m[r][k] = (m[r][k] * m[c][c] - m[r][c] * m[c][k]) / prev;
      m[r][c] = 0;
    }
    prev = m[c][c];
  }
  return n == 0 ? 1 : sign * m[n - 1][n - 1];
}

}  // namespace c2lab

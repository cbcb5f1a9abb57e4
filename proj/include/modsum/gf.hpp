#pragma once

// Exact arithmetic and dense linear algebra over prime fields F_q, plus the
// random code-pair construction used by the transmission protocol.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace modsum::gf {

bool is_prime(std::uint32_t n) noexcept;

std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) noexcept;
std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) noexcept;
std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) noexcept;
std::uint32_t mod_neg(std::uint32_t a, std::uint32_t q) noexcept;
// Throws std::domain_error for a == 0.
std::uint32_t mod_inv(std::uint32_t a, std::uint32_t q);

// A single element of F_q. The modulus is checked prime at construction and
// every binary operation verifies that both operands live in the same field.
class FieldElement {
 public:
  FieldElement(std::uint64_t value, std::uint32_t modulus);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return modulus_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inverse() const;

  bool operator==(const FieldElement& o) const = default;

 private:
  std::uint32_t value_;
  std::uint32_t modulus_;
};

// Fixed-dimension vector over F_q. Dimension zero is legal (used for empty
// coset components at boundary code dimensions).
class FieldVector {
 public:
  FieldVector() = default;
  FieldVector(std::size_t dim, std::uint32_t modulus);
  FieldVector(std::vector<std::uint32_t> entries, std::uint32_t modulus);

  std::size_t size() const noexcept { return entries_.size(); }
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, std::uint32_t v);
  std::span<const std::uint32_t> entries() const noexcept { return entries_; }

  FieldVector operator+(const FieldVector& o) const;
  FieldVector operator-(const FieldVector& o) const;
  bool operator==(const FieldVector& o) const = default;

  FieldVector slice(std::size_t from, std::size_t to) const;
  static FieldVector concat(const FieldVector& a, const FieldVector& b);

 private:
  std::vector<std::uint32_t> entries_;
  std::uint32_t modulus_ = 2;
};

class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus);
  static FieldMatrix identity(std::size_t dim, std::uint32_t modulus);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint32_t v);

  FieldMatrix operator*(const FieldMatrix& o) const;
  FieldVector operator*(const FieldVector& v) const;
  bool operator==(const FieldMatrix& o) const = default;

  // Row range [from, to) as a new matrix.
  FieldMatrix row_block(std::size_t from, std::size_t to) const;

  std::uint32_t determinant() const;
  std::size_t rank() const;
  bool invertible() const { return rows_ == cols_ && determinant() != 0; }
  FieldMatrix inverse() const;  // throws std::domain_error when singular

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> data_;
  std::uint32_t modulus_ = 2;
};

std::uint32_t sample_element(std::uint32_t q, std::mt19937_64& rng);
FieldVector sample_vector(std::size_t dim, std::uint32_t q, std::mt19937_64& rng);
FieldMatrix sample_matrix(std::size_t rows, std::size_t cols, std::uint32_t q,
                          std::mt19937_64& rng);

// Uniform draw from the invertible group GL(dim, F_q), by rejection from
// uniform matrices. Acceptance probability is Prod_i (1 - q^{-i}) > 0.288,
// so the loop terminates quickly at desk dimensions.
FieldMatrix sample_invertible(std::size_t dim, std::uint32_t q, std::mt19937_64& rng);

struct CodeDims {
  int n = 1;        // channel uses
  int l = 1;        // field dimension per use
  int k = 1;        // message symbols
  int kprime = 1;   // scramble symbols
  std::uint32_t q = 2;

  int block_len() const noexcept { return n * l; }
  int payload_len() const noexcept { return k + kprime; }
  int coset_len() const noexcept { return block_len() - payload_len(); }
};

// The two invertible maps of the code and their paired projections:
//   g1 : F_q^{nl} -> F_q^{nl}, acting on (f || e)
//   g2 : F_q^{nl} -> F_q^{nl-k-k'}, g2(g1(f || e)) = e
//   g3 : F_q^{k+k'} -> F_q^{k+k'}, acting on (m || l)
//   g4 : F_q^{k+k'} -> F_q^k,      g4(g3(m || l)) = m
// With g1 and g3 uniform over the invertible group, the induced families
// {g2} and {g4} are universal2: for fixed d != 0, g1^{-1}(d) is uniform on
// nonzero vectors, so a g2-collision has probability
// (q^{k+k'} - 1) / (q^{nl} - 1) <= q^{-(nl-k-k')}, and likewise for g4.
struct CodePair {
  FieldMatrix g1, g2, g3, g4;
  CodeDims dims;
};

CodePair make_code_pair(int n, int l, int k, int kprime, std::uint32_t q,
                        std::mt19937_64& rng);

// Index arithmetic for elements of F_q^l encoded as integers in [0, q^l)
// with little-endian base-q digits.
std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp) noexcept;
int index_add(int a, int b, std::uint32_t q, int l);
int index_sub(int a, int b, std::uint32_t q, int l);
int index_scale(std::uint32_t coeff, int a, std::uint32_t q, int l);

}  // namespace modsum::gf

#include "modsum/gf.hpp"

#include <stdexcept>
#include <string>

namespace modsum::gf {

bool is_prime(std::uint32_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint32_t d = 3; d * static_cast<std::uint64_t>(d) <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) noexcept {
  std::uint32_t s = a + b;
  return s >= q ? s - q : s;
}

std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) noexcept {
  return a >= b ? a - b : a + q - b;
}

std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) noexcept {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % q);
}

std::uint32_t mod_neg(std::uint32_t a, std::uint32_t q) noexcept {
  return a == 0 ? 0 : q - a;
}

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t q) {
  if (a == 0) throw std::domain_error("mod_inv: zero has no inverse");
  // extended Euclid on (a, q)
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q, new_r = a % q;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += q;
  return static_cast<std::uint32_t>(t);
}

namespace {

void require_prime(std::uint32_t q) {
  if (!is_prime(q)) {
    throw std::invalid_argument("field modulus " + std::to_string(q) + " is not prime");
  }
}

void require_same_modulus(std::uint32_t a, std::uint32_t b) {
  if (a != b) {
    throw std::invalid_argument("field modulus mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

}  // namespace

FieldElement::FieldElement(std::uint64_t value, std::uint32_t modulus) : modulus_(modulus) {
  require_prime(modulus);
  value_ = static_cast<std::uint32_t>(value % modulus);
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_modulus(modulus_, o.modulus_);
  return {mod_add(value_, o.value_, modulus_), modulus_};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same_modulus(modulus_, o.modulus_);
  return {mod_sub(value_, o.value_, modulus_), modulus_};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_modulus(modulus_, o.modulus_);
  return {mod_mul(value_, o.value_, modulus_), modulus_};
}

FieldElement FieldElement::operator-() const { return {mod_neg(value_, modulus_), modulus_}; }

FieldElement FieldElement::inverse() const { return {mod_inv(value_, modulus_), modulus_}; }

FieldVector::FieldVector(std::size_t dim, std::uint32_t modulus)
    : entries_(dim, 0u), modulus_(modulus) {
  require_prime(modulus);
}

FieldVector::FieldVector(std::vector<std::uint32_t> entries, std::uint32_t modulus)
    : entries_(std::move(entries)), modulus_(modulus) {
  require_prime(modulus);
  for (auto& e : entries_) e %= modulus_;
}

void FieldVector::set(std::size_t i, std::uint32_t v) {
  if (i >= entries_.size()) throw std::out_of_range("FieldVector::set");
  entries_[i] = v % modulus_;
}

FieldVector FieldVector::operator+(const FieldVector& o) const {
  require_same_modulus(modulus_, o.modulus_);
  if (size() != o.size()) throw std::invalid_argument("FieldVector: dimension mismatch");
  FieldVector r(size(), modulus_);
  for (std::size_t i = 0; i < size(); ++i) r.entries_[i] = mod_add(entries_[i], o.entries_[i], modulus_);
  return r;
}

FieldVector FieldVector::operator-(const FieldVector& o) const {
  require_same_modulus(modulus_, o.modulus_);
  if (size() != o.size()) throw std::invalid_argument("FieldVector: dimension mismatch");
  FieldVector r(size(), modulus_);
  for (std::size_t i = 0; i < size(); ++i) r.entries_[i] = mod_sub(entries_[i], o.entries_[i], modulus_);
  return r;
}

FieldVector FieldVector::slice(std::size_t from, std::size_t to) const {
  if (from > to || to > size()) throw std::out_of_range("FieldVector::slice");
  FieldVector r(to - from, modulus_);
  for (std::size_t i = from; i < to; ++i) r.entries_[i - from] = entries_[i];
  return r;
}

FieldVector FieldVector::concat(const FieldVector& a, const FieldVector& b) {
  require_same_modulus(a.modulus_, b.modulus_);
  FieldVector r(a.size() + b.size(), a.modulus_);
  for (std::size_t i = 0; i < a.size(); ++i) r.entries_[i] = a.entries_[i];
  for (std::size_t i = 0; i < b.size(); ++i) r.entries_[a.size() + i] = b.entries_[i];
  return r;
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
    : rows_(rows), cols_(cols), data_(rows * cols, 0u), modulus_(modulus) {
  require_prime(modulus);
}

FieldMatrix FieldMatrix::identity(std::size_t dim, std::uint32_t modulus) {
  FieldMatrix m(dim, dim, modulus);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1);
  return m;
}

void FieldMatrix::set(std::size_t r, std::size_t c, std::uint32_t v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("FieldMatrix::set");
  data_[r * cols_ + c] = v % modulus_;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& o) const {
  require_same_modulus(modulus_, o.modulus_);
  if (cols_ != o.rows_) throw std::invalid_argument("FieldMatrix: dimension mismatch in product");
  FieldMatrix r(rows_, o.cols_, modulus_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      std::uint32_t a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        r.data_[i * o.cols_ + j] =
            mod_add(r.data_[i * o.cols_ + j], mod_mul(a, o.at(k, j), modulus_), modulus_);
      }
    }
  }
  return r;
}

FieldVector FieldMatrix::operator*(const FieldVector& v) const {
  require_same_modulus(modulus_, v.modulus());
  if (cols_ != v.size()) throw std::invalid_argument("FieldMatrix: dimension mismatch in apply");
  FieldVector r(rows_, modulus_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      acc += static_cast<std::uint64_t>(at(i, j)) * v[j];
    }
    r.set(i, static_cast<std::uint32_t>(acc % modulus_));
  }
  return r;
}

FieldMatrix FieldMatrix::row_block(std::size_t from, std::size_t to) const {
  if (from > to || to > rows_) throw std::out_of_range("FieldMatrix::row_block");
  FieldMatrix r(to - from, cols_, modulus_);
  for (std::size_t i = from; i < to; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.set(i - from, j, at(i, j));
  return r;
}

std::uint32_t FieldMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  FieldMatrix w = *this;
  std::uint32_t det = 1;
  for (std::size_t col = 0; col < cols_; ++col) {
    std::size_t pivot = col;
    while (pivot < rows_ && w.at(pivot, col) == 0) ++pivot;
    if (pivot == rows_) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < cols_; ++j) {
        std::uint32_t t = w.at(col, j);
        w.set(col, j, w.at(pivot, j));
        w.set(pivot, j, t);
      }
      det = mod_neg(det, modulus_);
    }
    std::uint32_t p = w.at(col, col);
    det = mod_mul(det, p, modulus_);
    std::uint32_t pinv = mod_inv(p, modulus_);
    for (std::size_t r = col + 1; r < rows_; ++r) {
      std::uint32_t factor = mod_mul(w.at(r, col), pinv, modulus_);
      if (factor == 0) continue;
      for (std::size_t j = col; j < cols_; ++j) {
        w.set(r, j, mod_sub(w.at(r, j), mod_mul(factor, w.at(col, j), modulus_), modulus_));
      }
    }
  }
  return det;
}

std::size_t FieldMatrix::rank() const {
  FieldMatrix w = *this;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows_ && w.at(pivot, col) == 0) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols_; ++j) {
        std::uint32_t t = w.at(rank, j);
        w.set(rank, j, w.at(pivot, j));
        w.set(pivot, j, t);
      }
    }
    std::uint32_t pinv = mod_inv(w.at(rank, col), modulus_);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == rank) continue;
      std::uint32_t factor = mod_mul(w.at(r, col), pinv, modulus_);
      if (factor == 0) continue;
      for (std::size_t j = col; j < cols_; ++j) {
        w.set(r, j, mod_sub(w.at(r, j), mod_mul(factor, w.at(rank, j), modulus_), modulus_));
      }
    }
    ++rank;
  }
  return rank;
}

FieldMatrix FieldMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  FieldMatrix w = *this;
  FieldMatrix inv = identity(rows_, modulus_);
  for (std::size_t col = 0; col < cols_; ++col) {
    std::size_t pivot = col;
    while (pivot < rows_ && w.at(pivot, col) == 0) ++pivot;
    if (pivot == rows_) throw std::domain_error("FieldMatrix::inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < cols_; ++j) {
        std::uint32_t t = w.at(col, j);
        w.set(col, j, w.at(pivot, j));
        w.set(pivot, j, t);
        t = inv.at(col, j);
        inv.set(col, j, inv.at(pivot, j));
        inv.set(pivot, j, t);
      }
    }
    std::uint32_t pinv = mod_inv(w.at(col, col), modulus_);
    for (std::size_t j = 0; j < cols_; ++j) {
      w.set(col, j, mod_mul(w.at(col, j), pinv, modulus_));
      inv.set(col, j, mod_mul(inv.at(col, j), pinv, modulus_));
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == col) continue;
      std::uint32_t factor = w.at(r, col);
      if (factor == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        w.set(r, j, mod_sub(w.at(r, j), mod_mul(factor, w.at(col, j), modulus_), modulus_));
        inv.set(r, j, mod_sub(inv.at(r, j), mod_mul(factor, inv.at(col, j), modulus_), modulus_));
      }
    }
  }
  return inv;
}

std::uint32_t sample_element(std::uint32_t q, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, q - 1);
  return dist(rng);
}

FieldVector sample_vector(std::size_t dim, std::uint32_t q, std::mt19937_64& rng) {
  FieldVector v(dim, q);
  for (std::size_t i = 0; i < dim; ++i) v.set(i, sample_element(q, rng));
  return v;
}

FieldMatrix sample_matrix(std::size_t rows, std::size_t cols, std::uint32_t q,
                          std::mt19937_64& rng) {
  FieldMatrix m(rows, cols, q);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, sample_element(q, rng));
  return m;
}

FieldMatrix sample_invertible(std::size_t dim, std::uint32_t q, std::mt19937_64& rng) {
  if (dim == 0) throw std::invalid_argument("sample_invertible: dimension must be positive");
  while (true) {
    FieldMatrix m = sample_matrix(dim, dim, q, rng);
    if (m.determinant() != 0) return m;
  }
}

CodePair make_code_pair(int n, int l, int k, int kprime, std::uint32_t q,
                        std::mt19937_64& rng) {
  if (n < 1 || l < 1 || k < 1 || kprime < 1) {
    throw std::invalid_argument("make_code_pair: dimensions must be positive");
  }
  CodeDims dims{n, l, k, kprime, q};
  if (dims.payload_len() > dims.block_len()) {
    throw std::invalid_argument("make_code_pair: k + k' exceeds n*l");
  }
  const std::size_t nl = static_cast<std::size_t>(dims.block_len());
  const std::size_t payload = static_cast<std::size_t>(dims.payload_len());

  CodePair pair;
  pair.dims = dims;
  pair.g1 = sample_invertible(nl, q, rng);
  pair.g2 = pair.g1.inverse().row_block(payload, nl);
  pair.g3 = sample_invertible(payload, q, rng);
  pair.g4 = pair.g3.inverse().row_block(0, static_cast<std::size_t>(k));
  return pair;
}

std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp) noexcept {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

namespace {

void digits_of(int a, std::uint32_t q, int l, std::uint32_t* out) {
  if (l > 16) throw std::invalid_argument("field dimension above 16 is unsupported");
  for (int t = 0; t < l; ++t) {
    out[t] = static_cast<std::uint32_t>(a % q);
    a /= static_cast<int>(q);
  }
}

int from_digits(const std::uint32_t* d, std::uint32_t q, int l) {
  int r = 0;
  for (int t = l - 1; t >= 0; --t) r = r * static_cast<int>(q) + static_cast<int>(d[t]);
  return r;
}

}  // namespace

int index_add(int a, int b, std::uint32_t q, int l) {
  std::uint32_t da[16], db[16];
  digits_of(a, q, l, da);
  digits_of(b, q, l, db);
  for (int t = 0; t < l; ++t) da[t] = mod_add(da[t], db[t], q);
  return from_digits(da, q, l);
}

int index_sub(int a, int b, std::uint32_t q, int l) {
  std::uint32_t da[16], db[16];
  digits_of(a, q, l, da);
  digits_of(b, q, l, db);
  for (int t = 0; t < l; ++t) da[t] = mod_sub(da[t], db[t], q);
  return from_digits(da, q, l);
}

int index_scale(std::uint32_t coeff, int a, std::uint32_t q, int l) {
  std::uint32_t da[16];
  digits_of(a, q, l, da);
  for (int t = 0; t < l; ++t) da[t] = mod_mul(coeff % q, da[t], q);
  return from_digits(da, q, l);
}

}  // namespace modsum::gf

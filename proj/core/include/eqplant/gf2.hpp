#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eqplant {

// Packed bit vector over GF(2). Bits past size() in the last word stay zero.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  // "0110" -> bits 0..3; any character other than '0'/'1' throws.
  static BitVector from_string(std::string_view bits);

  static constexpr std::size_t word_count(std::size_t bits) noexcept {
    return (bits + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const noexcept { return size_; }
  bool get(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  bool operator[](std::size_t i) const noexcept { return get(i); }
  void set(std::size_t i, bool value) noexcept {
    const Word mask = Word{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= mask;
    else
      words_[i / kWordBits] &= ~mask;
  }
  void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  bool operator==(const BitVector&) const = default;

  std::size_t count() const noexcept;
  bool any() const noexcept;
  std::span<const Word> words() const noexcept { return words_; }
  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

// Dense row-major bit matrix; each row is padded to a whole number of words.
class Gf2Matrix {
 public:
  using Word = BitVector::Word;

  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols);

  // One string per row, all of equal length, characters '0'/'1'.
  static Gf2Matrix from_rows(const std::vector<std::string>& rows);
  static Gf2Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t row_words() const noexcept { return stride_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value) noexcept;

  std::span<Word> row(std::size_t r) noexcept { return {data_.data() + r * stride_, stride_}; }
  std::span<const Word> row(std::size_t r) const noexcept {
    return {data_.data() + r * stride_, stride_};
  }
  bool row_is_zero(std::size_t r) const noexcept;

  // row[dst] ^= row[src], touching only words from first_word onward.
  void xor_row(std::size_t dst, std::size_t src, std::size_t first_word = 0) noexcept;
  void swap_rows(std::size_t a, std::size_t b) noexcept;

  Gf2Matrix transpose() const;
  BitVector multiply(const BitVector& x) const;

  bool operator==(const Gf2Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

struct RowEchelon {
  Gf2Matrix reduced;  // reduced row-echelon form
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;  // strictly increasing, one per nonzero row
};

// Gauss-Jordan elimination with word-level XOR. A zero matrix gives rank 0.
RowEchelon row_reduce(Gf2Matrix a);

std::size_t rank(const Gf2Matrix& a);

// Solution set of A x = b. The null-space basis is always filled, even for
// inconsistent systems; basis[j] has a one at free_cols[j] and zeros at every
// other free column, so free-variable values are the basis coefficients.
struct Gf2SolutionSet {
  std::size_t n_vars = 0;
  std::size_t rank = 0;
  std::size_t nullity = 0;
  bool consistent = false;
  std::optional<BitVector> particular;  // free variables all zero
  std::vector<BitVector> basis;
  std::vector<std::size_t> free_cols;

  // 2^nullity when it fits in 64 bits.
  std::optional<std::uint64_t> solution_count() const;
};

// Throws std::invalid_argument when b.size() != a.rows().
Gf2SolutionSet solve_affine(const Gf2Matrix& a, const BitVector& b);

// All solutions in canonical order: solution t is
//   particular ^ sum_j c_j basis[j],  c_j = bit (nullity-1-j) of t,
// i.e. lexicographic over the coefficient tuple (c_0, ..., c_{d-1}), which is
// the same as lexicographic over free-variable values in free-column order.
// Throws DomainError for inconsistent systems or when 2^nullity > limit.
std::vector<BitVector> enumerate_solutions(const Gf2SolutionSet& s, std::uint64_t limit);

// Canonical index of x in enumerate_solutions order, or nullopt if x is not a
// solution.
std::optional<std::uint64_t> solution_index(const Gf2SolutionSet& s, const BitVector& x);

// Solution with canonical index t.
BitVector solution_at(const Gf2SolutionSet& s, std::uint64_t t);

}  // namespace eqplant

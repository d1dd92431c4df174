#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/finset.hpp"

namespace kanlift {

/// Dense boolean matrix; row i is the set of j with (i, j) related.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t rows, std::size_t cols) : rows_(rows, Bits(cols)), cols_(cols) {}

  static Relation identity(std::size_t n) {
    Relation r(n, n);
    for (std::size_t i = 0; i < n; ++i) r.set(i, i);
    return r;
  }
  static Relation full(std::size_t rows, std::size_t cols) {
    Relation r(rows, cols);
    for (auto& row : r.rows_) row.set();
    return r;
  }
  static Relation from_rows(std::vector<Bits> rows, std::size_t cols) {
    Relation r;
    for (const auto& row : rows)
      require(row.size() == cols, ErrorKind::InvalidStructure, "relation row of wrong width");
    r.rows_ = std::move(rows);
    r.cols_ = cols;
    return r;
  }

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool test(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  void set(std::size_t i, std::size_t j, bool value = true) { rows_[i].set(j, value); }
  const Bits& row(std::size_t i) const { return rows_[i]; }
  Bits& row(std::size_t i) { return rows_[i]; }
  const std::vector<Bits>& row_bits() const noexcept { return rows_; }

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& row : rows_) n += row.count();
    return n;
  }

  /// R[V] = { j | ∃ i ∈ V. (i, j) ∈ R }
  Bits image(const Bits& v) const {
    Bits out(cols_);
    for_each_bit(v, [&](std::size_t i) { out |= rows_[i]; });
    return out;
  }

  Relation converse() const {
    Relation r(cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
      for_each_bit(rows_[i], [&](std::size_t j) { r.set(j, i); });
    return r;
  }

  bool is_reflexive() const {
    for (std::size_t i = 0; i < rows(); ++i)
      if (i >= cols_ || !rows_[i].test(i)) return false;
    return true;
  }

  bool is_transitive() const {
    for (std::size_t i = 0; i < rows(); ++i) {
      bool ok = true;
      for_each_bit(rows_[i], [&](std::size_t j) { ok = ok && rows_[j].is_subset_of(rows_[i]); });
      if (!ok) return false;
    }
    return true;
  }

  bool is_subset_of(const Relation& other) const {
    for (std::size_t i = 0; i < rows(); ++i)
      if (!rows_[i].is_subset_of(other.rows_[i])) return false;
    return true;
  }

  /// Warshall closure; requires a square relation.
  Relation transitive_closure() const {
    Relation r = *this;
    for (std::size_t k = 0; k < rows(); ++k)
      for (std::size_t i = 0; i < rows(); ++i)
        if (r.rows_[i].test(k)) r.rows_[i] |= r.rows_[k];
    return r;
  }

  Relation& operator&=(const Relation& other) {
    for (std::size_t i = 0; i < rows(); ++i) rows_[i] &= other.rows_[i];
    return *this;
  }
  Relation& operator|=(const Relation& other) {
    for (std::size_t i = 0; i < rows(); ++i) rows_[i] |= other.rows_[i];
    return *this;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<Bits> rows_;
  std::size_t cols_ = 0;
};

/// R ; S
inline Relation compose(const Relation& r, const Relation& s) {
  require(r.cols() == s.rows(), ErrorKind::CarrierMismatch, "relational composition of mismatched relations");
  Relation out(r.rows(), s.cols());
  for (std::size_t i = 0; i < r.rows(); ++i) out.row(i) = s.image(r.row(i));
  return out;
}

inline std::string describe_pairs(const FinSet& left, const FinSet& right, const Relation& r,
                                  bool skip_diagonal = false) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for_each_bit(r.row(i), [&](std::size_t j) {
      if (skip_diagonal && i == j) return;
      if (!first) s += ", ";
      s += "(" + left[i] + "," + right[j] + ")";
      first = false;
    });
  }
  return s + "}";
}

}  // namespace kanlift

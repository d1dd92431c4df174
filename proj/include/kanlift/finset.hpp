#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <optional>
#include <ranges>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kanlift/error.hpp"

namespace kanlift {

using Atom = std::string;
using Bits = boost::dynamic_bitset<std::uint64_t>;

/// Finite set of string atoms in insertion order. Copies share storage.
class FinSet {
 public:
  FinSet() : data_(empty_data()) {}

  explicit FinSet(std::vector<Atom> atoms) {
    auto data = std::make_shared<Data>();
    data->index.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const bool fresh = data->index.emplace(atoms[i], i).second;
      require(fresh, ErrorKind::InvalidStructure, "duplicate atom \"" + atoms[i] + "\"");
    }
    data->atoms = std::move(atoms);
    data_ = std::move(data);
  }

  FinSet(std::initializer_list<Atom> atoms) : FinSet(std::vector<Atom>(atoms)) {}

  /// {"0", "1", ..., "n-1"}
  static FinSet range(std::size_t n) {
    std::vector<Atom> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back(std::to_string(i));
    return FinSet(std::move(atoms));
  }

  std::size_t size() const noexcept { return data_->atoms.size(); }
  bool empty() const noexcept { return data_->atoms.empty(); }
  const Atom& operator[](std::size_t i) const { return data_->atoms[i]; }
  const std::vector<Atom>& atoms() const noexcept { return data_->atoms; }

  std::optional<std::size_t> find(const Atom& atom) const {
    const auto it = data_->index.find(atom);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const Atom& atom) const {
    const auto i = find(atom);
    require(i.has_value(), ErrorKind::InvalidStructure, "unknown atom \"" + atom + "\"");
    return *i;
  }

  Bits full() const { return Bits(size()).set(); }
  Bits none() const { return Bits(size()); }

  friend bool operator==(const FinSet& a, const FinSet& b) {
    return a.data_ == b.data_ || a.data_->atoms == b.data_->atoms;
  }

 private:
  struct Data {
    std::vector<Atom> atoms;
    std::unordered_map<Atom, std::size_t> index;
  };

  static std::shared_ptr<const Data> empty_data() {
    static const auto empty = std::make_shared<const Data>();
    return empty;
  }

  std::shared_ptr<const Data> data_;
};

inline Bits singleton_bits(std::size_t n, std::size_t i) {
  Bits b(n);
  b.set(i);
  return b;
}

/// Calls fn(i) for every set bit in ascending order.
template <class Fn>
void for_each_bit(const Bits& bits, Fn&& fn) {
  for (auto i = bits.find_first(); i != Bits::npos; i = bits.find_next(i)) fn(i);
}

inline std::vector<std::size_t> bit_indices(const Bits& bits) {
  std::vector<std::size_t> out;
  for_each_bit(bits, [&](std::size_t i) { out.push_back(i); });
  return out;
}

/// Bits whose i-th bit is the i-th bit of `mask`.
inline Bits bits_from_mask(std::size_t n, std::uint64_t mask) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1U) b.set(i);
  return b;
}

/// A subset of a fixed ambient FinSet.
class Subset {
 public:
  Subset() = default;
  Subset(FinSet ambient, Bits members) : ambient_(std::move(ambient)), members_(std::move(members)) {
    require(members_.size() == ambient_.size(), ErrorKind::AmbientMismatch,
            "subset bitmap size differs from ambient size");
  }
  Subset(FinSet ambient, const std::vector<Atom>& members) : ambient_(std::move(ambient)) {
    members_ = ambient_.none();
    for (const auto& a : members) {
      const auto i = ambient_.find(a);
      require(i.has_value(), ErrorKind::AmbientMismatch, "\"" + a + "\" is not in the ambient set");
      members_.set(*i);
    }
  }

  static Subset empty(FinSet ambient) {
    Bits b = ambient.none();
    return Subset(std::move(ambient), std::move(b));
  }
  static Subset full(FinSet ambient) {
    Bits b = ambient.full();
    return Subset(std::move(ambient), std::move(b));
  }

  const FinSet& ambient() const noexcept { return ambient_; }
  const Bits& bits() const noexcept { return members_; }
  bool contains(std::size_t i) const { return members_.test(i); }
  std::size_t size() const { return members_.count(); }

  std::vector<Atom> members() const {
    std::vector<Atom> out;
    for_each_bit(members_, [&](std::size_t i) { out.push_back(ambient_[i]); });
    return out;
  }

  friend Subset operator&(const Subset& a, const Subset& b) {
    require(a.ambient_ == b.ambient_, ErrorKind::AmbientMismatch, "intersection across ambients");
    return Subset(a.ambient_, a.members_ & b.members_);
  }
  friend Subset operator|(const Subset& a, const Subset& b) {
    require(a.ambient_ == b.ambient_, ErrorKind::AmbientMismatch, "union across ambients");
    return Subset(a.ambient_, a.members_ | b.members_);
  }
  friend bool operator==(const Subset& a, const Subset& b) {
    return a.ambient_ == b.ambient_ && a.members_ == b.members_;
  }

 private:
  FinSet ambient_;
  Bits members_;
};

/// Total function between finite sets, stored as image indices.
class FinFun {
 public:
  FinFun() = default;
  FinFun(FinSet dom, FinSet cod, std::vector<std::size_t> images)
      : dom_(std::move(dom)), cod_(std::move(cod)), images_(std::move(images)) {
    require(images_.size() == dom_.size(), ErrorKind::InvalidStructure,
            "function does not assign every domain element");
    for (const auto y : images_)
      require(y < cod_.size(), ErrorKind::InvalidStructure, "function image outside codomain");
  }

  static FinFun identity(const FinSet& x) {
    std::vector<std::size_t> images(x.size());
    for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
    return FinFun(x, x, std::move(images));
  }

  static FinFun constant(const FinSet& dom, const FinSet& cod, std::size_t value) {
    return FinFun(dom, cod, std::vector<std::size_t>(dom.size(), value));
  }

  const FinSet& dom() const noexcept { return dom_; }
  const FinSet& cod() const noexcept { return cod_; }
  const std::vector<std::size_t>& images() const noexcept { return images_; }
  std::size_t operator()(std::size_t i) const { return images_[i]; }

  /// Direct image of a bitset over dom.
  Bits image(const Bits& s) const {
    Bits out = cod_.none();
    for_each_bit(s, [&](std::size_t i) { out.set(images_[i]); });
    return out;
  }

  /// Preimage of a bitset over cod.
  Bits preimage(const Bits& s) const {
    Bits out = dom_.none();
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (s.test(images_[i])) out.set(i);
    return out;
  }

  friend bool operator==(const FinFun& a, const FinFun& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.images_ == b.images_;
  }

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<std::size_t> images_;
};

/// g ∘ f
inline FinFun compose(const FinFun& g, const FinFun& f) {
  require(f.cod() == g.dom(), ErrorKind::CarrierMismatch, "composition of non-composable functions");
  std::vector<std::size_t> images(f.dom().size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = g(f(i));
  return FinFun(f.dom(), g.cod(), std::move(images));
}

inline Subset preimage(const FinFun& f, const Subset& s) {
  require(s.ambient() == f.cod(), ErrorKind::AmbientMismatch, "preimage: subset is not over the codomain");
  return Subset(f.dom(), f.preimage(s.bits()));
}

/// Lazy enumeration of all functions dom -> cod in odometer order: the first
/// domain element is the most significant digit. Position k of the
/// enumeration is the function with function_index k.
class FunctionRange : public std::ranges::view_interface<FunctionRange> {
 public:
  class iterator {
   public:
    using value_type = FinFun;
    using difference_type = std::ptrdiff_t;
    using iterator_concept = std::input_iterator_tag;

    iterator() = default;
    explicit iterator(const FunctionRange* range) : range_(range) {
      done_ = range->cod_.empty() && !range->dom_.empty();
      digits_.assign(range->dom_.size(), 0);
    }

    FinFun operator*() const { return FinFun(range_->dom_, range_->cod_, digits_); }

    iterator& operator++() {
      const std::size_t base = range_->cod_.size();
      std::size_t k = digits_.size();
      while (k > 0) {
        --k;
        if (++digits_[k] < base) return *this;
        digits_[k] = 0;
      }
      done_ = true;
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.done_; }

   private:
    const FunctionRange* range_ = nullptr;
    std::vector<std::size_t> digits_;
    bool done_ = true;
  };

  FunctionRange() = default;
  FunctionRange(FinSet dom, FinSet cod) : dom_(std::move(dom)), cod_(std::move(cod)) {}

  iterator begin() const { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

 private:
  FinSet dom_;
  FinSet cod_;
};

/// All |cod|^|dom| total functions, lazily. Empty when cod is empty and dom is not.
inline FunctionRange enumerate_functions(const FinSet& dom, const FinSet& cod) {
  return FunctionRange(dom, cod);
}

inline std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    require(base == 0 || out <= limit / base, ErrorKind::CarrierTooLarge,
            "function space exceeds " + std::to_string(limit) + " elements");
    out *= base;
  }
  return out;
}

/// Position of f in enumerate_functions(f.dom(), f.cod()).
inline std::size_t function_index(const std::vector<std::size_t>& images, std::size_t cod_size) {
  std::size_t index = 0;
  for (const auto y : images) index = index * cod_size + y;
  return index;
}

inline std::vector<std::size_t> function_digits(std::size_t index, std::size_t dom_size,
                                                std::size_t cod_size) {
  std::vector<std::size_t> digits(dom_size);
  for (std::size_t k = dom_size; k > 0; --k) {
    digits[k - 1] = index % cod_size;
    index /= cod_size;
  }
  return digits;
}

inline constexpr std::size_t kMaxEnumeratedCarrier = std::size_t{1} << 20;

/// The set a ⋔ x of all functions a -> x, ordered as enumerate_functions.
/// Atoms are rendered "(x_1,...,x_n)".
inline FinSet function_space(const FinSet& a, const FinSet& x) {
  const std::size_t n = checked_power(x.size(), a.size(), kMaxEnumeratedCarrier);
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (const auto& f : enumerate_functions(a, x)) {
    std::string s = "(";
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k) s += ',';
      s += x[f(k)];
    }
    s += ')';
    atoms.push_back(std::move(s));
  }
  return FinSet(std::move(atoms));
}

/// a × b in row-major order; atoms are rendered "(x,y)".
inline FinSet product(const FinSet& a, const FinSet& b) {
  std::vector<Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) atoms.push_back("(" + a[i] + "," + b[j] + ")");
  return FinSet(std::move(atoms));
}

inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t right_size) {
  return i * right_size + j;
}

/// "{a,b}" rendering of a subset, used in witnesses and tables.
inline std::string describe(const FinSet& ambient, const Bits& bits) {
  std::string s = "{";
  bool first = true;
  for_each_bit(bits, [&](std::size_t i) {
    if (!first) s += ',';
    s += ambient[i];
    first = false;
  });
  return s + "}";
}

inline std::string describe(const Subset& s) { return describe(s.ambient(), s.bits()); }

/// "[a->x, b->y]"
inline std::string describe(const FinFun& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.dom().size(); ++i) {
    if (i) s += ", ";
    s += f.dom()[i] + "->" + f.cod()[f(i)];
  }
  return s + "]";
}

}  // namespace kanlift

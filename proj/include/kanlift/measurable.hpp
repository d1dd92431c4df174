#pragma once

// Finite measurable spaces. A σ-algebra on a finite set is the family of
// unions of the blocks of a partition, so every measurability question below
// is answered by block arithmetic. Masses are exact rationals.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/finset.hpp"
#include "kanlift/rational.hpp"

namespace kanlift {

/// Upper bound on the number of blocks any subset loop may range over.
/// Read from KANLIFT_MAX_BLOCKS, default 16.
inline std::size_t max_blocks() {
  if (const char* env = std::getenv("KANLIFT_MAX_BLOCKS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0 && v <= 30) return static_cast<std::size_t>(v);
  }
  return 16;
}

class FinMeasSpace {
 public:
  FinMeasSpace() = default;

  /// Blocks must be nonempty, pairwise disjoint and cover the carrier. They
  /// are stored ordered by their least element.
  FinMeasSpace(FinSet carrier, std::vector<Bits> blocks) : carrier_(std::move(carrier)) {
    Bits seen = carrier_.none();
    for (auto& b : blocks) {
      require(b.size() == carrier_.size(), ErrorKind::InvalidStructure, "block of wrong width");
      require(b.any(), ErrorKind::InvalidStructure, "empty block");
      require(!b.intersects(seen), ErrorKind::InvalidStructure, "blocks overlap");
      seen |= b;
    }
    require(seen.count() == carrier_.size(), ErrorKind::InvalidStructure, "blocks do not cover the carrier");
    std::sort(blocks.begin(), blocks.end(),
              [](const Bits& a, const Bits& b) { return a.find_first() < b.find_first(); });
    blocks_ = std::move(blocks);
    block_of_.assign(carrier_.size(), 0);
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      for_each_bit(blocks_[k], [&](std::size_t x) { block_of_[x] = k; });
  }

  static FinMeasSpace discrete(const FinSet& c) {
    std::vector<Bits> blocks;
    for (std::size_t i = 0; i < c.size(); ++i) blocks.push_back(singleton_bits(c.size(), i));
    return FinMeasSpace(c, std::move(blocks));
  }

  static FinMeasSpace indiscrete(const FinSet& c) {
    if (c.empty()) return FinMeasSpace(c, {});
    return FinMeasSpace(c, {c.full()});
  }

  const FinSet& carrier() const noexcept { return carrier_; }
  const std::vector<Bits>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t block_of(std::size_t x) const { return block_of_[x]; }

  /// The union of the blocks selected by `mask`.
  Bits block_union(std::uint64_t mask) const {
    Bits out = carrier_.none();
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      if ((mask >> k) & 1U) out |= blocks_[k];
    return out;
  }

  bool is_measurable(const Bits& u) const {
    require(u.size() == carrier_.size(), ErrorKind::AmbientMismatch, "set of wrong width");
    for (const auto& b : blocks_)
      if (b.intersects(u) && !b.is_subset_of(u)) return false;
    return true;
  }

  /// Mask of blocks making up a measurable set.
  std::uint64_t block_mask(const Bits& u) const {
    require(is_measurable(u), ErrorKind::NotMeasurable, describe(carrier_, u) + " is not measurable");
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      if (blocks_[k].intersects(u)) mask |= std::uint64_t{1} << k;
    return mask;
  }

  /// Number of measurable sets, after checking the configured bound.
  std::uint64_t measurable_count() const {
    require(blocks_.size() <= max_blocks(), ErrorKind::TooManyBlocks,
            std::to_string(blocks_.size()) + " blocks exceed KANLIFT_MAX_BLOCKS=" + std::to_string(max_blocks()));
    return std::uint64_t{1} << blocks_.size();
  }

  /// All measurable sets, indexed by block mask.
  std::vector<Bits> measurable_sets() const {
    std::vector<Bits> out;
    const std::uint64_t n = measurable_count();
    out.reserve(n);
    for (std::uint64_t m = 0; m < n; ++m) out.push_back(block_union(m));
    return out;
  }

  friend bool operator==(const FinMeasSpace& a, const FinMeasSpace& b) {
    return a.carrier_ == b.carrier_ && a.blocks_ == b.blocks_;
  }

 private:
  FinSet carrier_;
  std::vector<Bits> blocks_;
  std::vector<std::size_t> block_of_;
};

/// Coarsest partition whose σ-algebra contains every generator: points are in
/// the same block iff no generator separates them.
inline FinMeasSpace sigma_generate(const FinSet& carrier, const std::vector<Bits>& generators) {
  std::vector<Bits> blocks;
  std::vector<bool> placed(carrier.size(), false);
  for (std::size_t x = 0; x < carrier.size(); ++x) {
    if (placed[x]) continue;
    Bits block = carrier.none();
    for (std::size_t y = x; y < carrier.size(); ++y) {
      bool same = true;
      for (const auto& g : generators) {
        require(g.size() == carrier.size(), ErrorKind::AmbientMismatch, "generator of wrong width");
        same = same && g.test(x) == g.test(y);
      }
      if (same) {
        block.set(y);
        placed[y] = true;
      }
    }
    blocks.push_back(std::move(block));
  }
  return FinMeasSpace(carrier, std::move(blocks));
}

/// Measurable iff the preimage of every block of cod is a union of blocks of dom.
inline bool is_measurable_fun(const FinFun& f, const FinMeasSpace& dom, const FinMeasSpace& cod) {
  require(f.dom() == dom.carrier() && f.cod() == cod.carrier(), ErrorKind::CarrierMismatch,
          "is_measurable_fun: function does not go between the spaces");
  for (const auto& b : cod.blocks())
    if (!dom.is_measurable(f.preimage(b))) return false;
  return true;
}

/// Sub-probability measure given by an exact mass per block.
class SubProb {
 public:
  SubProb() = default;
  SubProb(FinMeasSpace space, std::vector<Rational> mass) : space_(std::move(space)), mass_(std::move(mass)) {
    require(mass_.size() == space_.block_count(), ErrorKind::InvalidStructure,
            "one mass per block expected");
    Rational total = 0;
    for (const auto& m : mass_) {
      require(m >= 0, ErrorKind::InvalidStructure, "negative mass " + to_string(m));
      total += m;
    }
    require(total <= 1, ErrorKind::InvalidStructure, "total mass " + to_string(total) + " exceeds 1");
  }

  static SubProb zero(const FinMeasSpace& space) {
    return SubProb(space, std::vector<Rational>(space.block_count(), Rational(0)));
  }

  /// Point mass at x (its block receives mass 1).
  static SubProb dirac(const FinMeasSpace& space, std::size_t x) {
    std::vector<Rational> mass(space.block_count(), Rational(0));
    mass[space.block_of(x)] = 1;
    return SubProb(space, std::move(mass));
  }

  const FinMeasSpace& space() const noexcept { return space_; }
  const std::vector<Rational>& mass() const noexcept { return mass_; }

  Rational total() const {
    Rational t = 0;
    for (const auto& m : mass_) t += m;
    return t;
  }

  /// ν(U) for U given as a block mask.
  Rational on_blocks(std::uint64_t mask) const {
    Rational t = 0;
    for (std::size_t k = 0; k < mass_.size(); ++k)
      if ((mask >> k) & 1U) t += mass_[k];
    return t;
  }

  friend bool operator==(const SubProb&, const SubProb&) = default;

 private:
  FinMeasSpace space_;
  std::vector<Rational> mass_;
};

/// ν(U); throws NotMeasurable if U is not a union of blocks.
inline Rational measure_eval(const SubProb& v, const Subset& u) {
  require(u.ambient() == v.space().carrier(), ErrorKind::AmbientMismatch, "measure_eval: set over another carrier");
  return v.on_blocks(v.space().block_mask(u.bits()));
}

inline std::string describe(const SubProb& v) {
  std::string s = "{";
  for (std::size_t k = 0; k < v.mass().size(); ++k) {
    if (k) s += ", ";
    s += describe(v.space().carrier(), v.space().blocks()[k]) + ": " + to_string(v.mass()[k]);
  }
  return s + "}";
}

/// Labelled Markov process: kernel[a][s] is the sub-probability reached from
/// state s under action a. States in one block must have identical kernels,
/// which is exactly measurability of s ↦ kernel(a, s)(U) for every U.
class LMP {
 public:
  LMP() = default;
  LMP(FinMeasSpace space, FinSet actions, std::vector<std::vector<SubProb>> kernel)
      : space_(std::move(space)), actions_(std::move(actions)), kernel_(std::move(kernel)) {
    require(kernel_.size() == actions_.size(), ErrorKind::InvalidStructure, "one kernel row per action expected");
    for (std::size_t a = 0; a < kernel_.size(); ++a) {
      require(kernel_[a].size() == space_.carrier().size(), ErrorKind::InvalidStructure,
              "one measure per state expected");
      for (std::size_t s = 0; s < kernel_[a].size(); ++s) {
        require(kernel_[a][s].space() == space_, ErrorKind::SpaceMismatch, "kernel measure over another space");
        const std::size_t first = space_.blocks()[space_.block_of(s)].find_first();
        require(kernel_[a][s] == kernel_[a][first], ErrorKind::NotMeasurable,
                "kernel of action \"" + actions_[a] + "\" is not measurable: states \"" +
                    space_.carrier()[first] + "\" and \"" + space_.carrier()[s] + "\" share a block");
      }
    }
  }

  /// The LMP on `space` with one action whose every state moves according to v.
  static LMP constant(const SubProb& v) {
    const auto& space = v.space();
    return LMP(space, FinSet{"a"}, {std::vector<SubProb>(space.carrier().size(), v)});
  }

  const FinMeasSpace& space() const noexcept { return space_; }
  const FinSet& states() const noexcept { return space_.carrier(); }
  const FinSet& actions() const noexcept { return actions_; }
  const SubProb& kernel(std::size_t action, std::size_t state) const { return kernel_[action][state]; }

 private:
  FinMeasSpace space_;
  FinSet actions_;
  std::vector<std::vector<SubProb>> kernel_;
};

}  // namespace kanlift
